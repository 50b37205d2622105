//! Command implementations behind the `emofuse` binary. Each command reads
//! its inputs, runs the pipeline and returns its output as a value; the
//! binary only parses arguments and decides where output goes.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::audio::{extract_utterance_features, FeatureError};
use crate::classify::{
    evaluate, knn_train, load_model, svm_train, ClassifyError, Classifier, ConfusionMatrix, Model,
    PersistError, SvmParams,
};
use crate::dataset::{
    audio_csv_header, audio_csv_row, face_csv_row, read_feature_csv, stratified_split, DatasetError,
    FeatureTable,
};
use crate::face::{crop_face, detect_faces, load_cascade, Cascade, DetectError, FaceBox};
use crate::fusion::{
    count_frame_emotions, fuse, parse_cases, sweep_to_csv, threshold_sweep, video_emotion,
    EmotionCounts, FusionDecision, FusionError, Source, SWEEP_THRESHOLDS,
};
use crate::lbp::{facial_feature_vector, LbpError};
use crate::signal_io::{read_manifest, read_pgm, read_wav, GrayImage, ReadError};

/// Environment variable consulted for the cascade path.
pub const CASCADE_ENV: &str = "EMOFUSE_CASCADE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: ReadError },
    #[error("{}: {source}", path.display())]
    Feature { path: PathBuf, source: FeatureError },
    #[error("{}: {source}", path.display())]
    Detect { path: PathBuf, source: DetectError },
    #[error("{}: {source}", path.display())]
    Lbp { path: PathBuf, source: LbpError },
    #[error("{}: {source}", path.display())]
    Dataset { path: PathBuf, source: DatasetError },
    #[error("{}: {source}", path.display())]
    Model { path: PathBuf, source: PersistError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("{0}")]
    Usage(String),
}

fn at<E, F>(path: &Path, wrap: F) -> impl FnOnce(E) -> CliError
where
    F: FnOnce(PathBuf, E) -> CliError,
{
    let path = path.to_path_buf();
    move |e| wrap(path, e)
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Frame-count margin the video verdict must exceed.
    pub threshold: usize,
    /// Training share of each class.
    pub split: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            threshold: crate::fusion::DEFAULT_THRESHOLD,
            split: 0.75,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(CliError::Usage(format!(
                "--split {} must lie strictly between 0 and 1",
                self.split
            )));
        }
        Ok(())
    }
}

/// How faces are located in input images.
#[derive(Debug, Clone, Copy)]
pub enum FaceSource<'a> {
    /// Run the cascade and crop the best-supported box.
    Detect(&'a Cascade),
    /// Treat the whole image as the face.
    WholeImage,
}

pub fn load_cascade_at(path: &Path) -> Result<Cascade, CliError> {
    load_cascade(path).map_err(at(path, |path, source| CliError::Detect { path, source }))
}

pub fn load_model_at(path: &Path) -> Result<Model, CliError> {
    load_model(path).map_err(at(path, |path, source| CliError::Model { path, source }))
}

fn manifest_entries(manifest: &Path) -> Result<Vec<(PathBuf, String)>, CliError> {
    let m = read_manifest(manifest).map_err(at(manifest, |path, source| CliError::Read { path, source }))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    Ok(m.resolved(base).into_iter().map(|e| (e.path, e.label)).collect())
}

/// 21 utterance features of one WAV file.
pub fn audio_vector(wav: &Path) -> Result<Vec<f64>, CliError> {
    let clip = read_wav(wav).map_err(at(wav, |path, source| CliError::Read { path, source }))?;
    let features = extract_utterance_features(&clip)
        .map_err(at(wav, |path, source| CliError::Feature { path, source }))?;
    Ok(features.values.to_vec())
}

/// 3304-value LBP vector of one image, or `None` when no face is found.
pub fn face_vector(image: &Path, source: FaceSource<'_>) -> Result<Option<Vec<f64>>, CliError> {
    let img = read_pgm(image).map_err(at(image, |path, source| CliError::Read { path, source }))?;
    let face = match source {
        FaceSource::WholeImage => FaceBox::new(0, 0, img.width(), img.height()),
        FaceSource::Detect(cascade) => {
            let boxes = detect_faces(&img, cascade)
                .map_err(at(image, |path, source| CliError::Detect { path, source }))?;
            match boxes.first() {
                Some(b) => *b,
                None => return Ok(None),
            }
        }
    };
    let crop: GrayImage = crop_face(&img, &face);
    let v = facial_feature_vector(&crop).map_err(at(image, |path, source| CliError::Lbp { path, source }))?;
    Ok(Some(v.into_values()))
}

/// Feature CSV (header + one row per clip) for every WAV in a manifest.
pub fn extract_audio(manifest: &Path) -> Result<String, CliError> {
    let entries = manifest_entries(manifest)?;
    let rows: Vec<Result<String, CliError>> = entries
        .par_iter()
        .map(|(path, label)| audio_vector(path).map(|v| audio_csv_row(&v, label)))
        .collect();
    let mut out = audio_csv_header();
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

/// An input image that produced no feature row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipRecord {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct FaceExtraction {
    pub csv: String,
    pub rows: usize,
    pub skipped: Vec<SkipRecord>,
}

/// Headerless facial feature CSV for every image in a manifest. Images
/// without a detected face are skipped and reported.
pub fn extract_faces(manifest: &Path, source: FaceSource<'_>) -> Result<FaceExtraction, CliError> {
    let entries = manifest_entries(manifest)?;
    let results: Vec<Result<Option<Vec<f64>>, CliError>> = entries
        .par_iter()
        .map(|(path, _)| face_vector(path, source))
        .collect();
    let mut out = FaceExtraction {
        csv: String::new(),
        rows: 0,
        skipped: Vec::new(),
    };
    for ((path, label), result) in entries.iter().zip(results) {
        match result? {
            Some(v) => {
                out.csv.push_str(&face_csv_row(&v, label));
                out.csv.push('\n');
                out.rows += 1;
            }
            None => out.skipped.push(SkipRecord {
                path: path.clone(),
                reason: "no face detected".into(),
            }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Knn { k: usize },
    Svm { lambda: f64, epochs: usize },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Knn { .. } => "knn",
            Algorithm::Svm { .. } => "svm",
        }
    }
}

pub fn train_model(table: &FeatureTable, algo: Algorithm, seed: u64) -> Result<Model, CliError> {
    Ok(match algo {
        Algorithm::Knn { k } => knn_train(&table.vectors, &table.labels, k)?.into(),
        Algorithm::Svm { lambda, epochs } => {
            svm_train(&table.vectors, &table.labels, SvmParams { lambda, epochs, seed })?.into()
        }
    })
}

/// Per-class sample counts, accuracy and confusion matrix of one evaluation.
#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    pub lines: Vec<String>,
    pub class_counts: Vec<(String, usize, usize)>,
    pub train_accuracy: Option<f64>,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.title);
        for line in &self.lines {
            s.push_str(line);
            s.push('\n');
        }
        s.push_str("samples per class (train / test):\n");
        for (label, train, test) in &self.class_counts {
            s.push_str(&format!("  {label:<12} {train:>5} / {test}\n"));
        }
        if let Some(acc) = self.train_accuracy {
            s.push_str(&format!("training accuracy: {:.2}%\n", 100.0 * acc));
        }
        s.push_str(&format!(
            "test accuracy: {:.2}% ({}/{})\n",
            100.0 * self.accuracy,
            self.confusion.correct(),
            self.confusion.total()
        ));
        s.push_str("confusion matrix (rows: true class, row %):\n");
        s.push_str(&self.confusion.to_string());
        s
    }
}

pub struct TrainOutcome {
    pub model: Model,
    pub report: Report,
}

/// Seeded stratified split, training on one side and evaluating on the other.
pub fn train(features: &Path, algo: Algorithm, cfg: &RunConfig) -> Result<TrainOutcome, CliError> {
    cfg.validate()?;
    let table = read_feature_csv(features).map_err(at(features, |path, source| CliError::Dataset { path, source }))?;
    if table.class_counts().len() < 2 {
        return Err(ClassifyError::SingleClass.into());
    }
    let (train_idx, test_idx) = stratified_split(&table.labels, cfg.split, cfg.seed)
        .map_err(at(features, |path, source| CliError::Dataset { path, source }))?;
    let train_set = table.subset(&train_idx);
    let test_set = table.subset(&test_idx);
    let model = train_model(&train_set, algo, cfg.seed)?;
    let (train_accuracy, _) = evaluate(&model, &train_set.vectors, &train_set.labels)?;
    let (accuracy, confusion) = evaluate(&model, &test_set.vectors, &test_set.labels)?;

    let test_counts = test_set.class_counts();
    let class_counts = train_set
        .class_counts()
        .into_iter()
        .map(|(l, n)| {
            let t = test_counts.get(&l).copied().unwrap_or(0);
            (l, n, t)
        })
        .collect();
    let mut lines = vec![
        format!("features: {}", features.display()),
        format!("seed: {}  split: {}", cfg.seed, cfg.split),
    ];
    match algo {
        Algorithm::Knn { k } => lines.push(format!("k: {k}")),
        Algorithm::Svm { lambda, epochs } => lines.push(format!("lambda: {lambda}  epochs: {epochs}")),
    }
    Ok(TrainOutcome {
        model,
        report: Report {
            title: format!("{} training report", algo.name()),
            lines,
            class_counts,
            train_accuracy: Some(train_accuracy),
            accuracy,
            confusion,
        },
    })
}

/// Evaluates a saved model on every row of a feature table.
pub fn eval(features: &Path, model_path: &Path) -> Result<Report, CliError> {
    let model = load_model_at(model_path)?;
    let table = read_feature_csv(features).map_err(at(features, |path, source| CliError::Dataset { path, source }))?;
    let (accuracy, confusion) = evaluate(&model, &table.vectors, &table.labels)?;
    Ok(Report {
        title: format!("{} evaluation report", model.kind()),
        lines: vec![
            format!("model: {}", model_path.display()),
            format!("features: {}", features.display()),
        ],
        class_counts: table.class_counts().into_iter().map(|(l, n)| (l, 0, n)).collect(),
        train_accuracy: None,
        accuracy,
        confusion,
    })
}

pub fn predict_audio(wav: &Path, model: &Model) -> Result<String, CliError> {
    Ok(model.predict(&audio_vector(wav)?)?.to_string())
}

/// `*.pgm` files of a directory in file-name order.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let read = std::fs::read_dir(dir).map_err(at(dir, |path, source| CliError::Io { path, source }))?;
    let mut frames = Vec::new();
    for entry in read {
        let path = entry.map_err(at(dir, |path, source| CliError::Io { path, source }))?.path();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")) {
            frames.push(path);
        }
    }
    frames.sort();
    Ok(frames)
}

#[derive(Debug, Clone, Serialize)]
pub struct VideoPrediction {
    pub frames: usize,
    pub skipped_frames: usize,
    pub counts: EmotionCounts,
    pub label: String,
    pub margin: usize,
}

pub fn predict_video(frames_dir: &Path, model: &Model, source: FaceSource<'_>) -> Result<VideoPrediction, CliError> {
    let frames = list_frames(frames_dir)?;
    let vectors: Vec<Option<Vec<f64>>> = frames
        .par_iter()
        .map(|f| face_vector(f, source))
        .collect::<Result<_, _>>()?;
    let total = vectors.len();
    let found: Vec<Vec<f64>> = vectors.into_iter().flatten().collect();
    let counts = count_frame_emotions(&found, model)?;
    let verdict = video_emotion(&counts)?;
    Ok(VideoPrediction {
        frames: found.len(),
        skipped_frames: total - found.len(),
        counts,
        label: verdict.label,
        margin: verdict.margin,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FusedPrediction {
    pub threshold: usize,
    pub frames: usize,
    pub skipped_frames: usize,
    pub video_counts: EmotionCounts,
    pub video_label: String,
    pub margin: usize,
    pub audio_label: String,
    pub label: String,
    pub source: Source,
}

impl FusedPrediction {
    pub fn decision(&self) -> FusionDecision {
        FusionDecision {
            label: self.label.clone(),
            source: self.source,
            margin: self.margin,
            video_label: self.video_label.clone(),
            audio_label: self.audio_label.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("prediction serializes")
    }
}

pub fn predict_fused(
    frames_dir: &Path,
    wav: &Path,
    face_model: &Model,
    audio_model: &Model,
    source: FaceSource<'_>,
    threshold: usize,
) -> Result<FusedPrediction, CliError> {
    // Fail on an unreadable WAV before the slower video pass.
    let audio_features = audio_vector(wav)?;
    let audio_label = audio_model.predict(&audio_features)?.to_string();
    let video = predict_video(frames_dir, face_model, source)?;
    let decision = fuse(
        &crate::fusion::VideoEmotion {
            label: video.label.clone(),
            margin: video.margin,
        },
        &audio_label,
        threshold,
    );
    Ok(FusedPrediction {
        threshold,
        frames: video.frames,
        skipped_frames: video.skipped_frames,
        video_counts: video.counts,
        video_label: decision.video_label,
        margin: decision.margin,
        audio_label: decision.audio_label,
        label: decision.label,
        source: decision.source,
    })
}

/// `threshold,accuracy` rows for thresholds 0..=10.
pub fn sweep(cases_path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(cases_path).map_err(at(cases_path, |path, source| CliError::Io { path, source }))?;
    let cases = parse_cases(&text)?;
    Ok(sweep_to_csv(&threshold_sweep(&cases, SWEEP_THRESHOLDS)?))
}

/// Writes `contents` to `out`, creating parent directories.
pub fn write_output(out: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(at(parent, |path, source| CliError::Io { path, source }))?;
    }
    std::fs::write(out, contents).map_err(at(out, |path, source| CliError::Io { path, source }))
}

/// `<model>.report.txt` and `<model>.confusion.csv` next to a model file.
pub fn report_paths(model_path: &Path) -> (PathBuf, PathBuf) {
    let mut report = model_path.as_os_str().to_owned();
    report.push(".report.txt");
    let mut confusion = model_path.as_os_str().to_owned();
    confusion.push(".confusion.csv");
    (report.into(), confusion.into())
}
