//! Decision-level fusion of a video verdict (per-frame emotion votes) and an
//! audio verdict.
//!
//! The video verdict is the most frequent frame emotion. Its margin is the
//! gap between the two largest frame counts. When that margin is strictly
//! greater than the threshold the video verdict stands; otherwise the audio
//! verdict is used.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{ClassifyError, Classifier};

/// Frame-count threshold used when none is given.
pub const DEFAULT_THRESHOLD: usize = 9;

/// Thresholds covered by [`threshold_sweep`] by default.
pub const SWEEP_THRESHOLDS: std::ops::RangeInclusive<usize> = 0..=10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("no frames to classify")]
    NoFrames,
    #[error("emotion counts are empty")]
    EmptyCounts,
    #[error("no fusion cases")]
    NoCases,
    #[error("cases line {line}: {message}")]
    BadCase { line: usize, message: String },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Number of frames assigned to each emotion in one clip.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EmotionCounts(BTreeMap<String, usize>);

impl EmotionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: &str, n: usize) {
        *self.0.entry(label.to_string()).or_insert(0) += n;
    }

    pub fn get(&self, label: &str) -> usize {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// `label:count` pairs joined by `;`, in label order.
    pub fn to_field(&self) -> String {
        self.iter()
            .map(|(l, n)| format!("{l}:{n}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_field(field: &str) -> Result<Self, String> {
        let mut counts = Self::new();
        for part in field.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (label, n) = part
                .rsplit_once(':')
                .ok_or_else(|| format!("count {part:?} is not `label:n`"))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("count {n:?} is not a non-negative integer"))?;
            let label = label.trim();
            if label.is_empty() {
                return Err("empty label in counts".into());
            }
            counts.add(label, n);
        }
        Ok(counts)
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for EmotionCounts {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        let mut counts = Self::new();
        for (label, n) in iter {
            counts.add(&label.into(), n);
        }
        counts
    }
}

/// Classifies every frame independently and tallies the predicted labels.
pub fn count_frame_emotions<C, V>(frames: &[V], model: &C) -> Result<EmotionCounts, FusionError>
where
    C: Classifier + ?Sized,
    V: AsRef<[f64]>,
{
    if frames.is_empty() {
        return Err(FusionError::NoFrames);
    }
    let mut counts = EmotionCounts::new();
    for frame in frames {
        counts.add(model.predict(frame.as_ref())?, 1);
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VideoEmotion {
    pub label: String,
    pub margin: usize,
}

/// Most frequent label (ties resolved lexicographically) and its lead over
/// the runner-up. A clip with a single emotion leads by its whole count.
pub fn video_emotion(counts: &EmotionCounts) -> Result<VideoEmotion, FusionError> {
    if counts.total() == 0 {
        return Err(FusionError::EmptyCounts);
    }
    let mut top: Option<(&str, usize)> = None;
    let mut second = 0;
    for (label, n) in counts.iter() {
        match top {
            Some((_, best)) if n <= best => second = second.max(n),
            _ => {
                if let Some((_, best)) = top {
                    second = second.max(best);
                }
                top = Some((label, n));
            }
        }
    }
    let (label, best) = top.expect("non-empty counts");
    Ok(VideoEmotion {
        label: label.to_string(),
        margin: best - second,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Video,
    Audio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionDecision {
    pub label: String,
    pub source: Source,
    pub margin: usize,
    pub video_label: String,
    pub audio_label: String,
}

pub fn fuse(video: &VideoEmotion, audio_label: &str, threshold: usize) -> FusionDecision {
    let source = if video.margin > threshold {
        Source::Video
    } else {
        Source::Audio
    };
    FusionDecision {
        label: match source {
            Source::Video => video.label.clone(),
            Source::Audio => audio_label.to_string(),
        },
        source,
        margin: video.margin,
        video_label: video.label.clone(),
        audio_label: audio_label.to_string(),
    }
}

/// One evaluated clip: frame counts, audio prediction and ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionCase {
    pub counts: EmotionCounts,
    pub audio_label: String,
    pub true_label: String,
}

/// Fused accuracy over `cases` at each threshold.
pub fn threshold_sweep(
    cases: &[FusionCase],
    thresholds: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, f64)>, FusionError> {
    if cases.is_empty() {
        return Err(FusionError::NoCases);
    }
    let videos = cases
        .iter()
        .map(|c| video_emotion(&c.counts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(thresholds
        .into_iter()
        .map(|t| {
            let correct = cases
                .iter()
                .zip(&videos)
                .filter(|(c, v)| fuse(v, &c.audio_label, t).label == c.true_label)
                .count();
            (t, correct as f64 / cases.len() as f64)
        })
        .collect())
}

/// `threshold,accuracy` with a header row and 6-decimal accuracies.
pub fn sweep_to_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("threshold,accuracy\n");
    for (t, acc) in rows {
        let _ = writeln!(out, "{t},{acc:.6}");
    }
    out
}

/// Parses a cases file: `counts,audio_label,true_label` per line, with
/// counts written as `happy:20;sad:5`. Blank lines, `#` comments and a
/// leading header row starting with `counts` are skipped.
pub fn parse_cases(text: &str) -> Result<Vec<FusionCase>, FusionError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || (cases.is_empty() && line.starts_with("counts,")) {
            continue;
        }
        let bad = |message: String| FusionError::BadCase { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 || fields[1].is_empty() || fields[2].is_empty() {
            return Err(bad(format!("expected 3 fields, got {:?}", raw)));
        }
        let counts = EmotionCounts::parse_field(fields[0]).map_err(bad)?;
        if counts.total() == 0 {
            return Err(bad("no frames counted".into()));
        }
        cases.push(FusionCase {
            counts,
            audio_label: fields[1].to_string(),
            true_label: fields[2].to_string(),
        });
    }
    if cases.is_empty() {
        return Err(FusionError::NoCases);
    }
    Ok(cases)
}

pub fn cases_to_csv(cases: &[FusionCase]) -> String {
    let mut out = String::from("counts,audio_label,true_label\n");
    for c in cases {
        let _ = writeln!(out, "{},{},{}", c.counts.to_field(), c.audio_label, c.true_label);
    }
    out
}
