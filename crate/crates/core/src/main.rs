use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use emofuse::classify::{save_model, SvmParams, DEFAULT_K};
use emofuse::cli::{self, Algorithm, CliError, FaceSource, RunConfig, CASCADE_ENV};
use emofuse::face::Cascade;

#[derive(Parser)]
#[command(name = "emofuse", version, about = "Speech + face emotion recognition with decision fusion")]
struct Args {
    /// Seed for the train/test split and SVM sample order.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Video margin (in frames) that must be exceeded to override audio.
    #[arg(long, global = true, default_value_t = emofuse::fusion::DEFAULT_THRESHOLD)]
    threshold: usize,
    /// Training share of each class.
    #[arg(long, global = true, default_value_t = 0.75)]
    split: f64,
    /// Output file; stdout when omitted (required by `train`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct FaceArgs {
    /// Cascade JSON.
    #[arg(long, env = CASCADE_ENV)]
    cascade: Option<PathBuf>,
    /// Use the whole image as the face.
    #[arg(long)]
    no_detect: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Knn,
    Svm,
}

#[derive(Subcommand)]
enum Command {
    /// Utterance feature CSV for a manifest of WAV files.
    ExtractAudio { manifest: PathBuf },
    /// LBP feature CSV for a manifest of PGM images.
    ExtractFaces {
        manifest: PathBuf,
        #[command(flatten)]
        face: FaceArgs,
    },
    /// Train on a seeded split and report held-out accuracy.
    Train {
        features: PathBuf,
        #[arg(long, value_enum, default_value = "svm")]
        algo: Algo,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value_t = SvmParams::default().lambda)]
        lambda: f64,
        #[arg(long, default_value_t = SvmParams::default().epochs)]
        epochs: usize,
    },
    /// Emotion of one WAV file.
    PredictAudio { wav: PathBuf, #[arg(long)] model: PathBuf },
    /// Per-frame emotion counts of a directory of PGM frames.
    PredictVideo {
        frames: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        face: FaceArgs,
    },
    /// Fused decision for a frame directory and its audio track.
    PredictFused {
        frames: PathBuf,
        wav: PathBuf,
        #[arg(long)]
        face_model: PathBuf,
        #[arg(long)]
        audio_model: PathBuf,
        #[command(flatten)]
        face: FaceArgs,
    },
    /// Fusion accuracy for thresholds 0..=10 over a cases CSV.
    Sweep { cases: PathBuf },
    /// Accuracy and confusion matrix of a saved model.
    Eval { features: PathBuf, #[arg(long)] model: PathBuf },
}

fn cascade_for(face: &FaceArgs) -> Result<Option<Cascade>, CliError> {
    match (&face.cascade, face.no_detect) {
        (_, true) => Ok(None),
        (Some(path), false) => cli::load_cascade_at(path).map(Some),
        (None, false) => Err(CliError::Usage(format!(
            "a cascade is required: pass --cascade, set {CASCADE_ENV}, or use --no-detect"
        ))),
    }
}

fn source(cascade: &Option<Cascade>) -> FaceSource<'_> {
    cascade.as_ref().map_or(FaceSource::WholeImage, FaceSource::Detect)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => cli::write_output(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<(), CliError> {
    let cfg = RunConfig {
        seed: args.seed,
        threshold: args.threshold,
        split: args.split,
        out: args.out,
    };
    cfg.validate()?;
    let out = cfg.out.as_deref();
    match args.command {
        Command::ExtractAudio { manifest } => emit(out, &cli::extract_audio(&manifest)?),
        Command::ExtractFaces { manifest, face } => {
            let cascade = cascade_for(&face)?;
            let result = cli::extract_faces(&manifest, source(&cascade))?;
            for skip in &result.skipped {
                eprintln!("warning: skipped {}: {}", skip.path.display(), skip.reason);
            }
            emit(out, &result.csv)
        }
        Command::Train { features, algo, k, lambda, epochs } => {
            let Some(model_path) = out else {
                return Err(CliError::Usage("train needs --out for the model file".into()));
            };
            let algo = match algo {
                Algo::Knn => Algorithm::Knn { k },
                Algo::Svm => Algorithm::Svm { lambda, epochs },
            };
            let outcome = cli::train(&features, algo, &cfg)?;
            cli::write_output(model_path, [])?;
            save_model(&outcome.model, model_path).map_err(|source| CliError::Model {
                path: model_path.to_path_buf(),
                source,
            })?;
            let (report_path, confusion_path) = cli::report_paths(model_path);
            let text = outcome.report.to_text();
            cli::write_output(&report_path, &text)?;
            cli::write_output(&confusion_path, outcome.report.confusion.to_csv())?;
            print!("{text}");
            Ok(())
        }
        Command::PredictAudio { wav, model } => {
            let model = cli::load_model_at(&model)?;
            emit(out, &format!("{}\n", cli::predict_audio(&wav, &model)?))
        }
        Command::PredictVideo { frames, model, face } => {
            let model = cli::load_model_at(&model)?;
            let cascade = cascade_for(&face)?;
            let p = cli::predict_video(&frames, &model, source(&cascade))?;
            let json = serde_json::to_string_pretty(&p).expect("prediction serializes");
            emit(out, &format!("{json}\n"))
        }
        Command::PredictFused { frames, wav, face_model, audio_model, face } => {
            let face_model = cli::load_model_at(&face_model)?;
            let audio_model = cli::load_model_at(&audio_model)?;
            let cascade = cascade_for(&face)?;
            let p = cli::predict_fused(&frames, &wav, &face_model, &audio_model, source(&cascade), cfg.threshold)?;
            emit(out, &format!("{}\n", p.to_json()))
        }
        Command::Sweep { cases } => emit(out, &cli::sweep(&cases)?),
        Command::Eval { features, model } => emit(out, &cli::eval(&features, &model)?.to_text()),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
