//! Generates the synthetic fixture set, then runs extraction, training and
//! fused prediction on it through the same functions the binary uses.
//!
//! ```text
//! cargo run --release --example end_to_end -- [output-dir]
//! ```

use std::path::PathBuf;

use emofuse::cli::{self, Algorithm, FaceSource, RunConfig};
use emofuse::synth::write_fixture_set;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("emofuse-fixtures"));
    let fx = write_fixture_set(&root, 42)?;
    println!("fixtures in {}", fx.root.display());

    let cfg = RunConfig::default();
    let cascade = cli::load_cascade_at(&fx.cascade)?;

    let audio_csv = root.join("audio_features.csv");
    cli::write_output(&audio_csv, cli::extract_audio(&fx.audio_manifest)?)?;
    let faces = cli::extract_faces(&fx.face_manifest, FaceSource::Detect(&cascade))?;
    println!("face rows: {}, skipped: {}", faces.rows, faces.skipped.len());
    let face_csv = root.join("face_features.csv");
    cli::write_output(&face_csv, &faces.csv)?;

    let audio = cli::train(&audio_csv, Algorithm::Svm { lambda: 1e-4, epochs: 200 }, &cfg)?;
    println!("\n{}", audio.report.to_text());
    let face = cli::train(&face_csv, Algorithm::Knn { k: 3 }, &cfg)?;
    println!("{}", face.report.to_text());

    for (name, (frames, wav)) in [("video_wins", &fx.video_wins), ("audio_wins", &fx.audio_wins)] {
        let p = cli::predict_fused(
            frames,
            wav,
            &face.model,
            &audio.model,
            FaceSource::Detect(&cascade),
            cfg.threshold,
        )?;
        println!("{name}: {}", p.to_json());
    }

    println!("\nthreshold sweep:\n{}", cli::sweep(&fx.cases)?);
    Ok(())
}
