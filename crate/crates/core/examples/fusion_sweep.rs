//! Fusion decisions for a few frame-count profiles and the accuracy curve
//! over thresholds 0..=10 for a small hand-made case set.

use emofuse::fusion::{fuse, sweep_to_csv, threshold_sweep, video_emotion, EmotionCounts, FusionCase, SWEEP_THRESHOLDS};

fn case(counts: &[(&str, usize)], audio: &str, truth: &str) -> FusionCase {
    FusionCase {
        counts: counts.iter().copied().collect(),
        audio_label: audio.into(),
        true_label: truth.into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for counts in [
        vec![("happy", 20), ("sad", 5)],
        vec![("happy", 14), ("sad", 5)],
        vec![("angry", 8), ("fear", 7), ("sad", 1)],
        vec![("fear", 6), ("sad", 6)],
    ] {
        let counts: EmotionCounts = counts.into_iter().collect();
        let video = video_emotion(&counts)?;
        let d = fuse(&video, "neutral", 9);
        println!(
            "{:<28} video {:<6} margin {:>2} -> {:<7} from {:?}",
            counts.to_field(),
            video.label,
            video.margin,
            d.label,
            d.source
        );
    }

    let cases = vec![
        case(&[("happy", 20), ("sad", 2)], "sad", "happy"),
        case(&[("angry", 9), ("fear", 4)], "angry", "angry"),
        case(&[("fear", 7), ("sad", 6)], "sad", "sad"),
        case(&[("happy", 12)], "neutral", "happy"),
        case(&[("sad", 10), ("angry", 7)], "angry", "angry"),
    ];
    println!("\n{}", sweep_to_csv(&threshold_sweep(&cases, SWEEP_THRESHOLDS)?));
    Ok(())
}
