//! Utterance feature vector of a WAV file (or of a synthetic voice when no
//! path is given), plus the per-frame values it averages.
//!
//! ```text
//! cargo run --example audio_features -- clip.wav
//! ```

use emofuse::audio::{
    energy, energy_entropy, extract_utterance_features, frame_signal, magnitude_spectrum, mfcc_from_spectrum,
    spectral_centroid_spread, spectral_entropy, spectral_rolloff, zcr, FEATURE_NAMES,
};
use emofuse::signal_io::read_wav;
use emofuse::synth::{voice_clip, voice_profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clip = match std::env::args().nth(1) {
        Some(path) => read_wav(path)?,
        None => voice_clip(voice_profile("happy").expect("profile"), 7, 1.0),
    };
    println!("{} samples, {:.3} s", clip.len(), clip.duration_secs());

    let frames = frame_signal(&clip)?;
    println!("{} frames; first five:", frames.len());
    println!("{:>5} {:>8} {:>10} {:>8} {:>9} {:>8} {:>8} {:>8}", "frame", "zcr", "energy", "entropy", "centroid", "spread", "rolloff", "spec_H");
    for frame in frames.iter().take(5) {
        let spec = magnitude_spectrum(frame);
        let (c, s) = spectral_centroid_spread(&spec);
        println!(
            "{:>5} {:>8.4} {:>10.6} {:>8.4} {:>9.4} {:>8.4} {:>8.4} {:>8.4}",
            frame.index(),
            zcr(frame),
            energy(frame),
            energy_entropy(frame),
            c,
            s,
            spectral_rolloff(&spec),
            spectral_entropy(&spec)
        );
    }
    let c = mfcc_from_spectrum(&magnitude_spectrum(&frames[0]));
    println!("frame 0 MFCC: {:.3?}", c);

    let features = extract_utterance_features(&clip)?;
    println!("\nutterance vector:");
    for (name, v) in FEATURE_NAMES.iter().zip(features.as_slice()) {
        println!("  {name:<13} {v:>12.6}");
    }
    Ok(())
}
