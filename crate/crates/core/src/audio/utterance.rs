use super::frame::{frame_signal, FRAME_LEN};
use super::mfcc::{mfcc_from_spectrum, MFCC_COEFFS};
use super::pitch::estimate_pitch;
use super::spectral::{spectral_centroid_spread, spectral_entropy, spectral_flux, spectral_rolloff};
use super::spectrum::magnitude_spectrum;
use super::temporal::{energy, energy_entropy, zcr};
use super::FeatureError;
use crate::signal_io::AudioClip;

pub const FEATURE_COUNT: usize = 9 + MFCC_COEFFS;

/// Column names, in vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "pitch",
    "zcr",
    "energy",
    "entropy",
    "centroid",
    "spread",
    "flux",
    "rolloff",
    "spec_entropy",
    "mfcc0",
    "mfcc1",
    "mfcc2",
    "mfcc3",
    "mfcc4",
    "mfcc5",
    "mfcc6",
    "mfcc7",
    "mfcc8",
    "mfcc9",
    "mfcc10",
    "mfcc11",
    "mfcc12",
];

/// Clip-level summary: whole-clip pitch followed by the per-frame mean of
/// every other feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtteranceFeatures {
    pub values: [f64; FEATURE_COUNT],
}

impl UtteranceFeatures {
    pub fn pitch(&self) -> f64 {
        self.values[0]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

pub fn extract_utterance_features(clip: &AudioClip) -> Result<UtteranceFeatures, FeatureError> {
    if clip.len() < FRAME_LEN {
        return Err(FeatureError::TooShort {
            needed: FRAME_LEN,
            got: clip.len(),
        });
    }
    let frames = frame_signal(clip)?;
    let mut sums = [0.0; FEATURE_COUNT - 1];
    let mut prev = None;
    for frame in &frames {
        let spec = magnitude_spectrum(frame);
        let (centroid, spread) = spectral_centroid_spread(&spec);
        let flux = prev.as_ref().map_or(0.0, |p| spectral_flux(&spec, p));
        let per_frame = [
            zcr(frame),
            energy(frame),
            energy_entropy(frame),
            centroid,
            spread,
            flux,
            spectral_rolloff(&spec),
            spectral_entropy(&spec),
        ];
        for (s, v) in sums.iter_mut().zip(per_frame.iter().chain(&mfcc_from_spectrum(&spec))) {
            *s += v;
        }
        prev = Some(spec);
    }

    let mut values = [0.0; FEATURE_COUNT];
    values[0] = estimate_pitch(clip);
    let n = frames.len() as f64;
    for (v, s) in values[1..].iter_mut().zip(sums) {
        *v = s / n;
    }
    Ok(UtteranceFeatures { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silence() {
        let clip = AudioClip::new(vec![0.0; 16_000], 16_000).unwrap();
        let f = extract_utterance_features(&clip).unwrap();
        assert_eq!(f.values.len(), FEATURE_COUNT);
        assert!(f.values.iter().all(|v| v.is_finite()));
        assert_eq!(f.pitch(), 0.0);
        assert_eq!(f.get("energy"), Some(0.0));
        assert_eq!(f.get("zcr"), Some(0.0));
        assert_eq!(f.get("flux"), Some(0.0));
    }

    #[test]
    fn deterministic_and_too_short() {
        let samples: Vec<f64> = (0..4000).map(|i| ((i * 7919) % 200) as f64 / 400.0 - 0.25).collect();
        let clip = AudioClip::new(samples, 16_000).unwrap();
        let a = extract_utterance_features(&clip).unwrap();
        let b = extract_utterance_features(&clip).unwrap();
        assert_eq!(
            a.values.map(f64::to_bits),
            b.values.map(f64::to_bits)
        );
        let short = AudioClip::new(vec![0.1; 479], 16_000).unwrap();
        assert!(matches!(
            extract_utterance_features(&short),
            Err(FeatureError::TooShort { .. })
        ));
    }

    #[test]
    fn names_line_up() {
        assert_eq!(FEATURE_NAMES.len(), FEATURE_COUNT);
        assert_eq!(FEATURE_NAMES[8], "spec_entropy");
        assert_eq!(FEATURE_NAMES[21], "mfcc12");
    }
}
