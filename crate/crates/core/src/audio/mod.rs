//! Short-time speech features: framing, YIN pitch, time-domain and spectral
//! descriptors, MFCCs and the 21-value utterance summary.
//!
//! All analysis runs on 30 ms frames (480 samples at 16 kHz) with a hop of
//! 240 samples. Spectral features share one Hamming-windowed, zero-padded
//! 512-point transform per frame.

mod frame;
mod mfcc;
mod pitch;
mod spectral;
mod spectrum;
mod temporal;
mod utterance;

use thiserror::Error;

pub use frame::{frame_signal, Frame, FRAME_HOP, FRAME_LEN};
pub use mfcc::{mel_filterbank, mfcc, mfcc_from_spectrum, MEL_FILTERS, MFCC_COEFFS};
pub use pitch::{
    estimate_pitch, select_lag, yin_difference, yin_normalize, DifferenceFunction, PITCH_LAG_MAX,
    PITCH_LAG_MIN, YIN_THRESHOLD,
};
pub use spectral::{spectral_centroid_spread, spectral_entropy, spectral_flux, spectral_rolloff};
pub use spectrum::{hamming_window, magnitude_spectrum, Spectrum, FFT_SIZE, SPECTRUM_BINS};
pub use temporal::{energy, energy_distribution, energy_entropy, zcr, EnergyDistribution};
pub use utterance::{extract_utterance_features, UtteranceFeatures, FEATURE_COUNT, FEATURE_NAMES};

/// Number of sub-blocks used by both entropy features.
pub const ENTROPY_BLOCKS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("signal too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("invalid frame length {0} (expected 480)")]
    BadFrame(usize),
    #[error("invalid spectrum: {0}")]
    BadSpectrum(String),
}

/// `-Σ p·log2(p)` over a distribution, with `0·log 0 = 0`, clamped to
/// `[0, log2(n)]` to absorb rounding.
pub(crate) fn entropy_bits(dist: &[f64]) -> f64 {
    let h: f64 = dist
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.clamp(0.0, (dist.len() as f64).log2())
}
