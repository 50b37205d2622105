use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::frame::{Frame, FRAME_LEN};
use super::FeatureError;

pub const FFT_SIZE: usize = 512;
/// Bins 0..=256 of a 512-point transform.
pub const SPECTRUM_BINS: usize = FFT_SIZE / 2 + 1;

/// Magnitude spectrum of one frame on the normalized axis `f(n) = n / 256`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    magnitudes: Vec<f64>,
}

impl Spectrum {
    /// Wraps precomputed magnitudes (exactly 257 finite, non-negative values).
    pub fn from_magnitudes(magnitudes: Vec<f64>) -> Result<Self, FeatureError> {
        if magnitudes.len() != SPECTRUM_BINS {
            return Err(FeatureError::BadSpectrum(format!(
                "{} bins, expected {SPECTRUM_BINS}",
                magnitudes.len()
            )));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(FeatureError::BadSpectrum(
                "magnitudes must be finite and non-negative".into(),
            ));
        }
        Ok(Self { magnitudes })
    }

    pub fn zeros() -> Self {
        Self {
            magnitudes: vec![0.0; SPECTRUM_BINS],
        }
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Normalized frequency of bin `n`, in `[0, 1]`.
    #[inline]
    pub fn norm_freq(n: usize) -> f64 {
        n as f64 / (SPECTRUM_BINS - 1) as f64
    }

    pub fn norm_freqs() -> impl Iterator<Item = f64> {
        (0..SPECTRUM_BINS).map(Self::norm_freq)
    }

    pub fn total(&self) -> f64 {
        self.magnitudes.iter().sum()
    }
}

/// Symmetric Hamming window over one frame.
pub fn hamming_window() -> &'static [f64] {
    static WINDOW: OnceLock<Vec<f64>> = OnceLock::new();
    WINDOW.get_or_init(|| {
        let denom = (FRAME_LEN - 1) as f64;
        (0..FRAME_LEN)
            .map(|n| 0.54 - 0.46 * (2.0 * std::f64::consts::PI * n as f64 / denom).cos())
            .collect()
    })
}

fn fft_plan() -> &'static Arc<dyn Fft<f64>> {
    static PLAN: OnceLock<Arc<dyn Fft<f64>>> = OnceLock::new();
    PLAN.get_or_init(|| FftPlanner::new().plan_fft_forward(FFT_SIZE))
}

/// Hamming window, zero-pad 480 -> 512, forward transform, keep |X[0..=256]|.
pub fn magnitude_spectrum(frame: &Frame<'_>) -> Spectrum {
    let window = hamming_window();
    let mut buf = vec![Complex::new(0.0, 0.0); FFT_SIZE];
    for ((slot, &x), &w) in buf.iter_mut().zip(frame.samples()).zip(window) {
        slot.re = x * w;
    }
    fft_plan().process(&mut buf);
    Spectrum {
        magnitudes: buf[..SPECTRUM_BINS].iter().map(|c| c.norm()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_frame_zero_spectrum() {
        let zeros = [0.0; FRAME_LEN];
        let spec = magnitude_spectrum(&Frame::new(&zeros, 0).unwrap());
        assert_eq!(spec.magnitudes().len(), SPECTRUM_BINS);
        assert!(spec.magnitudes().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn dc_bin_of_constant_frame_is_window_sum() {
        let ones = [1.0; FRAME_LEN];
        let spec = magnitude_spectrum(&Frame::new(&ones, 0).unwrap());
        // cos terms cancel over n = 0..478; n = 479 contributes cos(2π) = 1.
        let hand = 0.54 * 480.0 - 0.46;
        let window_sum: f64 = hamming_window().iter().sum();
        assert!((window_sum - hand).abs() < 1e-9);
        assert!((spec.magnitudes()[0] - window_sum).abs() <= 1e-6 * window_sum);
    }

    #[test]
    fn norm_axis() {
        assert_eq!(Spectrum::norm_freq(0), 0.0);
        assert_eq!(Spectrum::norm_freq(256), 1.0);
        let f: Vec<f64> = Spectrum::norm_freqs().collect();
        assert!(f.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn from_magnitudes_validates() {
        assert!(Spectrum::from_magnitudes(vec![0.0; 10]).is_err());
        let mut m = vec![0.0; SPECTRUM_BINS];
        m[3] = -1.0;
        assert!(Spectrum::from_magnitudes(m).is_err());
    }
}
