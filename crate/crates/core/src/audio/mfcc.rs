//! Mel-frequency cepstral coefficients: power spectrum -> 26 triangular mel
//! filters over 0..8000 Hz -> natural log -> orthonormal DCT-II -> c0..c12.

use std::sync::OnceLock;

use super::frame::Frame;
use super::spectrum::{magnitude_spectrum, Spectrum, FFT_SIZE, SPECTRUM_BINS};
use crate::signal_io::SAMPLE_RATE;

pub const MEL_FILTERS: usize = 26;
pub const MFCC_COEFFS: usize = 13;

const LOG_FLOOR: f64 = 1e-10;

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Dense `26 x 257` triangular filter weights. Filter edges are spaced
/// evenly in mel between 0 Hz and the Nyquist frequency and evaluated at
/// the exact bin centre frequencies.
pub fn mel_filterbank() -> &'static [[f64; SPECTRUM_BINS]] {
    static BANK: OnceLock<Vec<[f64; SPECTRUM_BINS]>> = OnceLock::new();
    BANK.get_or_init(|| {
        let nyquist = SAMPLE_RATE as f64 / 2.0;
        let top = hz_to_mel(nyquist);
        let edges: Vec<f64> = (0..MEL_FILTERS + 2)
            .map(|i| mel_to_hz(top * i as f64 / (MEL_FILTERS + 1) as f64))
            .collect();
        let bin_hz = SAMPLE_RATE as f64 / FFT_SIZE as f64;
        (0..MEL_FILTERS)
            .map(|m| {
                let (lo, centre, hi) = (edges[m], edges[m + 1], edges[m + 2]);
                let mut row = [0.0; SPECTRUM_BINS];
                for (k, w) in row.iter_mut().enumerate() {
                    let f = k as f64 * bin_hz;
                    *w = if f >= lo && f <= centre {
                        (f - lo) / (centre - lo)
                    } else if f > centre && f <= hi {
                        (hi - f) / (hi - centre)
                    } else {
                        0.0
                    };
                }
                row
            })
            .collect()
    })
}

fn dct_basis() -> &'static [[f64; MEL_FILTERS]; MFCC_COEFFS] {
    static BASIS: OnceLock<[[f64; MEL_FILTERS]; MFCC_COEFFS]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let n = MEL_FILTERS as f64;
        let mut basis = [[0.0; MEL_FILTERS]; MFCC_COEFFS];
        for (k, row) in basis.iter_mut().enumerate() {
            let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            for (m, b) in row.iter_mut().enumerate() {
                *b = scale
                    * (std::f64::consts::PI * k as f64 * (m as f64 + 0.5) / n).cos();
            }
        }
        basis
    })
}

/// Cepstral coefficients from an already computed magnitude spectrum.
pub fn mfcc_from_spectrum(spec: &Spectrum) -> [f64; MFCC_COEFFS] {
    let power: Vec<f64> = spec.magnitudes().iter().map(|m| m * m).collect();
    let log_energies: Vec<f64> = mel_filterbank()
        .iter()
        .map(|row| {
            let e: f64 = row.iter().zip(&power).map(|(w, p)| w * p).sum();
            e.max(LOG_FLOOR).ln()
        })
        .collect();
    let mut out = [0.0; MFCC_COEFFS];
    for (c, row) in out.iter_mut().zip(dct_basis()) {
        *c = row.iter().zip(&log_energies).map(|(b, x)| b * x).sum();
    }
    out
}

pub fn mfcc(frame: &Frame<'_>) -> [f64; MFCC_COEFFS] {
    mfcc_from_spectrum(&magnitude_spectrum(frame))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mel_scale_round_trip() {
        for hz in [0.0, 100.0, 1000.0, 8000.0] {
            assert!((mel_to_hz(hz_to_mel(hz)) - hz).abs() < 1e-9);
        }
        assert!((hz_to_mel(700.0) - 2595.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn every_filter_covers_some_bin() {
        for row in mel_filterbank() {
            assert!(row.iter().any(|&w| w > 0.0));
            assert!(row.iter().all(|&w| (0.0..=1.0).contains(&w)));
        }
    }

    #[test]
    fn silent_frame_gives_flat_cepstrum() {
        let zeros = [0.0; 480];
        let c = mfcc(&Frame::new(&zeros, 0).unwrap());
        assert_eq!(c.len(), MFCC_COEFFS);
        let expected_c0 = (MEL_FILTERS as f64).sqrt() * LOG_FLOOR.ln();
        assert!((c[0] - expected_c0).abs() < 1e-9);
        assert!(c[1..].iter().all(|x| x.abs() < 1e-9));
    }

    #[test]
    fn dct_basis_is_orthonormal() {
        let b = dct_basis();
        for i in 0..MFCC_COEFFS {
            for j in 0..MFCC_COEFFS {
                let dot: f64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12);
            }
        }
    }
}
