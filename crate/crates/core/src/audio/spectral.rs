use super::spectrum::{Spectrum, SPECTRUM_BINS};
use super::temporal::EnergyDistribution;
use super::ENTROPY_BLOCKS;

/// Fraction of total magnitude that must lie at or below the rolloff bin.
const ROLLOFF_FRACTION: f64 = 0.90;

/// Magnitude-weighted mean and second central moment of the normalized
/// frequency axis. An empty spectrum yields `(0.5, 0.0)`.
pub fn spectral_centroid_spread(spec: &Spectrum) -> (f64, f64) {
    let total = spec.total();
    if total <= 0.0 {
        return (0.5, 0.0);
    }
    let centroid = spec
        .magnitudes()
        .iter()
        .zip(Spectrum::norm_freqs())
        .map(|(y, f)| f * y)
        .sum::<f64>()
        / total;
    let spread = spec
        .magnitudes()
        .iter()
        .zip(Spectrum::norm_freqs())
        .map(|(y, f)| (f - centroid) * (f - centroid) * y)
        .sum::<f64>()
        / total;
    (centroid, spread)
}

fn sum_normalized(spec: &Spectrum) -> Vec<f64> {
    let total = spec.total();
    if total > 0.0 {
        spec.magnitudes().iter().map(|y| y / total).collect()
    } else {
        vec![0.0; SPECTRUM_BINS]
    }
}

/// Squared distance between the sum-normalized spectra of two successive frames.
pub fn spectral_flux(cur: &Spectrum, prev: &Spectrum) -> f64 {
    sum_normalized(cur)
        .iter()
        .zip(sum_normalized(prev))
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

/// Normalized frequency of the first bin at which the cumulative magnitude
/// reaches 90% of the total.
pub fn spectral_rolloff(spec: &Spectrum) -> f64 {
    let total = spec.total();
    if total <= 0.0 {
        return 0.0;
    }
    let target = ROLLOFF_FRACTION * total;
    let mut cumulative = 0.0;
    for (n, y) in spec.magnitudes().iter().enumerate() {
        cumulative += y;
        if cumulative >= target {
            return Spectrum::norm_freq(n);
        }
    }
    // Only reachable through rounding in the running sum.
    1.0
}

/// Bin range of entropy group `i` (boundaries at `floor(i·257/10)`).
pub(crate) fn entropy_group(i: usize) -> std::ops::Range<usize> {
    (i * SPECTRUM_BINS / ENTROPY_BLOCKS)..((i + 1) * SPECTRUM_BINS / ENTROPY_BLOCKS)
}

/// Entropy (bits) of spectral energy across 10 contiguous bin groups.
pub fn spectral_entropy(spec: &Spectrum) -> f64 {
    let m = spec.magnitudes();
    EnergyDistribution::from_block_energies(
        (0..ENTROPY_BLOCKS)
            .map(|i| m[entropy_group(i)].iter().map(|y| y * y).sum())
            .collect(),
    )
    .entropy()
}
