//! YIN-style fundamental frequency estimation over a whole clip.

use super::FeatureError;
use crate::signal_io::{AudioClip, SAMPLE_RATE};

/// Smallest lag searched (~615 Hz).
pub const PITCH_LAG_MIN: usize = 26;
/// Largest lag searched (50 Hz).
pub const PITCH_LAG_MAX: usize = 320;
/// A dip of the normalized difference must fall below this to count.
pub const YIN_THRESHOLD: f64 = 0.7;

const SILENCE_ENERGY: f64 = 1e-12;

/// Difference function values for lags `t_min..=t_max`, raw or normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceFunction {
    t_min: usize,
    values: Vec<f64>,
    normalized: bool,
}

impl DifferenceFunction {
    /// Wraps raw difference values for lags starting at `t_min`.
    pub fn from_raw(t_min: usize, values: Vec<f64>) -> Self {
        Self {
            t_min,
            values,
            normalized: false,
        }
    }

    pub fn t_min(&self) -> usize {
        self.t_min
    }

    pub fn t_max(&self) -> usize {
        self.t_min + self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Value at `lag`, if it lies in the computed range.
    pub fn at(&self, lag: usize) -> Option<f64> {
        lag.checked_sub(self.t_min)
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn lags(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.t_min + i, v))
    }
}

/// `d(T) = Σ_{j<W} (y_j - y_{j+T})²` at `t = 0`, with `W = len - t_max`.
pub fn yin_difference(
    signal: &[f64],
    t_min: usize,
    t_max: usize,
) -> Result<DifferenceFunction, FeatureError> {
    assert!(t_min <= t_max, "empty lag range {t_min}..={t_max}");
    if signal.len() < 2 * t_max {
        return Err(FeatureError::TooShort {
            needed: 2 * t_max,
            got: signal.len(),
        });
    }
    let window = signal.len() - t_max;
    let head = &signal[..window];
    let values = (t_min..=t_max)
        .map(|lag| {
            head.iter()
                .zip(&signal[lag..lag + window])
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        })
        .collect();
    Ok(DifferenceFunction::from_raw(t_min, values))
}

/// Divides each value by the running mean of the values from `t_min` up to
/// and including that lag. A zero running sum yields 1.
pub fn yin_normalize(df: &DifferenceFunction) -> DifferenceFunction {
    let mut running = 0.0;
    let values = df
        .values
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            running += d;
            if running > 0.0 {
                d * (i + 1) as f64 / running
            } else {
                1.0
            }
        })
        .collect();
    DifferenceFunction {
        t_min: df.t_min,
        values,
        normalized: true,
    }
}

/// Chooses the period lag from a normalized difference function: the bottom
/// of the first dip that falls below [`YIN_THRESHOLD`], or the global
/// minimum when no dip qualifies.
pub fn select_lag(norm: &DifferenceFunction) -> usize {
    let v = norm.values();
    if let Some(start) = v.iter().position(|&x| x < YIN_THRESHOLD) {
        let mut i = start;
        while i + 1 < v.len() && v[i + 1] < v[i] {
            i += 1;
        }
        return norm.t_min() + i;
    }
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    norm.t_min() + best
}

/// Pitch in Hz for the whole clip; 0 for clips that are silent or too short
/// to cover two maximal periods.
pub fn estimate_pitch(clip: &AudioClip) -> f64 {
    let samples = clip.samples();
    if samples.len() < 2 * PITCH_LAG_MAX {
        return 0.0;
    }
    let total: f64 = samples.iter().map(|s| s * s).sum();
    if total < SILENCE_ENERGY {
        return 0.0;
    }
    let df = yin_difference(samples, PITCH_LAG_MIN, PITCH_LAG_MAX)
        .expect("length checked above");
    let lag = select_lag(&yin_normalize(&df));
    SAMPLE_RATE as f64 / lag as f64
}
