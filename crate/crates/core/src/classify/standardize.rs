use super::{common_dim, ClassifyError};

/// Per-dimension z-scoring with population statistics. Zero-variance
/// dimensions keep a divisor of 1, so they are only mean-centred.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub(crate) mean: Vec<f64>,
    pub(crate) std: Vec<f64>,
}

impl Standardizer {
    /// Statistics of any non-empty set of equal-length vectors.
    pub(crate) fn fit_any(vectors: &[Vec<f64>]) -> Result<Self, ClassifyError> {
        if vectors.is_empty() {
            return Err(ClassifyError::TooFewSamples { needed: 1, got: 0 });
        }
        let dim = common_dim(vectors)?;
        let n = vectors.len() as f64;
        let mut mean = vec![0.0; dim];
        for v in vectors {
            for (m, x) in mean.iter_mut().zip(v) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; dim];
        for v in vectors {
            for ((s, x), m) in var.iter_mut().zip(v).zip(&mean) {
                *s += (x - m) * (x - m);
            }
        }
        let std = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 0.0 && sd.is_finite() {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn std(&self) -> &[f64] {
        &self.std
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        if x.len() != self.dim() {
            return Err(ClassifyError::DimMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((v, m), s)| (v - m) / s)
            .collect())
    }
}

/// Fits on at least two vectors.
pub fn fit_standardizer(vectors: &[Vec<f64>]) -> Result<Standardizer, ClassifyError> {
    if vectors.len() < 2 {
        return Err(ClassifyError::TooFewSamples {
            needed: 2,
            got: vectors.len(),
        });
    }
    Standardizer::fit_any(vectors)
}

pub fn apply_standardizer(s: &Standardizer, x: &[f64]) -> Result<Vec<f64>, ClassifyError> {
    s.apply(x)
}
