//! One-vs-rest linear SVMs trained with Pegasos-style stochastic subgradient
//! descent on the hinge loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::labels::LabelSet;
use super::standardize::Standardizer;
use super::{check_lengths, ClassifyError, Classifier};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Regularization strength.
    pub lambda: f64,
    /// Passes over the training set per class.
    pub epochs: usize,
    /// Seeds the per-epoch sample order.
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            epochs: 200,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub(crate) labels: LabelSet,
    pub(crate) standardizer: Standardizer,
    /// One weight vector per class, in label order.
    pub(crate) weights: Vec<Vec<f64>>,
    pub(crate) biases: Vec<f64>,
}

impl SvmModel {
    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    /// Adds `delta` to every class bias.
    pub fn shift_biases(&mut self, delta: f64) {
        self.biases.iter_mut().for_each(|b| *b += delta);
    }

    /// Decision value `w·x + b` of every class for a raw (unstandardized) vector.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        let z = self.standardizer.apply(x)?;
        Ok(self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.iter().zip(&z).map(|(a, c)| a * c).sum::<f64>() + b)
            .collect())
    }
}

impl Classifier for SvmModel {
    fn label_set(&self) -> &LabelSet {
        &self.labels
    }

    /// Highest score wins; ties go to the earlier label.
    fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError> {
        let scores = self.scores(x)?;
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        Ok(best)
    }
}

/// Trains one binary classifier (`+1` for `class`, `-1` otherwise) on the
/// standardized data. The bias is learned as the weight of a constant
/// input of 1 and shares the regularizer.
fn train_binary(data: &[Vec<f64>], targets: &[usize], class: usize, params: &SvmParams) -> (Vec<f64>, f64) {
    let dim = data[0].len();
    // w = scale * v keeps the per-step shrink O(1).
    let mut v = vec![0.0; dim + 1];
    let mut scale = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut t = 0u64;
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (params.lambda * t as f64);
            let y = if targets[i] == class { 1.0 } else { -1.0 };
            let x = &data[i];
            let dot = x.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() + v[dim];
            let margin = y * scale * dot;

            scale *= 1.0 - 1.0 / t as f64;
            if scale == 0.0 {
                v.iter_mut().for_each(|w| *w = 0.0);
                scale = 1.0;
            }
            if margin < 1.0 {
                let step = eta * y / scale;
                for (w, a) in v.iter_mut().zip(x) {
                    *w += step * a;
                }
                v[dim] += step;
            }
        }
    }
    let bias = scale * v[dim];
    v.truncate(dim);
    v.iter_mut().for_each(|w| *w *= scale);
    (v, bias)
}

pub fn svm_train(vectors: &[Vec<f64>], labels: &[String], params: SvmParams) -> Result<SvmModel, ClassifyError> {
    check_lengths(vectors, labels)?;
    if !(params.lambda > 0.0 && params.lambda.is_finite()) {
        return Err(ClassifyError::InvalidParam(format!("lambda {} must be positive", params.lambda)));
    }
    if params.epochs == 0 {
        return Err(ClassifyError::InvalidParam("epochs must be at least 1".into()));
    }
    if vectors.len() < 2 {
        return Err(ClassifyError::TooFewSamples {
            needed: 2,
            got: vectors.len(),
        });
    }
    let label_set = LabelSet::new(labels.iter().cloned())?;
    if label_set.len() < 2 {
        return Err(ClassifyError::SingleClass);
    }
    let standardizer = Standardizer::fit_any(vectors)?;
    let data: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| standardizer.apply(v))
        .collect::<Result<_, _>>()?;
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| label_set.require(l))
        .collect::<Result<_, _>>()?;

    let (weights, biases) = (0..label_set.len())
        .map(|c| train_binary(&data, &targets, c, &params))
        .unzip();
    Ok(SvmModel {
        labels: label_set,
        standardizer,
        weights,
        biases,
    })
}

pub fn svm_predict<'m>(model: &'m SvmModel, x: &[f64]) -> Result<&'m str, ClassifyError> {
    model.predict(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> (Vec<Vec<f64>>, Vec<String>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let d = (i % 5) as f64 * 0.1;
            x.push(vec![-3.0 + d, -3.0 - d]);
            y.push("neg".to_string());
            x.push(vec![3.0 - d, 3.0 + d]);
            y.push("pos".to_string());
        }
        (x, y)
    }

    #[test]
    fn separable_training_accuracy() {
        let (x, y) = blobs();
        let m = svm_train(&x, &y, SvmParams::default()).unwrap();
        for (v, l) in x.iter().zip(&y) {
            assert_eq!(svm_predict(&m, v).unwrap(), l);
        }
    }

    #[test]
    fn same_seed_same_weights() {
        let (x, y) = blobs();
        let p = SvmParams { epochs: 20, ..SvmParams::default() };
        let a = svm_train(&x, &y, p).unwrap();
        let b = svm_train(&x, &y, p).unwrap();
        let bits = |m: &SvmModel| -> Vec<u64> {
            m.weights.iter().flatten().chain(&m.biases).map(|w| w.to_bits()).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn single_class() {
        let x = vec![vec![0.0], vec![1.0]];
        let y = vec!["a".to_string(), "a".to_string()];
        assert_eq!(svm_train(&x, &y, SvmParams::default()), Err(ClassifyError::SingleClass));
    }

    #[test]
    fn score_tie_goes_to_first_label() {
        let (x, y) = blobs();
        let mut m = svm_train(&x, &y, SvmParams { epochs: 5, ..SvmParams::default() }).unwrap();
        m.weights.iter_mut().for_each(|w| w.iter_mut().for_each(|v| *v = 0.0));
        m.biases = vec![0.5, 0.5];
        assert_eq!(m.predict(&[1.0, 1.0]).unwrap(), "neg");
    }
}
