use super::labels::LabelSet;
use super::standardize::Standardizer;
use super::{check_lengths, ClassifyError, Classifier};

pub const DEFAULT_K: usize = 3;

/// Standardized training set plus the vote size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub(crate) labels: LabelSet,
    pub(crate) standardizer: Standardizer,
    pub(crate) vectors: Vec<Vec<f64>>,
    pub(crate) targets: Vec<usize>,
    pub(crate) k: usize,
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn knn_train(vectors: &[Vec<f64>], labels: &[String], k: usize) -> Result<KnnModel, ClassifyError> {
    check_lengths(vectors, labels)?;
    if k == 0 {
        return Err(ClassifyError::InvalidParam("k must be at least 1".into()));
    }
    if k > vectors.len() {
        return Err(ClassifyError::KTooLarge {
            k,
            samples: vectors.len(),
        });
    }
    let label_set = LabelSet::new(labels.iter().cloned())?;
    let standardizer = Standardizer::fit_any(vectors)?;
    let vectors = vectors
        .iter()
        .map(|v| standardizer.apply(v))
        .collect::<Result<_, _>>()?;
    let targets = labels
        .iter()
        .map(|l| label_set.require(l))
        .collect::<Result<_, _>>()?;
    Ok(KnnModel {
        labels: label_set,
        standardizer,
        vectors,
        targets,
        k,
    })
}

impl Classifier for KnnModel {
    fn label_set(&self) -> &LabelSet {
        &self.labels
    }

    /// Majority vote of the `k` nearest (Euclidean) training vectors. Equal
    /// distances rank the earlier training sample first; a tied vote goes to
    /// the tied class whose member ranks nearest.
    fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError> {
        let q = self.standardizer.apply(x)?;
        let mut ranked: Vec<(f64, usize)> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (v.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let neighbours = &ranked[..self.k];

        let mut votes = vec![0usize; self.labels.len()];
        for &(_, i) in neighbours {
            votes[self.targets[i]] += 1;
        }
        let top = votes.iter().copied().max().unwrap_or(0);
        Ok(neighbours
            .iter()
            .map(|&(_, i)| self.targets[i])
            .find(|&c| votes[c] == top)
            .expect("k >= 1"))
    }
}

pub fn knn_predict<'m>(model: &'m KnnModel, x: &[f64]) -> Result<&'m str, ClassifyError> {
    model.predict(x)
}
