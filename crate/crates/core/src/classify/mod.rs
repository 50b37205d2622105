//! Feature-vector classifiers (k-nearest neighbours and one-vs-rest linear
//! SVM), their shared standardization, evaluation into confusion matrices,
//! and a versioned, checksummed model file format.

mod eval;
mod knn;
mod labels;
mod persist;
mod standardize;
mod svm;

use thiserror::Error;

pub use eval::{evaluate, ConfusionMatrix};
pub use knn::{knn_predict, knn_train, KnnModel, DEFAULT_K};
pub use labels::LabelSet;
pub use persist::{decode_model, encode_model, load_model, save_model, Model, PersistError};
pub use standardize::{apply_standardizer, fit_standardizer, Standardizer};
pub use svm::{svm_predict, svm_train, SvmModel, SvmParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("k = {k} exceeds the {samples} training samples")]
    KTooLarge { k: usize, samples: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("label {0:?} is not in the model's label set")]
    UnknownLabel(String),
    #[error("{vectors} vectors but {labels} labels")]
    LengthMismatch { vectors: usize, labels: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

/// Anything that maps a feature vector to one of its labels.
pub trait Classifier {
    fn label_set(&self) -> &LabelSet;

    /// Index into [`Classifier::label_set`] of the predicted class.
    fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError>;

    fn predict(&self, x: &[f64]) -> Result<&str, ClassifyError> {
        let i = self.predict_index(x)?;
        Ok(self.label_set().name(i))
    }
}

/// Checks that all vectors share one length and returns it.
pub(crate) fn common_dim(vectors: &[Vec<f64>]) -> Result<usize, ClassifyError> {
    let dim = vectors.first().map_or(0, Vec::len);
    for v in vectors {
        if v.len() != dim {
            return Err(ClassifyError::DimMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(dim)
}

pub(crate) fn check_lengths(vectors: &[Vec<f64>], labels: &[String]) -> Result<(), ClassifyError> {
    if vectors.len() != labels.len() {
        return Err(ClassifyError::LengthMismatch {
            vectors: vectors.len(),
            labels: labels.len(),
        });
    }
    Ok(())
}
