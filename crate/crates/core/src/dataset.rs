//! Labelled feature tables on disk and the seeded, per-class train/test split.
//!
//! Audio tables carry a header row (`pitch,zcr,...,mfcc12,label`) and six
//! decimals per value. Face tables are headerless rows of 3304 integer
//! histogram counts followed by the label. The reader accepts both.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::audio::FEATURE_NAMES;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("feature table has no rows")]
    Empty,
    #[error("split leaves {train} training and {test} test samples")]
    TooFewSamples { train: usize, test: usize },
    #[error("split fraction {0} must lie strictly between 0 and 1")]
    BadFraction(f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub vectors: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn push(&mut self, vector: Vec<f64>, label: impl Into<String>) {
        self.vectors.push(vector);
        self.labels.push(label.into());
    }

    pub fn subset(&self, indices: &[usize]) -> FeatureTable {
        FeatureTable {
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Sample count per label, in label order.
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for l in &self.labels {
            *counts.entry(l.clone()).or_insert(0) += 1;
        }
        counts
    }
}

pub fn audio_csv_header() -> String {
    let mut h = FEATURE_NAMES.join(",");
    h.push_str(",label");
    h
}

pub fn audio_csv_row(values: &[f64], label: &str) -> String {
    let mut row = String::new();
    for v in values {
        let _ = write!(row, "{v:.6},");
    }
    row.push_str(label);
    row
}

pub fn face_csv_row(values: &[f64], label: &str) -> String {
    let mut row = String::new();
    for v in values {
        let _ = write!(row, "{},", *v as u64);
    }
    row.push_str(label);
    row
}

pub fn parse_feature_csv(text: &str) -> Result<FeatureTable, DatasetError> {
    let mut table = FeatureTable::default();
    let mut dim = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |message: String| DatasetError::Parse { line: i + 1, message };
        if fields.len() < 2 {
            return Err(err("expected at least one value and a label".into()));
        }
        let (label, values) = fields.split_last().expect("len >= 2");
        if table.is_empty() && dim.is_none() && values[0].parse::<f64>().is_err() {
            // Header row; fixes the expected width.
            dim = Some(values.len());
            continue;
        }
        let vector = values
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("{v:?} is not a finite number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let expected = *dim.get_or_insert(vector.len());
        if vector.len() != expected {
            return Err(err(format!("{} values, expected {expected}", vector.len())));
        }
        if label.is_empty() {
            return Err(err("empty label".into()));
        }
        table.push(vector, *label);
    }
    if table.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(table)
}

pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<FeatureTable, DatasetError> {
    parse_feature_csv(&std::fs::read_to_string(path)?)
}

/// Seeded split that keeps every class on both sides where possible.
///
/// Within each class (taken in label order) the indices are shuffled and
/// `round(fraction · n)` go to training, clamped so at least one sample
/// lands on each side when the class has two or more. Returned index lists
/// are ascending.
pub fn stratified_split(
    labels: &[String],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), DatasetError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DatasetError::BadFraction(fraction));
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_class.entry(l.as_str()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut members in by_class.into_values() {
        members.shuffle(&mut rng);
        let n = members.len();
        let n_train = if n < 2 {
            n
        } else {
            ((fraction * n as f64).round() as usize).clamp(1, n - 1)
        };
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    if train.len() < 2 || test.is_empty() {
        return Err(DatasetError::TooFewSamples {
            train: train.len(),
            test: test.len(),
        });
    }
    Ok((train, test))
}
