use std::fmt;

use super::labels::LabelSet;
use super::{check_lengths, ClassifyError, Classifier};

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: LabelSet,
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(labels: LabelSet) -> Self {
        let n = labels.len();
        Self {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn get(&self, truth: &str, predicted: &str) -> Option<usize> {
        Some(self.counts[self.labels.index_of(truth)?][self.labels.index_of(predicted)?])
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn total(&self) -> usize {
        self.row_sums().iter().sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Trace over total; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.correct() as f64 / n as f64,
        }
    }

    /// Each row as percentages of that class's test count (all zeros for
    /// classes absent from the test set).
    pub fn row_percentages(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let n: usize = row.iter().sum();
                row.iter()
                    .map(|&c| if n == 0 { 0.0 } else { 100.0 * c as f64 / n as f64 })
                    .collect()
            })
            .collect()
    }

    /// Raw counts as CSV with a `true\predicted` corner cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for name in self.labels.names() {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (name, row) in self.labels.names().iter().zip(&self.counts) {
            out.push_str(name);
            for c in row {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Row-percentage table, one class per row.
impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .labels
            .names()
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(7);
        write!(f, "{:width$}", "")?;
        for name in self.labels.names() {
            write!(f, " {name:>width$}")?;
        }
        writeln!(f)?;
        for (name, row) in self.labels.names().iter().zip(self.row_percentages()) {
            write!(f, "{name:width$}")?;
            for p in row {
                write!(f, " {:>width$}", format!("{p:.2}"))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Accuracy and confusion matrix of `model` on a labelled test set.
pub fn evaluate<C: Classifier + ?Sized>(
    model: &C,
    vectors: &[Vec<f64>],
    labels: &[String],
) -> Result<(f64, ConfusionMatrix), ClassifyError> {
    check_lengths(vectors, labels)?;
    let set = model.label_set();
    let truths = labels
        .iter()
        .map(|l| set.require(l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut matrix = ConfusionMatrix::new(set.clone());
    for (v, &t) in vectors.iter().zip(&truths) {
        matrix.record(t, model.predict_index(v)?);
    }
    Ok((matrix.accuracy(), matrix))
}
