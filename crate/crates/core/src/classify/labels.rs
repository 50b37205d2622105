use super::ClassifyError;

/// Distinct class names in lexicographic order. Class indices everywhere
/// in the crate refer to positions in this list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn new<I, S>(labels: I) -> Result<Self, ClassifyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = labels.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        if names.is_empty() {
            return Err(ClassifyError::TooFewSamples { needed: 1, got: 0 });
        }
        if names.iter().any(String::is_empty) {
            return Err(ClassifyError::InvalidParam("empty label".into()));
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(label)).ok()
    }

    pub fn require(&self, label: &str) -> Result<usize, ClassifyError> {
        self.index_of(label)
            .ok_or_else(|| ClassifyError::UnknownLabel(label.to_string()))
    }
}
