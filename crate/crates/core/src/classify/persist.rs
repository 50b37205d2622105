//! Binary model files.
//!
//! Layout (little endian):
//!
//! ```text
//! "EMOF" | version: u16 | kind: u8 (0 = knn, 1 = svm)
//! labels: u32 count, then (u32 byte length, UTF-8) per label
//! standardizer: u32 dim, dim x f64 mean, dim x f64 std
//! knn: u32 k, u32 n, n x (u32 class, dim x f64)
//! svm: per class (dim x f64 weights, f64 bias)
//! crc32 of every preceding byte: u32
//! ```

use std::path::Path;

use thiserror::Error;

use super::knn::KnnModel;
use super::labels::LabelSet;
use super::standardize::Standardizer;
use super::svm::SvmModel;
use super::{ClassifyError, Classifier};

const MAGIC: &[u8; 4] = b"EMOF";
const VERSION: u16 = 1;
const KIND_KNN: u8 = 0;
const KIND_SVM: u8 = 1;
const HEADER_LEN: usize = 7;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a model file of a supported version: {0}")]
    BadVersion(String),
    #[error("corrupt model file: {0}")]
    Corrupt(String),
}

/// Either kind of trained classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Knn(KnnModel),
    Svm(SvmModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Knn(_) => "knn",
            Model::Svm(_) => "svm",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Knn(m) => m.standardizer.dim(),
            Model::Svm(m) => m.standardizer.dim(),
        }
    }
}

impl From<KnnModel> for Model {
    fn from(m: KnnModel) -> Self {
        Model::Knn(m)
    }
}

impl From<SvmModel> for Model {
    fn from(m: SvmModel) -> Self {
        Model::Svm(m)
    }
}

impl Classifier for Model {
    fn label_set(&self) -> &LabelSet {
        match self {
            Model::Knn(m) => m.label_set(),
            Model::Svm(m) => m.label_set(),
        }
    }

    fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError> {
        match self {
            Model::Knn(m) => m.predict_index(x),
            Model::Svm(m) => m.predict_index(x),
        }
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: usize) {
        let v = u32::try_from(v).expect("model section exceeds u32 range");
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, v: &[f64]) {
        for x in v {
            self.0.extend_from_slice(&x.to_le_bytes());
        }
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len());
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], PersistError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| PersistError::Corrupt(format!("unexpected end of data at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<usize, PersistError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as usize)
    }
    fn f64(&mut self) -> Result<f64, PersistError> {
        let b = self.take(8)?;
        Ok(f64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, PersistError> {
        if n > self.bytes.len() / 8 {
            return Err(PersistError::Corrupt(format!("implausible vector length {n}")));
        }
        (0..n).map(|_| self.f64()).collect()
    }
    fn str(&mut self) -> Result<String, PersistError> {
        let n = self.u32()?;
        String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| PersistError::Corrupt("label is not UTF-8".into()))
    }
}

fn write_common(w: &mut Writer, labels: &LabelSet, s: &Standardizer) {
    w.u32(labels.len());
    for name in labels.names() {
        w.str(name);
    }
    w.u32(s.dim());
    w.f64s(&s.mean);
    w.f64s(&s.std);
}

pub fn encode_model(model: &Model) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u16(VERSION);
    match model {
        Model::Knn(m) => {
            w.u8(KIND_KNN);
            write_common(&mut w, &m.labels, &m.standardizer);
            w.u32(m.k);
            w.u32(m.vectors.len());
            for (v, &t) in m.vectors.iter().zip(&m.targets) {
                w.u32(t);
                w.f64s(v);
            }
        }
        Model::Svm(m) => {
            w.u8(KIND_SVM);
            write_common(&mut w, &m.labels, &m.standardizer);
            for (weights, &bias) in m.weights.iter().zip(&m.biases) {
                w.f64s(weights);
                w.f64s(&[bias]);
            }
        }
    }
    let crc = crc32fast::hash(&w.0);
    w.0.extend_from_slice(&crc.to_le_bytes());
    w.0
}

pub fn decode_model(bytes: &[u8]) -> Result<Model, PersistError> {
    if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
        return Err(PersistError::BadVersion("missing EMOF magic".into()));
    }
    if bytes.len() < HEADER_LEN + 4 {
        return Err(PersistError::Corrupt("file shorter than header and checksum".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(PersistError::BadVersion(format!("format version {version}")));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
    if crc32fast::hash(body) != stored {
        return Err(PersistError::Corrupt("checksum mismatch".into()));
    }

    let mut r = Reader { bytes: body, pos: HEADER_LEN };
    let kind = body[6];
    let n_labels = r.u32()?;
    let names = (0..n_labels).map(|_| r.str()).collect::<Result<Vec<_>, _>>()?;
    let labels = LabelSet::new(names.iter().cloned())
        .map_err(|e| PersistError::Corrupt(e.to_string()))?;
    if labels.names() != names.as_slice() {
        return Err(PersistError::Corrupt("label set not sorted and distinct".into()));
    }
    let dim = r.u32()?;
    let standardizer = Standardizer {
        mean: r.f64s(dim)?,
        std: r.f64s(dim)?,
    };

    let model = match kind {
        KIND_KNN => {
            let k = r.u32()?;
            let n = r.u32()?;
            if k == 0 || k > n {
                return Err(PersistError::Corrupt(format!("k = {k} with {n} samples")));
            }
            let mut vectors = Vec::with_capacity(n.min(body.len()));
            let mut targets = Vec::with_capacity(n.min(body.len()));
            for _ in 0..n {
                let t = r.u32()?;
                if t >= labels.len() {
                    return Err(PersistError::Corrupt(format!("class index {t} out of range")));
                }
                targets.push(t);
                vectors.push(r.f64s(dim)?);
            }
            Model::Knn(KnnModel {
                labels,
                standardizer,
                vectors,
                targets,
                k,
            })
        }
        KIND_SVM => {
            let mut weights = Vec::with_capacity(labels.len());
            let mut biases = Vec::with_capacity(labels.len());
            for _ in 0..labels.len() {
                weights.push(r.f64s(dim)?);
                biases.push(r.f64()?);
            }
            Model::Svm(SvmModel {
                labels,
                standardizer,
                weights,
                biases,
            })
        }
        other => return Err(PersistError::Corrupt(format!("unknown model kind {other}"))),
    };
    if r.pos != body.len() {
        return Err(PersistError::Corrupt("trailing bytes after payload".into()));
    }
    Ok(model)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<(), PersistError> {
    std::fs::write(path, encode_model(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model, PersistError> {
    decode_model(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{knn_train, svm_train, SvmParams};

    fn data() -> (Vec<Vec<f64>>, Vec<String>) {
        let x = vec![
            vec![0.1, 2.0, -1.0],
            vec![0.3, 1.5, -0.5],
            vec![3.0, -1.0, 0.25],
            vec![2.5, -0.7, 0.0],
        ];
        let y = ["calm", "calm", "tense", "tense"].map(String::from).to_vec();
        (x, y)
    }

    #[test]
    fn knn_round_trip() {
        let (x, y) = data();
        let m = Model::from(knn_train(&x, &y, 3).unwrap());
        assert_eq!(decode_model(&encode_model(&m)).unwrap(), m);
    }

    #[test]
    fn svm_round_trip_is_bit_exact() {
        let (x, y) = data();
        let m = Model::from(svm_train(&x, &y, SvmParams { epochs: 10, ..Default::default() }).unwrap());
        let back = decode_model(&encode_model(&m)).unwrap();
        assert_eq!(encode_model(&back), encode_model(&m));
        assert_eq!(back, m);
    }

    #[test]
    fn bad_magic_and_version() {
        let (x, y) = data();
        let mut bytes = encode_model(&Model::from(knn_train(&x, &y, 1).unwrap()));
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(matches!(decode_model(&wrong), Err(PersistError::BadVersion(_))));
        bytes[4] = 9;
        assert!(matches!(decode_model(&bytes), Err(PersistError::BadVersion(_))));
    }

    #[test]
    fn truncation_and_bit_flips_are_corrupt() {
        let (x, y) = data();
        let bytes = encode_model(&Model::from(knn_train(&x, &y, 1).unwrap()));
        for cut in [8, 20, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(decode_model(&bytes[..cut]), Err(PersistError::Corrupt(_))));
        }
        let mut flipped = bytes.clone();
        flipped[30] ^= 0x10;
        assert!(matches!(decode_model(&flipped), Err(PersistError::Corrupt(_))));
    }
}
