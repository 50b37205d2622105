//! Readers (and the matching writers) for the three on-disk inputs: 16 kHz
//! mono PCM16 WAV files, binary/ASCII PGM images and `path,label` manifests.
//!
//! Video containers are never decoded here. Frames and audio tracks are
//! expected to have been dumped to PGM/WAV by an external tool beforehand.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// The only sample rate accepted anywhere in the crate.
pub const SAMPLE_RATE: u32 = 16_000;

/// PCM16 full scale. `-32768` maps to exactly `-1.0`.
const PCM16_SCALE: f64 = 32_768.0;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not 16-bit integer PCM (format tag {format}, {bits} bits)")]
    NotPcm16 { format: u16, bits: u16 },
    #[error("unsupported sample rate {0} Hz (expected 16000)")]
    BadRate(u32),
    #[error("unsupported channel count {0} (expected mono)")]
    BadChannels(u16),
    #[error("truncated: {0}")]
    Truncated(String),
    #[error("bad PGM magic {0:?}")]
    BadMagic(String),
    #[error("PGM maxval {0} exceeds 255")]
    BadMaxval(u32),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("manifest line {line}: expected `path,label`, got {content:?}")]
    BadLine { line: usize, content: String },
    #[error("manifest has no entries")]
    Empty,
}

/// Mono PCM audio at 16 kHz with amplitudes in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self, ReadError> {
        if sample_rate != SAMPLE_RATE {
            return Err(ReadError::BadRate(sample_rate));
        }
        if samples.is_empty() {
            return Err(ReadError::Malformed("audio clip has no samples".into()));
        }
        if let Some(bad) = samples.iter().find(|s| s.is_nan() || s.abs() > 1.0) {
            return Err(ReadError::Malformed(format!("sample {bad} outside [-1, 1]")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// 8-bit grayscale image, row-major, top-left origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ReadError> {
        if width == 0 || height == 0 {
            return Err(ReadError::Malformed(format!(
                "image dimensions {width}x{height} must be positive"
            )));
        }
        if pixels.len() != width * height {
            return Err(ReadError::Malformed(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleManifest {
    pub entries: Vec<ManifestEntry>,
}

impl SampleManifest {
    /// Distinct labels in lexicographic order.
    pub fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.entries.iter().map(|e| e.label.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Entries with relative paths interpreted against `base`.
    pub fn resolved(&self, base: &Path) -> Vec<ManifestEntry> {
        self.entries
            .iter()
            .map(|e| ManifestEntry {
                path: if e.path.is_absolute() {
                    e.path.clone()
                } else {
                    base.join(&e.path)
                },
                label: e.label.clone(),
            })
            .collect()
    }
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioClip, ReadError> {
    parse_wav(&fs::read(path)?)
}

fn le_u16(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn le_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Parses an in-memory RIFF/WAVE file.
pub fn parse_wav(bytes: &[u8]) -> Result<AudioClip, ReadError> {
    if bytes.len() < 12 {
        return Err(ReadError::Truncated("RIFF header shorter than 12 bytes".into()));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(ReadError::Malformed("missing RIFF/WAVE signature".into()));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = le_u32(bytes, pos + 4) as usize;
        let body = pos + 8;
        match id {
            b"fmt " => {
                if size < 16 || body + 16 > bytes.len() {
                    return Err(ReadError::Truncated("fmt chunk".into()));
                }
                fmt = Some((
                    le_u16(bytes, body),
                    le_u16(bytes, body + 2),
                    le_u32(bytes, body + 4),
                    le_u16(bytes, body + 14),
                ));
            }
            b"data" => {
                let (format, channels, rate, bits) =
                    fmt.ok_or_else(|| ReadError::Malformed("data chunk before fmt chunk".into()))?;
                if format != 1 || bits != 16 {
                    return Err(ReadError::NotPcm16 { format, bits });
                }
                if channels != 1 {
                    return Err(ReadError::BadChannels(channels));
                }
                if rate != SAMPLE_RATE {
                    return Err(ReadError::BadRate(rate));
                }
                let available = bytes.len() - body;
                if size > available {
                    return Err(ReadError::Truncated(format!(
                        "data chunk declares {size} bytes, {available} present"
                    )));
                }
                if !size.is_multiple_of(2) {
                    return Err(ReadError::Malformed("odd-sized PCM16 data chunk".into()));
                }
                let samples = bytes[body..body + size]
                    .chunks_exact(2)
                    .map(|p| i16::from_le_bytes([p[0], p[1]]) as f64 / PCM16_SCALE)
                    .collect();
                return AudioClip::new(samples, rate);
            }
            _ => {}
        }
        // Chunks are word aligned.
        pos = body + size + (size & 1);
    }
    match fmt {
        None => Err(ReadError::Malformed("no fmt chunk".into())),
        Some(_) => Err(ReadError::Malformed("no data chunk".into())),
    }
}

/// Serializes a clip as PCM16 mono WAV. Amplitudes are rounded to the
/// nearest step of 1/32768 and clamped to the representable range.
pub fn encode_wav(clip: &AudioClip) -> Vec<u8> {
    let data_len = clip.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&clip.sample_rate().to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate() * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in clip.samples() {
        let q = (s * PCM16_SCALE).round().clamp(-32_768.0, 32_767.0) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    out
}

pub fn write_wav(path: impl AsRef<Path>, clip: &AudioClip) -> io::Result<()> {
    fs::write(path, encode_wav(clip))
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage, ReadError> {
    parse_pgm(&fs::read(path)?)
}

/// Splits whitespace-separated header tokens, skipping `#` comments.
struct HeaderTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderTokens<'a> {
    fn next_token(&mut self) -> Option<&'a [u8]> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn next_number(&mut self, what: &str) -> Result<u32, ReadError> {
        let tok = self
            .next_token()
            .ok_or_else(|| ReadError::Truncated(format!("PGM header missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                ReadError::Malformed(format!(
                    "PGM {what} {:?} is not a number",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Parses an in-memory P2 (ASCII) or P5 (binary) PGM image with maxval <= 255.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, ReadError> {
    let mut tokens = HeaderTokens { bytes, pos: 0 };
    let magic = tokens
        .next_token()
        .ok_or_else(|| ReadError::BadMagic(String::new()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => return Err(ReadError::BadMagic(String::from_utf8_lossy(other).into_owned())),
    };
    let width = tokens.next_number("width")? as usize;
    let height = tokens.next_number("height")? as usize;
    let maxval = tokens.next_number("maxval")?;
    if maxval > 255 {
        return Err(ReadError::BadMaxval(maxval));
    }
    if maxval == 0 || width == 0 || height == 0 {
        return Err(ReadError::Malformed(format!(
            "PGM header {width}x{height} maxval {maxval}"
        )));
    }
    let count = width * height;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = tokens.pos + 1;
        if start > bytes.len() || bytes.len() - start < count {
            return Err(ReadError::Truncated(format!(
                "P5 raster needs {count} bytes, {} present",
                bytes.len().saturating_sub(start)
            )));
        }
        bytes[start..start + count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for i in 0..count {
            let tok = tokens.next_token().ok_or_else(|| {
                ReadError::Truncated(format!("P2 raster has {i} of {count} values"))
            })?;
            let v: u32 = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ReadError::Malformed("non-numeric P2 pixel".into()))?;
            pixels.push(v);
        }
        if let Some(v) = pixels.iter().find(|&&v| v > maxval) {
            return Err(ReadError::Malformed(format!("pixel {v} exceeds maxval {maxval}")));
        }
        pixels.into_iter().map(|v| v as u8).collect()
    };
    if binary {
        if let Some(v) = pixels.iter().find(|&&v| u32::from(v) > maxval) {
            return Err(ReadError::Malformed(format!("pixel {v} exceeds maxval {maxval}")));
        }
    }
    GrayImage::new(width, height, pixels)
}

pub fn encode_pgm_p5(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn encode_pgm_p2(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
    for row in img.pixels().chunks(img.width()) {
        let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> io::Result<()> {
    fs::write(path, encode_pgm_p5(img))
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<SampleManifest, ReadError> {
    let text = fs::read_to_string(path)?;
    parse_manifest(&text)
}

pub fn parse_manifest(text: &str) -> Result<SampleManifest, ReadError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(ReadError::BadLine {
                line: i + 1,
                content: raw.to_string(),
            });
        }
        entries.push(ManifestEntry {
            path: PathBuf::from(fields[0]),
            label: fields[1].to_string(),
        });
    }
    if entries.is_empty() {
        return Err(ReadError::Empty);
    }
    Ok(SampleManifest { entries })
}
