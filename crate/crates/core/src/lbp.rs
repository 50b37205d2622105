//! Local binary patterns over a cropped face and the 56-region uniform-LBP
//! histogram vector.
//!
//! Neighbours are visited clockwise from the top-left and the first one
//! visited becomes the most significant bit:
//!
//! ```text
//! 7 6 5
//! 0 c 4
//! 1 2 3
//! ```
//!
//! (bit numbers shown). A bit is set when the neighbour is at least as bright
//! as the centre.

use std::sync::OnceLock;

use thiserror::Error;

use crate::face::{FACE_HEIGHT, FACE_WIDTH};
use crate::signal_io::GrayImage;

/// Bins per regional histogram: 58 uniform codes plus one shared bin.
pub const LBP_BINS: usize = 59;
pub const GRID_COLS: usize = 7;
pub const GRID_ROWS: usize = 8;
pub const FACIAL_FEATURE_LEN: usize = GRID_COLS * GRID_ROWS * LBP_BINS;

/// Clockwise from top-left, as (dx, dy).
const NEIGHBOURS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LbpError {
    #[error("pixel ({x}, {y}) has no full 3x3 neighbourhood in a {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("image {width}x{height} is too small for LBP (minimum 3x3)")]
    ImageTooSmall { width: usize, height: usize },
    #[error("face must be {FACE_WIDTH}x{FACE_HEIGHT}, got {width}x{height}")]
    BadSize { width: usize, height: usize },
}

/// 8-bit pattern of the pixel at `(x, y)`.
pub fn lbp_code(img: &GrayImage, x: usize, y: usize) -> Result<u8, LbpError> {
    let (w, h) = (img.width(), img.height());
    if x == 0 || y == 0 || x + 1 >= w || y + 1 >= h {
        return Err(LbpError::OutOfBounds {
            x,
            y,
            width: w,
            height: h,
        });
    }
    Ok(code_unchecked(img, x, y))
}

#[inline]
fn code_unchecked(img: &GrayImage, x: usize, y: usize) -> u8 {
    let center = img.get(x, y);
    NEIGHBOURS.iter().fold(0u8, |code, &(dx, dy)| {
        let n = img.get((x as isize + dx) as usize, (y as isize + dy) as usize);
        (code << 1) | u8::from(n >= center)
    })
}

/// Circular 0/1 transitions in an 8-bit pattern.
pub fn transitions(code: u8) -> u32 {
    (code ^ code.rotate_left(1)).count_ones()
}

/// Maps each 8-bit pattern to its histogram bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformMap {
    table: [u8; 256],
}

impl UniformMap {
    pub fn bin(&self, code: u8) -> usize {
        usize::from(self.table[usize::from(code)])
    }

    pub fn is_uniform(&self, code: u8) -> bool {
        self.bin(code) < LBP_BINS - 1
    }

    pub fn uniform_count(&self) -> usize {
        (0..=255u8).filter(|&c| self.is_uniform(c)).count()
    }
}

/// Uniform patterns (at most two transitions) get bins 0..=57 in ascending
/// code order; every other pattern shares bin 58.
pub fn build_uniform_map() -> UniformMap {
    let mut table = [0u8; 256];
    let mut next = 0u8;
    for code in 0..=255u8 {
        table[usize::from(code)] = if transitions(code) <= 2 {
            next += 1;
            next - 1
        } else {
            (LBP_BINS - 1) as u8
        };
    }
    UniformMap { table }
}

fn uniform_map() -> &'static UniformMap {
    static MAP: OnceLock<UniformMap> = OnceLock::new();
    MAP.get_or_init(build_uniform_map)
}

/// Codes of all interior pixels; one pixel smaller than the source on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LbpImage {
    width: usize,
    height: usize,
    codes: Vec<u8>,
}

impl LbpImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// Code of source pixel `(x + 1, y + 1)`.
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.codes[y * self.width + x]
    }
}

pub fn lbp_image(img: &GrayImage) -> Result<LbpImage, LbpError> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(LbpError::ImageTooSmall {
            width: w,
            height: h,
        });
    }
    let mut codes = Vec::with_capacity((w - 2) * (h - 2));
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            codes.push(code_unchecked(img, x, y));
        }
    }
    Ok(LbpImage {
        width: w - 2,
        height: h - 2,
        codes,
    })
}

/// 56 regional 59-bin histograms, region-major, rows of regions top to
/// bottom and left to right within a row. Counts are raw.
#[derive(Debug, Clone, PartialEq)]
pub struct FacialFeatureVector {
    values: Vec<f64>,
}

impl FacialFeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Histogram of region `(col, row)`.
    pub fn region(&self, col: usize, row: usize) -> &[f64] {
        let start = (row * GRID_COLS + col) * LBP_BINS;
        &self.values[start..start + LBP_BINS]
    }
}

/// Half-open pixel range of grid cell `i` out of `parts` along an axis of `len`.
pub fn grid_span(i: usize, parts: usize, len: usize) -> std::ops::Range<usize> {
    (i * len / parts)..((i + 1) * len / parts)
}

pub fn facial_feature_vector(face: &GrayImage) -> Result<FacialFeatureVector, LbpError> {
    if face.width() != FACE_WIDTH || face.height() != FACE_HEIGHT {
        return Err(LbpError::BadSize {
            width: face.width(),
            height: face.height(),
        });
    }
    let lbp = lbp_image(face)?;
    let map = uniform_map();
    let mut values = vec![0.0; FACIAL_FEATURE_LEN];
    for row in 0..GRID_ROWS {
        for col in 0..GRID_COLS {
            let hist = &mut values[(row * GRID_COLS + col) * LBP_BINS..][..LBP_BINS];
            for y in grid_span(row, GRID_ROWS, lbp.height()) {
                for x in grid_span(col, GRID_COLS, lbp.width()) {
                    hist[map.bin(lbp.get(x, y))] += 1.0;
                }
            }
        }
    }
    Ok(FacialFeatureVector { values })
}
