use rayon::prelude::*;

use super::cascade::{Cascade, HaarFeature, BASE_WINDOW};
use super::integral::IntegralImage;
use super::DetectError;
use crate::signal_io::GrayImage;

/// Ratio between successive pyramid scales.
pub const SCALE_STEP: f64 = 1.25;

/// Raw hits whose intersection-over-union reaches this are merged.
const GROUP_IOU: f64 = 0.5;

/// Square detection window in image pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl FaceBox {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.w > 0 && self.h > 0 && self.x + self.w <= width && self.y + self.h <= height
    }

    pub fn iou(&self, other: &FaceBox) -> f64 {
        let ix = (self.x + self.w).min(other.x + other.w) as isize - self.x.max(other.x) as isize;
        let iy = (self.y + self.h).min(other.y + other.h) as isize - self.y.max(other.y) as isize;
        if ix <= 0 || iy <= 0 {
            return 0.0;
        }
        let inter = (ix * iy) as f64;
        inter / ((self.area() + other.area()) as f64 - inter)
    }
}

fn window_size(scale: f64) -> usize {
    (BASE_WINDOW as f64 * scale).round() as usize
}

/// Feature response on a window, with each rectangle sum rescaled to base
/// window area and divided by the window's standard deviation.
fn feature_value(
    ii: &IntegralImage,
    feature: &HaarFeature,
    x: usize,
    y: usize,
    win: usize,
    scale: f64,
    std: f64,
) -> f64 {
    let mut value = 0.0;
    for r in &feature.rects {
        let rx = ((r.x as f64 * scale).round() as usize).min(win - 1);
        let ry = ((r.y as f64 * scale).round() as usize).min(win - 1);
        let rw = ((r.w as f64 * scale).round() as usize).clamp(1, win - rx);
        let rh = ((r.h as f64 * scale).round() as usize).clamp(1, win - ry);
        let sum = ii.rect_sum(x + rx, y + ry, rw, rh) as f64;
        let area_ratio = f64::from(r.w * r.h) / (rw * rh) as f64;
        value += r.weight * sum * area_ratio;
    }
    value / std
}

/// Runs the cascade on the window at `(x, y)` whose side is `24·scale`
/// (rounded). Returns false as soon as one stage's stump total falls below
/// its threshold.
pub fn eval_window(ii: &IntegralImage, cascade: &Cascade, x: usize, y: usize, scale: f64) -> bool {
    let win = window_size(scale);
    if win == 0 || x + win > ii.width() || y + win > ii.height() {
        debug_assert!(false, "window ({x},{y}) size {win} does not fit");
        return false;
    }
    let n = (win * win) as f64;
    let mean = ii.rect_sum(x, y, win, win) as f64 / n;
    let var = ii.rect_sq_sum(x, y, win, win) as f64 / n - mean * mean;
    let std = var.max(0.0).sqrt().max(1.0);

    cascade.stages().iter().all(|stage| {
        let total: f64 = stage
            .stumps
            .iter()
            .map(|s| {
                if feature_value(ii, &s.feature, x, y, win, scale, std) < s.threshold {
                    s.left
                } else {
                    s.right
                }
            })
            .sum();
        total >= stage.threshold
    })
}

/// Every accepted window over the scale pyramid 1, 1.25, 1.25², ... in
/// scan order (scale, then row, then column).
pub fn scan_windows(ii: &IntegralImage, cascade: &Cascade) -> Vec<FaceBox> {
    let (w, h) = (ii.width(), ii.height());
    let mut hits = Vec::new();
    let mut scale = 1.0;
    loop {
        let win = window_size(scale);
        if win > w || win > h {
            break;
        }
        let step = (scale.round() as usize).max(1);
        let rows: Vec<usize> = (0..=h - win).step_by(step).collect();
        let found: Vec<Vec<FaceBox>> = rows
            .par_iter()
            .map(|&y| {
                (0..=w - win)
                    .step_by(step)
                    .filter(|&x| eval_window(ii, cascade, x, y, scale))
                    .map(|x| FaceBox::new(x, y, win, win))
                    .collect()
            })
            .collect();
        hits.extend(found.into_iter().flatten());
        scale *= SCALE_STEP;
    }
    hits
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Merges raw hits into connected groups (IoU >= 0.5), returning each
/// group's mean box together with its size, largest group first.
pub fn group_detections(hits: &[FaceBox], width: usize, height: usize) -> Vec<(FaceBox, usize)> {
    let mut parent: Vec<usize> = (0..hits.len()).collect();
    for i in 0..hits.len() {
        for j in i + 1..hits.len() {
            if hits[i].iou(&hits[j]) >= GROUP_IOU {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    // Groups keyed by their smallest member index, so output order is stable.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); hits.len()];
    for i in 0..hits.len() {
        let root = find(&mut parent, i);
        members[root].push(i);
    }
    let mut groups: Vec<(FaceBox, usize)> = members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| {
            let n = m.len() as f64;
            let mean = |f: fn(&FaceBox) -> usize| m.iter().map(|&i| f(&hits[i]) as f64).sum::<f64>() / n;
            let side = (mean(|b| b.w).round() as usize).clamp(1, width.min(height));
            let x = (mean(|b| b.x).round() as usize).min(width - side);
            let y = (mean(|b| b.y).round() as usize).min(height - side);
            (FaceBox::new(x, y, side, side), m.len())
        })
        .collect();
    groups.sort_by_key(|g| std::cmp::Reverse(g.1));
    groups
}

/// Detected faces, most strongly supported first.
pub fn detect_faces(img: &GrayImage, cascade: &Cascade) -> Result<Vec<FaceBox>, DetectError> {
    let base = BASE_WINDOW as usize;
    if img.width() < base || img.height() < base {
        return Err(DetectError::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            window: base,
        });
    }
    let ii = IntegralImage::new(img);
    let hits = scan_windows(&ii, cascade);
    Ok(group_detections(&hits, img.width(), img.height())
        .into_iter()
        .map(|(b, _)| b)
        .collect())
}
