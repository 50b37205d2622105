//! Independent brute-force reference implementations and seeded data
//! generators shared by the integration tests. Nothing here calls into the
//! code under test except for plain data types.

#![allow(dead_code)]

use std::f64::consts::PI;

use emofuse::signal_io::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_frame(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..480).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    let pixels = (0..w * h).map(|_| rng.gen()).collect();
    GrayImage::new(w, h, pixels).unwrap()
}

/// `|a - b| <= rel * max(|b|, floor)`.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(floor)
}

/// Windowed, zero-padded O(N²) DFT magnitudes of bins 0..=256.
pub fn dft_magnitudes(frame: &[f64]) -> Vec<f64> {
    let n_fft = 512.0;
    (0..=256)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (n, &x) in frame.iter().enumerate() {
                let w = 0.54 - 0.46 * (2.0 * PI * n as f64 / 479.0).cos();
                let angle = -2.0 * PI * (k * n) as f64 / n_fft;
                re += x * w * angle.cos();
                im += x * w * angle.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// MFCC from magnitudes with the filterbank and DCT written out as loops.
pub fn mfcc_oracle(magnitudes: &[f64]) -> Vec<f64> {
    let mel = |f: f64| 2595.0 * (1.0 + f / 700.0).log10();
    let hz = |m: f64| 700.0 * (10f64.powf(m / 2595.0) - 1.0);
    let top = mel(8000.0);
    let mut edges = [0.0; 28];
    for (i, e) in edges.iter_mut().enumerate() {
        *e = hz(top * i as f64 / 27.0);
    }
    let mut log_e = [0.0; 26];
    for m in 0..26 {
        let mut e = 0.0;
        for (k, &mag) in magnitudes.iter().enumerate() {
            let f = k as f64 * 31.25;
            let w = if f < edges[m] || f > edges[m + 2] {
                0.0
            } else if f <= edges[m + 1] {
                (f - edges[m]) / (edges[m + 1] - edges[m])
            } else {
                (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1])
            };
            e += w * mag * mag;
        }
        log_e[m] = if e > 1e-10 { e.ln() } else { 1e-10f64.ln() };
    }
    (0..13)
        .map(|k| {
            let mut c = 0.0;
            for (m, &x) in log_e.iter().enumerate() {
                c += x * (PI * k as f64 * (2 * m + 1) as f64 / 52.0).cos();
            }
            c * if k == 0 { (1.0f64 / 26.0).sqrt() } else { (2.0f64 / 26.0).sqrt() }
        })
        .collect()
}

/// Double-loop squared difference for lags `t_min..=t_max`.
pub fn yin_oracle(y: &[f64], t_min: usize, t_max: usize) -> Vec<f64> {
    let w = y.len() - t_max;
    let mut out = Vec::new();
    for t in t_min..=t_max {
        let mut d = 0.0;
        for j in 0..w {
            let diff = y[j] - y[j + t];
            d += diff * diff;
        }
        out.push(d);
    }
    out
}

pub fn rect_sum_oracle(img: &GrayImage, x: usize, y: usize, w: usize, h: usize) -> u64 {
    let mut s = 0u64;
    for yy in y..y + h {
        for xx in x..x + w {
            s += u64::from(img.get(xx, yy));
        }
    }
    s
}

/// Pattern of one pixel from an explicit 3x3 weight grid.
pub fn lbp_oracle(img: &GrayImage, x: usize, y: usize) -> u8 {
    const WEIGHTS: [[u32; 3]; 3] = [[128, 64, 32], [1, 0, 16], [2, 4, 8]];
    let c = img.get(x, y);
    let mut code = 0;
    for (dy, row) in WEIGHTS.iter().enumerate() {
        for (dx, &wt) in row.iter().enumerate() {
            if wt > 0 && img.get(x + dx - 1, y + dy - 1) >= c {
                code += wt;
            }
        }
    }
    code as u8
}

/// Approximately standard normal: sum of 12 uniforms minus 6.
pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    (0..12).map(|_| rng.gen::<f64>()).sum::<f64>() - 6.0
}

/// `n` points in `dim` dimensions, alternating between two unit-variance
/// clouds whose means differ by `separation` along every axis' diagonal.
pub fn two_gaussians(seed: u64, n: usize, dim: usize, separation: f64) -> (Vec<Vec<f64>>, Vec<String>) {
    let mut r = rng(seed);
    let shift = separation / (dim as f64).sqrt();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        let (label, c) = if i % 2 == 0 { ("neg", 0.0) } else { ("pos", shift) };
        x.push((0..dim).map(|_| c + gauss(&mut r)).collect());
        y.push(label.to_string());
    }
    (x, y)
}

pub fn pick(x: &[Vec<f64>], y: &[String], idx: &[usize]) -> (Vec<Vec<f64>>, Vec<String>) {
    (idx.iter().map(|&i| x[i].clone()).collect(), idx.iter().map(|&i| y[i].clone()).collect())
}
