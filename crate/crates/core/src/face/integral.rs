use crate::signal_io::GrayImage;

/// Summed-area tables of pixel values and squared pixel values.
///
/// Entry `(x, y)` holds the sum over all pixels strictly above and to the
/// left of `(x, y)`, so the grids are one larger than the image in both
/// directions and their first row and column are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    sum: Vec<u64>,
    sq_sum: Vec<u64>,
}

impl IntegralImage {
    pub fn new(img: &GrayImage) -> Self {
        let (w, h) = (img.width(), img.height());
        let stride = w + 1;
        let mut sum = vec![0u64; stride * (h + 1)];
        let mut sq_sum = vec![0u64; stride * (h + 1)];
        for y in 0..h {
            let mut row = 0u64;
            let mut row_sq = 0u64;
            for x in 0..w {
                let p = u64::from(img.get(x, y));
                row += p;
                row_sq += p * p;
                let i = (y + 1) * stride + x + 1;
                sum[i] = sum[i - stride] + row;
                sq_sum[i] = sq_sum[i - stride] + row_sq;
            }
        }
        Self {
            width: w,
            height: h,
            sum,
            sq_sum,
        }
    }

    /// Width of the source image.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Cumulative sum at grid corner `(x, y)`, `0 <= x <= width`, `0 <= y <= height`.
    pub fn at(&self, x: usize, y: usize) -> u64 {
        self.sum[y * (self.width + 1) + x]
    }

    pub fn sq_at(&self, x: usize, y: usize) -> u64 {
        self.sq_sum[y * (self.width + 1) + x]
    }

    fn corners(grid: &[u64], stride: usize, x: usize, y: usize, w: usize, h: usize) -> u64 {
        let a = grid[y * stride + x];
        let b = grid[y * stride + x + w];
        let c = grid[(y + h) * stride + x];
        let d = grid[(y + h) * stride + x + w];
        d + a - b - c
    }

    /// Sum of the `w x h` rectangle with top-left pixel `(x, y)`.
    pub fn rect_sum(&self, x: usize, y: usize, w: usize, h: usize) -> u64 {
        debug_assert!(x + w <= self.width && y + h <= self.height);
        Self::corners(&self.sum, self.width + 1, x, y, w, h)
    }

    pub fn rect_sq_sum(&self, x: usize, y: usize, w: usize, h: usize) -> u64 {
        debug_assert!(x + w <= self.width && y + h <= self.height);
        Self::corners(&self.sq_sum, self.width + 1, x, y, w, h)
    }
}
