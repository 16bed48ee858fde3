//! 8-bit grayscale rasters and binarization.

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;

/// An 8-bit intensity raster, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image with every pixel set to `fill`.
    pub fn new(width: usize, height: usize, fill: u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        Ok(GrayImage {
            width,
            height,
            pixels: vec![fill; width * height],
        })
    }

    /// Wraps a row-major pixel buffer; its length must be `width * height`.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidDimensions { width, height });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.height && col < self.width, "pixel out of range");
        self.pixels[row * self.width + col]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GrayImage {}x{}", self.width, self.height)
    }
}

/// How to pick the binarization threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSpec {
    /// Use this value directly.
    Fixed(u8),
    /// Maximize between-class variance over the intensity histogram.
    Otsu,
}

/// Binarizes an image: a cell reads 1 iff its intensity is >= the threshold.
pub fn threshold(img: &GrayImage, spec: ThresholdSpec) -> BinaryGrid {
    let t = match spec {
        ThresholdSpec::Fixed(t) => t,
        ThresholdSpec::Otsu => otsu_threshold(img),
    };
    let mut grid = BinaryGrid::new(img.width(), img.height(), false)
        .expect("image has valid dimensions");
    for r in 0..img.height() {
        for c in 0..img.width() {
            if img.get(r, c) >= t {
                grid.set(r, c, true);
            }
        }
    }
    grid
}

/// The threshold maximizing between-class variance, where class 0 holds
/// intensities `< t` and class 1 holds `>= t`.
///
/// Only thresholds with two nonempty classes compete; ties break toward the
/// smallest t. A single-level image degenerates to that level, so the result
/// always lies in `[min intensity, max intensity + 1)`.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total: u64 = img.pixels().len() as u64;
    let total_sum: u64 = hist
        .iter()
        .enumerate()
        .map(|(v, &n)| v as u64 * n)
        .sum();

    let mut best: Option<(f64, u8)> = None;
    let mut count0 = 0u64; // pixels below t
    let mut sum0 = 0u64;
    for t in 1..=255usize {
        count0 += hist[t - 1];
        sum0 += (t - 1) as u64 * hist[t - 1];
        if count0 == 0 {
            continue;
        }
        let count1 = total - count0;
        if count1 == 0 {
            break;
        }
        let mean0 = sum0 as f64 / count0 as f64;
        let mean1 = (total_sum - sum0) as f64 / count1 as f64;
        let spread = mean0 - mean1;
        let variance = count0 as f64 * count1 as f64 * spread * spread;
        if best.is_none_or(|(v, _)| variance > v) {
            best = Some((variance, t as u8));
        }
    }

    match best {
        Some((_, t)) => t,
        // single intensity level: every candidate splits off an empty class
        None => img.pixels().iter().copied().min().unwrap_or(0),
    }
}
