//! Classical edge detectors used as comparison baselines: gradient operators
//! (Sobel, Prewitt, Roberts), Laplacian of Gaussian with zero-crossing
//! extraction, and Canny.
//!
//! All detectors replicate the border pixel when a kernel reaches outside the
//! image (clamp-to-edge), and all thresholds compare with `>=`.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;
use crate::imaging::GrayImage;

/// Default magnitude threshold for [`gradient_detect`].
pub const DEFAULT_GRADIENT_THRESHOLD: f64 = 128.0;
/// Default smoothing scale for [`log_detect`].
pub const DEFAULT_LOG_SIGMA: f64 = 2.0;
/// Default zero-crossing jump threshold for [`log_detect`].
pub const DEFAULT_LOG_THRESHOLD: f64 = 5.0;

/// Largest accepted Gaussian scale; beyond this the kernels stop being
/// meaningfully supported by realistic image sizes.
const MAX_SIGMA: f64 = 100.0;

/// Filter responses this close to zero are treated as zero. Accumulated
/// floating-point rounding on flat 8-bit regions reaches at most ~1e-9,
/// while any real response to a one-level intensity change exceeds ~1e-2,
/// so this floor separates the two regimes by several orders of magnitude.
const RESPONSE_EPSILON: f64 = 1e-6;

/// A small correlation kernel with an anchor cell.
///
/// Correlating computes `out(r, c) = sum K(i, j) * I(r + i - anchor_row,
/// c + j - anchor_col)` with source coordinates clamped to the image.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    height: usize,
    width: usize,
    anchor_row: usize,
    anchor_col: usize,
    coeffs: Vec<f64>,
}

impl Kernel {
    /// Builds a kernel from rectangular rows of coefficients; the anchor must
    /// lie inside the kernel.
    pub fn new<R: AsRef<[f64]>>(rows: &[R], anchor_row: usize, anchor_col: usize) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        if height == 0 || width == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let mut coeffs = Vec::with_capacity(width * height);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: width,
                    got: row.len(),
                });
            }
            coeffs.extend_from_slice(row);
        }
        if anchor_row >= height || anchor_col >= width {
            return Err(Error::OutOfRange {
                row: anchor_row as isize,
                col: anchor_col as isize,
                width,
                height,
            });
        }
        Ok(Kernel {
            height,
            width,
            anchor_row,
            anchor_col,
            coeffs,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Sum of all coefficients.
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Correlates the kernel with an image, replicating border pixels.
    /// Returns the response row-major, one value per pixel.
    pub fn correlate(&self, img: &GrayImage) -> Vec<f64> {
        let values: Vec<f64> = img.pixels().iter().map(|&p| p as f64).collect();
        self.correlate_values(&values, img.width(), img.height())
    }

    fn correlate_values(&self, values: &[f64], width: usize, height: usize) -> Vec<f64> {
        assert_eq!(values.len(), width * height);
        let mut out = vec![0.0; width * height];
        for r in 0..height {
            for c in 0..width {
                let mut acc = 0.0;
                for kr in 0..self.height {
                    let sr = clamp_index(r as isize + kr as isize - self.anchor_row as isize, height);
                    for kc in 0..self.width {
                        let sc =
                            clamp_index(c as isize + kc as isize - self.anchor_col as isize, width);
                        acc += self.coeffs[kr * self.width + kc] * values[sr * width + sc];
                    }
                }
                out[r * width + c] = acc;
            }
        }
        out
    }
}

fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// A pair of first-derivative kernels: `gx` responds to change along
/// columns (vertical edges), `gy` to change along rows (horizontal edges,
/// with row index increasing downward).
#[derive(Debug, Clone, PartialEq)]
pub struct GradientKernelPair {
    gx: Kernel,
    gy: Kernel,
}

impl GradientKernelPair {
    /// Pairs two derivative kernels. Each must have zero mean, otherwise it
    /// would respond to flat regions.
    pub fn new(gx: Kernel, gy: Kernel) -> Result<Self> {
        for (name, kernel) in [("gx", &gx), ("gy", &gy)] {
            if kernel.sum().abs() > 1e-9 {
                return Err(Error::usage(format!(
                    "gradient kernel {name} must have zero sum, got {}",
                    kernel.sum()
                )));
            }
        }
        Ok(GradientKernelPair { gx, gy })
    }

    pub fn sobel() -> Self {
        let gx = Kernel::new(
            &[[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]],
            1,
            1,
        )
        .expect("static kernel");
        let gy = Kernel::new(
            &[[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]],
            1,
            1,
        )
        .expect("static kernel");
        GradientKernelPair::new(gx, gy).expect("static kernels have zero sum")
    }

    pub fn prewitt() -> Self {
        let gx = Kernel::new(
            &[[-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]],
            1,
            1,
        )
        .expect("static kernel");
        let gy = Kernel::new(
            &[[-1.0, -1.0, -1.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]],
            1,
            1,
        )
        .expect("static kernel");
        GradientKernelPair::new(gx, gy).expect("static kernels have zero sum")
    }

    pub fn roberts() -> Self {
        let gx = Kernel::new(&[[1.0, 0.0], [0.0, -1.0]], 0, 0).expect("static kernel");
        let gy = Kernel::new(&[[0.0, 1.0], [-1.0, 0.0]], 0, 0).expect("static kernel");
        GradientKernelPair::new(gx, gy).expect("static kernels have zero sum")
    }

    pub fn gx(&self) -> &Kernel {
        &self.gx
    }

    pub fn gy(&self) -> &Kernel {
        &self.gy
    }
}

/// Marks every cell whose Euclidean gradient magnitude
/// `sqrt(gx^2 + gy^2)` is at least `threshold`.
pub fn gradient_detect(img: &GrayImage, kernels: &GradientKernelPair, threshold: f64) -> BinaryGrid {
    let gx = kernels.gx.correlate(img);
    let gy = kernels.gy.correlate(img);
    let mut out = BinaryGrid::new(img.width(), img.height(), false).expect("image dimensions");
    for r in 0..img.height() {
        for c in 0..img.width() {
            let i = r * img.width() + c;
            if (gx[i] * gx[i] + gy[i] * gy[i]).sqrt() >= threshold {
                out.set(r, c, true);
            }
        }
    }
    out
}

fn validate_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 && sigma <= MAX_SIGMA {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "sigma must be a finite value in (0, {MAX_SIGMA}], got {sigma}"
        )))
    }
}

/// A discretized Laplacian-of-Gaussian kernel of radius `ceil(3 * sigma)`,
/// shifted to have exactly zero mean so flat regions produce no response.
pub fn log_kernel(sigma: f64) -> Result<Kernel> {
    validate_sigma(sigma)?;
    let radius = (3.0 * sigma).ceil() as isize;
    let size = (2 * radius + 1) as usize;
    let s2 = sigma * sigma;
    let mut coeffs = Vec::with_capacity(size * size);
    for y in -radius..=radius {
        for x in -radius..=radius {
            let r2 = (x * x + y * y) as f64;
            coeffs.push((r2 - 2.0 * s2) / (s2 * s2) * (-r2 / (2.0 * s2)).exp());
        }
    }
    let mean = coeffs.iter().sum::<f64>() / coeffs.len() as f64;
    for c in &mut coeffs {
        *c -= mean;
    }
    Ok(Kernel {
        height: size,
        width: size,
        anchor_row: radius as usize,
        anchor_col: radius as usize,
        coeffs,
    })
}

/// Laplacian-of-Gaussian detector: filters with [`log_kernel`] and marks both
/// cells of every horizontally or vertically adjacent pair whose responses
/// lie on strictly opposite sides of the noise floor and differ by at least
/// `threshold`.
pub fn log_detect(img: &GrayImage, sigma: f64, threshold: f64) -> Result<BinaryGrid> {
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::usage(format!(
            "zero-crossing threshold must be finite and non-negative, got {threshold}"
        )));
    }
    let kernel = log_kernel(sigma)?;
    let response = kernel.correlate(img);
    let (w, h) = (img.width(), img.height());
    let mut out = BinaryGrid::new(w, h, false).expect("image dimensions");
    let sign = |x: f64| {
        if x > RESPONSE_EPSILON {
            1i32
        } else if x < -RESPONSE_EPSILON {
            -1
        } else {
            0
        }
    };
    let mark_if_crossing = |r0: usize, c0: usize, r1: usize, c1: usize, out: &mut BinaryGrid| {
        let a = response[r0 * w + c0];
        let b = response[r1 * w + c1];
        if sign(a) * sign(b) == -1 && (a - b).abs() >= threshold {
            out.set(r0, c0, true);
            out.set(r1, c1, true);
        }
    };
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                mark_if_crossing(r, c, r, c + 1, &mut out);
            }
            if r + 1 < h {
                mark_if_crossing(r, c, r + 1, c, &mut out);
            }
        }
    }
    Ok(out)
}

/// Canny detector settings. `low` and `high` are fractions of the maximum
/// gradient magnitude that survives non-maximum suppression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    sigma: f64,
    low: f64,
    high: f64,
}

impl CannyParams {
    /// Validates that `sigma` is a usable Gaussian scale and that
    /// `0 <= low <= high` with both fractions finite.
    pub fn new(sigma: f64, low: f64, high: f64) -> Result<Self> {
        validate_sigma(sigma)?;
        if !(low.is_finite() && high.is_finite() && 0.0 <= low && low <= high) {
            return Err(Error::usage(format!(
                "hysteresis fractions must satisfy 0 <= low <= high, got low={low} high={high}"
            )));
        }
        Ok(CannyParams { sigma, low, high })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

impl Default for CannyParams {
    fn default() -> Self {
        CannyParams {
            sigma: 1.4,
            low: 0.1,
            high: 0.3,
        }
    }
}

/// Canny detector: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression along one of four quantized gradient directions, then
/// hysteresis growing strong seeds through weak cells over 8-connectivity.
///
/// A cell whose gradient magnitude sits at the floating-point noise floor is
/// never an edge; if nothing survives suppression the result is empty.
pub fn canny(img: &GrayImage, params: &CannyParams) -> BinaryGrid {
    let (w, h) = (img.width(), img.height());
    let blurred = blur_values(img, params.sigma);
    let sobel = GradientKernelPair::sobel();
    let gx = sobel.gx.correlate_values(&blurred, w, h);
    let gy = sobel.gy.correlate_values(&blurred, w, h);
    let mag: Vec<f64> = gx
        .iter()
        .zip(&gy)
        .map(|(x, y)| (x * x + y * y).sqrt())
        .collect();

    // Non-maximum suppression: keep a cell only if it is at least as strong
    // as both neighbors along its gradient direction (out-of-image neighbors
    // count as zero).
    let mut nms = vec![0.0f64; w * h];
    let mut max_mag = 0.0f64;
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if mag[i] <= RESPONSE_EPSILON {
                continue;
            }
            let (dr, dc) = gradient_direction(gx[i], gy[i]);
            let ahead = neighbor_mag(&mag, w, h, r, c, dr, dc);
            let behind = neighbor_mag(&mag, w, h, r, c, -dr, -dc);
            if mag[i] >= ahead && mag[i] >= behind {
                nms[i] = mag[i];
                max_mag = max_mag.max(mag[i]);
            }
        }
    }
    let mut out = BinaryGrid::new(w, h, false).expect("image dimensions");
    if max_mag == 0.0 {
        return out;
    }
    let strong_t = params.high * max_mag;
    let weak_t = params.low * max_mag;
    let is_weak = |i: usize| nms[i] > 0.0 && nms[i] >= weak_t;

    let mut queue = VecDeque::new();
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if nms[i] > 0.0 && nms[i] >= strong_t {
                out.set(r, c, true);
                queue.push_back((r, c));
            }
        }
    }
    while let Some((r, c)) = queue.pop_front() {
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                    continue;
                }
                let (nr, nc) = (nr as usize, nc as usize);
                if !out.get(nr, nc) && is_weak(nr * w + nc) {
                    out.set(nr, nc, true);
                    queue.push_back((nr, nc));
                }
            }
        }
    }
    out
}

/// Quantizes a gradient vector to one of four directions:
/// east-west, the down-right diagonal, north-south, or the down-left
/// diagonal.
fn gradient_direction(gx: f64, gy: f64) -> (isize, isize) {
    let mut angle = gy.atan2(gx);
    if angle < 0.0 {
        angle += PI;
    }
    match ((angle * 4.0 / PI).round() as usize) % 4 {
        0 => (0, 1),
        1 => (1, 1),
        2 => (1, 0),
        _ => (1, -1),
    }
}

fn neighbor_mag(mag: &[f64], w: usize, h: usize, r: usize, c: usize, dr: isize, dc: isize) -> f64 {
    let (nr, nc) = (r as isize + dr, c as isize + dc);
    if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
        0.0
    } else {
        mag[nr as usize * w + nc as usize]
    }
}

fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Separable Gaussian blur with clamp-to-edge borders, in f64 precision.
fn blur_values(img: &GrayImage, sigma: f64) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let taps = gaussian_taps(sigma);
    let radius = (taps.len() / 2) as isize;
    let src: Vec<f64> = img.pixels().iter().map(|&p| p as f64).collect();

    let mut rows_done = vec![0.0f64; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (j, t) in taps.iter().enumerate() {
                let sc = clamp_index(c as isize + j as isize - radius, w);
                acc += t * src[r * w + sc];
            }
            rows_done[r * w + c] = acc;
        }
    }
    let mut out = vec![0.0f64; w * h];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (j, t) in taps.iter().enumerate() {
                let sr = clamp_index(r as isize + j as isize - radius, h);
                acc += t * rows_done[sr * w + c];
            }
            out[r * w + c] = acc;
        }
    }
    out
}
