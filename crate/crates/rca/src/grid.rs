//! Bit-packed binary grids with boundary-aware sampling and whole-grid shifts.
//!
//! A [`BinaryGrid`] stores one cell per bit, row-major, least-significant bit
//! first within each word. Neighborhood access is exposed two ways: per-cell
//! [`BinaryGrid::sample`] (the definitional path, used by oracles) and
//! whole-grid [`BinaryGrid::shift`] (the word-parallel path that rule
//! application is built on). Grids are immutable values: every operation
//! returns a new grid.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// How cells outside the grid read during sampling and shifting.
///
/// Sampling inside the grid is identical under all variants; they differ only
/// in the one-cell ghost ring around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Missing neighbors read as 0.
    Null,
    /// Missing neighbors duplicate the nearest boundary cell (per-axis clamp).
    Adiabatic,
    /// Missing neighbors mirror the cell one step inside (per-axis
    /// reflect-101: ghost index -1 maps to index 1, ghost index n to n-2).
    /// On an axis of length 1 the mirror index is clamped to the single cell.
    Reflexive,
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BoundaryCondition::Null => "null",
            BoundaryCondition::Adiabatic => "adiabatic",
            BoundaryCondition::Reflexive => "reflexive",
        };
        f.write_str(name)
    }
}

/// Relative position of one cell of the nine-neighborhood; both deltas are
/// in {-1, 0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeighborOffset {
    dr: i8,
    dc: i8,
}

impl NeighborOffset {
    /// Builds an offset. Panics if either delta is outside {-1, 0, 1}.
    pub const fn new(dr: i8, dc: i8) -> Self {
        assert!(-1 <= dr && dr <= 1 && -1 <= dc && dc <= 1);
        NeighborOffset { dr, dc }
    }

    pub const fn dr(self) -> i8 {
        self.dr
    }

    pub const fn dc(self) -> i8 {
        self.dc
    }

    /// The nine offsets of the radius-1 rectangular neighborhood, in reading
    /// order (top-left to bottom-right).
    pub const ALL: [NeighborOffset; 9] = [
        NeighborOffset::new(-1, -1),
        NeighborOffset::new(-1, 0),
        NeighborOffset::new(-1, 1),
        NeighborOffset::new(0, -1),
        NeighborOffset::new(0, 0),
        NeighborOffset::new(0, 1),
        NeighborOffset::new(1, -1),
        NeighborOffset::new(1, 0),
        NeighborOffset::new(1, 1),
    ];
}

/// A width x height field of cells over {0, 1}, bit-packed row-major.
///
/// Padding bits beyond `width` in the last word of each row are always 0;
/// every constructor and operation maintains that invariant.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryGrid {
    width: usize,
    height: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BinaryGrid {
    /// Builds a grid with every cell set to `fill`.
    pub fn new(width: usize, height: usize, fill: bool) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let words_per_row = width.div_ceil(WORD_BITS);
        let mut grid = BinaryGrid {
            width,
            height,
            words_per_row,
            words: vec![0; words_per_row * height],
        };
        if fill {
            grid.words.fill(u64::MAX);
            grid.mask_row_padding();
        }
        Ok(grid)
    }

    /// Builds a grid from a rectangular list of 0/1 rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut grid = BinaryGrid::new(width, height, false)?;
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(Error::RaggedRows {
                    row: r,
                    expected: width,
                    got: row.len(),
                });
            }
            for (c, &value) in row.iter().enumerate() {
                match value {
                    0 => {}
                    1 => grid.set(r, c, true),
                    _ => {
                        return Err(Error::NonBinaryCell {
                            row: r,
                            col: c,
                            value,
                        })
                    }
                }
            }
        }
        Ok(grid)
    }

    /// The inverse of [`BinaryGrid::from_rows`].
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.height)
            .map(|r| (0..self.width).map(|c| u8::from(self.get(r, c))).collect())
            .collect()
    }

    /// Builds a grid of uniformly random cells from a fixed seed.
    pub fn random_seeded(width: usize, height: usize, seed: u64) -> Result<Self> {
        let mut grid = BinaryGrid::new(width, height, false)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for word in grid.words.iter_mut() {
            *word = rng.next_u64();
        }
        grid.mask_row_padding();
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of cells set to 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reads the cell at (row, col). Panics if out of range; use
    /// [`BinaryGrid::sample`] for boundary-aware access.
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.height && col < self.width, "cell out of range");
        let word = self.words[row * self.words_per_row + col / WORD_BITS];
        (word >> (col % WORD_BITS)) & 1 == 1
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: bool) {
        debug_assert!(row < self.height && col < self.width);
        let word = &mut self.words[row * self.words_per_row + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    /// Reads the cell at signed coordinates, extending the grid by one ghost
    /// ring according to `bc`. Coordinates beyond the ghost ring are an
    /// error: radius-1 neighborhoods never need more.
    pub fn sample(&self, row: isize, col: isize, bc: BoundaryCondition) -> Result<bool> {
        if row < -1 || row > self.height as isize || col < -1 || col > self.width as isize {
            return Err(Error::OutOfRange {
                row,
                col,
                width: self.width,
                height: self.height,
            });
        }
        match (
            resolve_index(row, self.height, bc),
            resolve_index(col, self.width, bc),
        ) {
            (Some(r), Some(c)) => Ok(self.get(r, c)),
            _ => Ok(false),
        }
    }

    /// Whole-grid shifted view: `out(r, c) == sample(r + dr, c + dc, bc)`
    /// for every cell. Runs on whole words, not per-cell loops.
    pub fn shift(&self, off: NeighborOffset, bc: BoundaryCondition) -> BinaryGrid {
        let mut out = BinaryGrid {
            width: self.width,
            height: self.height,
            words_per_row: self.words_per_row,
            words: vec![0; self.words.len()],
        };
        for r in 0..self.height {
            let src = r as isize + off.dr() as isize;
            let Some(sr) = resolve_index(src, self.height, bc) else {
                continue; // null boundary: ghost row stays zero
            };
            let src_row = &self.words[sr * self.words_per_row..(sr + 1) * self.words_per_row];
            let dst_row = &mut out.words[r * self.words_per_row..(r + 1) * self.words_per_row];
            shift_row(src_row, dst_row, off.dc(), bc, self.width);
        }
        out
    }

    /// Cellwise exclusive-or. Both grids must have equal dimensions.
    pub fn xor(&self, other: &BinaryGrid) -> Result<BinaryGrid> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Cellwise or. Both grids must have equal dimensions.
    pub fn or(&self, other: &BinaryGrid) -> Result<BinaryGrid> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        Ok(out)
    }

    pub(crate) fn xor_assign(&mut self, other: &BinaryGrid) {
        debug_assert!(self.width == other.width && self.height == other.height);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Cells set in both grids; used for confusion counting.
    pub(crate) fn count_common(&self, other: &BinaryGrid) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Rotates 90 degrees clockwise: `out(c, height - 1 - r) == self(r, c)`.
    pub fn rot90_cw(&self) -> BinaryGrid {
        let mut out = BinaryGrid::new(self.height, self.width, false)
            .expect("rotated dimensions stay nonzero");
        for r in 0..self.height {
            for c in 0..self.width {
                if self.get(r, c) {
                    out.set(c, self.height - 1 - r, true);
                }
            }
        }
        out
    }

    fn check_shape(&self, other: &BinaryGrid) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::ShapeMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            });
        }
        Ok(())
    }

    fn mask_row_padding(&mut self) {
        let used = self.width % WORD_BITS;
        if used == 0 {
            return;
        }
        let mask = (1u64 << used) - 1;
        for r in 0..self.height {
            self.words[r * self.words_per_row + self.words_per_row - 1] &= mask;
        }
    }

    #[cfg(test)]
    pub(crate) fn padding_is_clean(&self) -> bool {
        let used = self.width % WORD_BITS;
        if used == 0 {
            return true;
        }
        let mask = (1u64 << used) - 1;
        (0..self.height)
            .all(|r| self.words[r * self.words_per_row + self.words_per_row - 1] & !mask == 0)
    }
}

impl std::fmt::Debug for BinaryGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryGrid {}x{}", self.width, self.height)?;
        for r in 0..self.height {
            for c in 0..self.width {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Maps a possibly-out-of-range index onto a stored index, or `None` when the
/// ghost cell reads as constant 0 (null boundary).
fn resolve_index(idx: isize, len: usize, bc: BoundaryCondition) -> Option<usize> {
    debug_assert!(idx >= -1 && idx <= len as isize);
    if idx >= 0 && (idx as usize) < len {
        return Some(idx as usize);
    }
    match bc {
        BoundaryCondition::Null => None,
        BoundaryCondition::Adiabatic => Some(if idx < 0 { 0 } else { len - 1 }),
        BoundaryCondition::Reflexive => {
            let mirrored = if idx < 0 { 1 } else { len.saturating_sub(2) };
            Some(mirrored.min(len - 1))
        }
    }
}

/// Shifts one packed row horizontally by `dc`, filling the vacated edge
/// column from the row's own ghost cell.
fn shift_row(src: &[u64], dst: &mut [u64], dc: i8, bc: BoundaryCondition, width: usize) {
    let last = src.len() - 1;
    match dc {
        0 => dst.copy_from_slice(src),
        1 => {
            // out(c) = src(c + 1): bits move toward the LSB
            for k in 0..=last {
                let carry = if k < last { src[k + 1] << (WORD_BITS - 1) } else { 0 };
                dst[k] = (src[k] >> 1) | carry;
            }
            if let Some(ghost) = resolve_index(width as isize, width, bc) {
                if src[ghost / WORD_BITS] >> (ghost % WORD_BITS) & 1 == 1 {
                    dst[(width - 1) / WORD_BITS] |= 1u64 << ((width - 1) % WORD_BITS);
                }
            }
        }
        -1 => {
            // out(c) = src(c - 1): bits move away from the LSB
            for k in (0..=last).rev() {
                let carry = if k > 0 { src[k - 1] >> (WORD_BITS - 1) } else { 0 };
                dst[k] = (src[k] << 1) | carry;
            }
            if let Some(ghost) = resolve_index(-1, width, bc) {
                if src[ghost / WORD_BITS] >> (ghost % WORD_BITS) & 1 == 1 {
                    dst[0] |= 1;
                }
            }
            let used = width % WORD_BITS;
            if used != 0 {
                dst[last] &= (1u64 << used) - 1;
            }
        }
        _ => unreachable!("offsets are radius 1"),
    }
}
