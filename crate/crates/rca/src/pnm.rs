//! PNM (netpbm) reading and writing.
//!
//! Reads all six classic formats: P1/P4 bitmaps become [`BinaryGrid`]s with
//! black (sample 1) mapped to cell 1, P2/P5 graymaps become [`GrayImage`]s,
//! and P3/P6 pixmaps are converted to grayscale with the integer luma
//! `(299*R + 587*G + 114*B) / 1000`. Only `maxval = 255` is accepted.
//!
//! Writes a canonical form of P1, P2, P4, and P5:
//!
//! - `P1\n{w} {h}\n` then one line per row of space-separated `0`/`1`
//! - `P2\n{w} {h}\n255\n` then one line per row of space-separated values
//! - `P4\n{w} {h}\n` then rows packed MSB-first, each padded to a whole byte
//! - `P5\n{w} {h}\n255\n` then raw bytes
//!
//! Parse errors report the byte offset where the problem was detected.

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;
use crate::imaging::GrayImage;

/// The six classic netpbm formats, named by magic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmFormat {
    /// Plain (ASCII) bitmap.
    P1,
    /// Plain (ASCII) graymap.
    P2,
    /// Plain (ASCII) pixmap.
    P3,
    /// Raw (binary) bitmap.
    P4,
    /// Raw (binary) graymap.
    P5,
    /// Raw (binary) pixmap.
    P6,
}

impl PnmFormat {
    fn from_magic(magic: &[u8]) -> Option<Self> {
        match magic {
            b"P1" => Some(PnmFormat::P1),
            b"P2" => Some(PnmFormat::P2),
            b"P3" => Some(PnmFormat::P3),
            b"P4" => Some(PnmFormat::P4),
            b"P5" => Some(PnmFormat::P5),
            b"P6" => Some(PnmFormat::P6),
            _ => None,
        }
    }
}

impl std::fmt::Display for PnmFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A decoded PNM payload: either a bitmap or an 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnmImage {
    Bitmap(BinaryGrid),
    Gray(GrayImage),
}

impl PnmImage {
    pub fn width(&self) -> usize {
        match self {
            PnmImage::Bitmap(g) => g.width(),
            PnmImage::Gray(img) => img.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            PnmImage::Bitmap(g) => g.height(),
            PnmImage::Gray(img) => img.height(),
        }
    }
}

const MAX_DIMENSION: u64 = u32::MAX as u64;

struct Scanner<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(data: &'a [u8]) -> Self {
        Scanner { data, pos: 0 }
    }

    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    fn next_byte(&mut self) -> Option<u8> {
        let b = self.data.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            match b {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self
                        .data
                        .get(self.pos)
                        .is_some_and(|&b| b != b'\n')
                    {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    /// Reads a decimal token after skipping separators; rejects values > `max`.
    fn read_uint(&mut self, what: &str, max: u64) -> Result<u64> {
        self.skip_separators();
        let start = self.pos;
        let mut value: u64 = 0;
        let mut digits = 0usize;
        while let Some(&b) = self.data.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value * 10 + (b - b'0') as u64;
            if value > max {
                return Err(Error::parse(start, format!("{what} exceeds {max}")));
            }
            digits += 1;
            self.pos += 1;
        }
        if digits == 0 {
            return Err(Error::parse(self.pos, format!("expected {what}")));
        }
        Ok(value)
    }

    /// Raw formats allow exactly one whitespace byte between the header and
    /// the pixel payload.
    fn expect_single_separator(&mut self) -> Result<()> {
        match self.data.get(self.pos) {
            Some(b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(
                self.pos,
                "expected a single whitespace byte before raw pixel data",
            )),
        }
    }

    fn take_bytes(&mut self, count: usize, what: &str) -> Result<&'a [u8]> {
        if self.remaining() < count {
            return Err(Error::parse(
                self.data.len(),
                format!(
                    "{what} truncated: need {count} bytes, found {}",
                    self.remaining()
                ),
            ));
        }
        let slice = &self.data[self.pos..self.pos + count];
        self.pos += count;
        Ok(slice)
    }

    /// Rejects inputs that cannot possibly hold `samples` more plain-format
    /// samples (each needs at least one byte, plus `separated` gaps), before
    /// any pixel buffer is allocated.
    fn check_plain_budget(&self, samples: usize, separated: bool) -> Result<()> {
        let needed = if separated {
            samples.saturating_mul(2).saturating_sub(1)
        } else {
            samples
        };
        if self.remaining() < needed {
            return Err(Error::parse(
                self.data.len(),
                format!(
                    "plain pixel data truncated: need at least {needed} bytes, found {}",
                    self.remaining()
                ),
            ));
        }
        Ok(())
    }
}

fn read_dimensions(sc: &mut Scanner) -> Result<(usize, usize)> {
    let width_at = {
        sc.skip_separators();
        sc.pos
    };
    let width = sc.read_uint("width", MAX_DIMENSION)?;
    let height = sc.read_uint("height", MAX_DIMENSION)?;
    if width == 0 || height == 0 {
        return Err(Error::parse(width_at, "image dimensions must be positive"));
    }
    Ok((width as usize, height as usize))
}

fn read_maxval(sc: &mut Scanner) -> Result<()> {
    sc.skip_separators();
    let at = sc.pos;
    let maxval = sc.read_uint("maxval", 0xFFFF)?;
    if maxval != 255 {
        return Err(Error::parse(
            at,
            format!("unsupported maxval {maxval}: only 255 is supported"),
        ));
    }
    Ok(())
}

fn pixel_count(width: usize, height: usize, sc: &Scanner) -> Result<usize> {
    width.checked_mul(height).ok_or_else(|| {
        Error::parse(sc.pos, "image dimensions overflow the address space")
    })
}

/// Decodes a PNM image from raw bytes.
pub fn read_pnm(data: &[u8]) -> Result<PnmImage> {
    let mut sc = Scanner::new(data);
    let magic = sc.take_bytes(2, "magic number").map_err(|_| {
        Error::parse(0, "missing PNM magic number")
    })?;
    let format = PnmFormat::from_magic(magic)
        .ok_or_else(|| Error::parse(0, "unrecognized PNM magic number"))?;
    let (width, height) = read_dimensions(&mut sc)?;
    match format {
        PnmFormat::P1 => read_plain_bitmap(&mut sc, width, height).map(PnmImage::Bitmap),
        PnmFormat::P2 => {
            read_maxval(&mut sc)?;
            read_plain_samples(&mut sc, width, height, 1).map(PnmImage::Gray)
        }
        PnmFormat::P3 => {
            read_maxval(&mut sc)?;
            read_plain_samples(&mut sc, width, height, 3).map(PnmImage::Gray)
        }
        PnmFormat::P4 => read_raw_bitmap(&mut sc, width, height).map(PnmImage::Bitmap),
        PnmFormat::P5 => {
            read_maxval(&mut sc)?;
            read_raw_samples(&mut sc, width, height, 1).map(PnmImage::Gray)
        }
        PnmFormat::P6 => {
            read_maxval(&mut sc)?;
            read_raw_samples(&mut sc, width, height, 3).map(PnmImage::Gray)
        }
    }
}

fn read_plain_bitmap(sc: &mut Scanner, width: usize, height: usize) -> Result<BinaryGrid> {
    let cells = pixel_count(width, height, sc)?;
    sc.check_plain_budget(cells, false)?;
    let mut grid = BinaryGrid::new(width, height, false).expect("dimensions are positive");
    for row in 0..height {
        for col in 0..width {
            sc.skip_separators();
            let at = sc.pos;
            match sc.next_byte() {
                Some(b'0') => {}
                Some(b'1') => grid.set(row, col, true),
                Some(_) => {
                    return Err(Error::parse(at, "bitmap sample must be 0 or 1"));
                }
                None => {
                    return Err(Error::parse(at, "unexpected end of bitmap data"));
                }
            }
        }
    }
    Ok(grid)
}

fn read_plain_samples(
    sc: &mut Scanner,
    width: usize,
    height: usize,
    channels: usize,
) -> Result<GrayImage> {
    let cells = pixel_count(width, height, sc)?;
    let samples = cells.checked_mul(channels).ok_or_else(|| {
        Error::parse(sc.pos, "image dimensions overflow the address space")
    })?;
    sc.check_plain_budget(samples, true)?;
    let mut pixels = Vec::with_capacity(cells);
    for _ in 0..cells {
        if channels == 1 {
            pixels.push(sc.read_uint("gray sample", 255)? as u8);
        } else {
            let r = sc.read_uint("red sample", 255)?;
            let g = sc.read_uint("green sample", 255)?;
            let b = sc.read_uint("blue sample", 255)?;
            pixels.push(luma(r as u8, g as u8, b as u8));
        }
    }
    GrayImage::from_pixels(width, height, pixels)
}

fn read_raw_bitmap(sc: &mut Scanner, width: usize, height: usize) -> Result<BinaryGrid> {
    sc.expect_single_separator()?;
    let row_bytes = width.div_ceil(8);
    let payload = row_bytes.checked_mul(height).ok_or_else(|| {
        Error::parse(sc.pos, "image dimensions overflow the address space")
    })?;
    let bytes = sc.take_bytes(payload, "raw bitmap data")?;
    let mut grid = BinaryGrid::new(width, height, false).expect("dimensions are positive");
    for row in 0..height {
        let row_data = &bytes[row * row_bytes..(row + 1) * row_bytes];
        for col in 0..width {
            let bit = (row_data[col / 8] >> (7 - col % 8)) & 1;
            if bit == 1 {
                grid.set(row, col, true);
            }
        }
    }
    Ok(grid)
}

fn read_raw_samples(
    sc: &mut Scanner,
    width: usize,
    height: usize,
    channels: usize,
) -> Result<GrayImage> {
    sc.expect_single_separator()?;
    let cells = pixel_count(width, height, sc)?;
    let payload = cells.checked_mul(channels).ok_or_else(|| {
        Error::parse(sc.pos, "image dimensions overflow the address space")
    })?;
    let bytes = sc.take_bytes(payload, "raw pixel data")?;
    let pixels = if channels == 1 {
        bytes.to_vec()
    } else {
        bytes
            .chunks_exact(3)
            .map(|rgb| luma(rgb[0], rgb[1], rgb[2]))
            .collect()
    };
    GrayImage::from_pixels(width, height, pixels)
}

fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32) / 1000) as u8
}

/// Encodes an image in the canonical form of the requested format.
///
/// Bitmaps can be written as P1 or P4 and grayscale images as P2 or P5;
/// any other pairing is rejected, as is color output (P3/P6).
pub fn write_pnm(image: &PnmImage, format: PnmFormat) -> Result<Vec<u8>> {
    match (image, format) {
        (PnmImage::Bitmap(grid), PnmFormat::P1) => Ok(write_plain_bitmap(grid)),
        (PnmImage::Bitmap(grid), PnmFormat::P4) => Ok(write_raw_bitmap(grid)),
        (PnmImage::Gray(img), PnmFormat::P2) => Ok(write_plain_gray(img)),
        (PnmImage::Gray(img), PnmFormat::P5) => Ok(write_raw_gray(img)),
        (_, PnmFormat::P3 | PnmFormat::P6) => Err(Error::usage(
            "color output is not supported; write P1/P4 bitmaps or P2/P5 graymaps",
        )),
        (PnmImage::Bitmap(_), _) => Err(Error::usage(format!(
            "bitmaps are written as P1 or P4, not {format}"
        ))),
        (PnmImage::Gray(_), _) => Err(Error::usage(format!(
            "grayscale images are written as P2 or P5, not {format}"
        ))),
    }
}

fn write_plain_bitmap(grid: &BinaryGrid) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", grid.width(), grid.height()).into_bytes();
    for row in grid.to_rows() {
        let line: Vec<&str> = row.iter().map(|&c| if c == 1 { "1" } else { "0" }).collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}

fn write_raw_bitmap(grid: &BinaryGrid) -> Vec<u8> {
    let row_bytes = grid.width().div_ceil(8);
    let mut out = format!("P4\n{} {}\n", grid.width(), grid.height()).into_bytes();
    for row in 0..grid.height() {
        let mut packed = vec![0u8; row_bytes];
        for col in 0..grid.width() {
            if grid.get(row, col) {
                packed[col / 8] |= 1 << (7 - col % 8);
            }
        }
        out.extend_from_slice(&packed);
    }
    out
}

fn write_plain_gray(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    for row in 0..img.height() {
        let line: Vec<String> = (0..img.width())
            .map(|col| img.get(row, col).to_string())
            .collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}

fn write_raw_gray(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}
