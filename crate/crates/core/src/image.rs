//! Grayscale and binary rasters plus global thresholding.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major 8-bit intensity image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    /// Image filled with a single intensity.
    pub fn filled(rows: usize, cols: usize, value: u8) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows.saturating_mul(cols)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.data[row * self.cols + col] = value;
    }

    /// 256-bin intensity histogram.
    pub fn histogram(&self) -> [u64; 256] {
        let mut hist = [0u64; 256];
        for &v in &self.data {
            hist[v as usize] += 1;
        }
        hist
    }
}

/// Row-major foreground mask. Also carries skeletons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(rows: usize, cols: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    /// All-background image.
    pub fn empty(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![false; rows.saturating_mul(cols)])
    }

    /// Builds an image from text rows where `#`, `1` or `X` mark foreground.
    ///
    /// Handy for hand-authored fixtures; all rows must have equal length.
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.chars().count());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.chars().count() != cols {
                return Err(Error::Dimensions { rows: rows.len(), cols, len: data.len() });
            }
            data.extend(r.chars().map(|c| matches!(c, '#' | '1' | 'X')));
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.cols + col]
    }

    /// Out-of-bounds coordinates read as background.
    pub fn get_or_background(&self, row: isize, col: isize) -> bool {
        if row < 0 || col < 0 || row as usize >= self.rows || col as usize >= self.cols {
            return false;
        }
        self.data[row as usize * self.cols + col as usize]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row * self.cols + col] = value;
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

fn check_dims(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 || rows.checked_mul(cols) != Some(len) {
        return Err(Error::Dimensions { rows, cols, len });
    }
    Ok(())
}

/// Which side of the threshold is foreground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    /// Foreground is the class with fewer pixels (lines are sparse).
    #[default]
    Auto,
    /// Foreground is `intensity >= t`.
    Bright,
    /// Foreground is `intensity < t`.
    Dark,
}

/// Rec. 601 luma, rounded to the nearest integer.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

/// Otsu threshold over the 256-bin histogram.
///
/// Classes are `v < t` and `v >= t` for `t` in `1..=255`; the threshold
/// maximizing between-class variance wins, smallest `t` on ties. Returns
/// `None` when every threshold leaves one class empty (constant image).
pub fn otsu_threshold(img: &GrayImage) -> Option<u8> {
    let hist = img.histogram();
    let total_n: u64 = hist.iter().sum();
    let total_s: u64 = hist.iter().enumerate().map(|(v, &c)| v as u64 * c).sum();

    let mut n0 = 0u64;
    let mut s0 = 0u64;
    let mut best: Option<(u8, f64)> = None;
    for t in 1..=255usize {
        n0 += hist[t - 1];
        s0 += (t as u64 - 1) * hist[t - 1];
        let n1 = total_n - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s1 = total_s - s0;
        // N^2 * sigma_b^2 = (s0*n1 - s1*n0)^2 / (n0*n1)
        let diff = s0 as i128 * n1 as i128 - s1 as i128 * n0 as i128;
        let diff = diff as f64;
        let score = diff * diff / (n0 as f64 * n1 as f64);
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((t as u8, score));
        }
    }
    best.map(|(t, _)| t)
}

/// Pointwise threshold: `>= t` is foreground for [`Polarity::Bright`],
/// `< t` for [`Polarity::Dark`]. [`Polarity::Auto`] picks whichever side has
/// fewer pixels (the bright side on a tie).
pub fn binarize_fixed(img: &GrayImage, t: u8, polarity: Polarity) -> BinaryImage {
    let polarity = match polarity {
        Polarity::Auto => {
            let bright = img.data.iter().filter(|&&v| v >= t).count();
            if bright <= img.data.len() - bright {
                Polarity::Bright
            } else {
                Polarity::Dark
            }
        }
        p => p,
    };
    let data = img
        .data
        .iter()
        .map(|&v| match polarity {
            Polarity::Dark => v < t,
            _ => v >= t,
        })
        .collect();
    BinaryImage { rows: img.rows, cols: img.cols, data }
}

/// Otsu binarization.
///
/// A constant image under [`Polarity::Auto`] is an error; with an explicit
/// polarity it yields an all-background image.
pub fn binarize_otsu(img: &GrayImage, polarity: Polarity) -> Result<BinaryImage> {
    match otsu_threshold(img) {
        Some(t) => Ok(binarize_fixed(img, t, polarity)),
        None if polarity == Polarity::Auto => Err(Error::DegenerateHistogram),
        None => Ok(BinaryImage { rows: img.rows, cols: img.cols, data: vec![false; img.data.len()] }),
    }
}

/// Flips every pixel.
pub fn invert(img: &BinaryImage) -> BinaryImage {
    BinaryImage {
        rows: img.rows,
        cols: img.cols,
        data: img.data.iter().map(|&b| !b).collect(),
    }
}
