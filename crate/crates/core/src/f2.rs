//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words; addition is XOR. [`RowSpace`]
//! keeps an incrementally maintained row-echelon basis of a subspace and
//! answers rank and membership queries. Every span and rank computation in
//! the crate bottoms out here.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Hard cap on vector width. Far beyond the Betti numbers of any catalog
/// space; keeps word allocation small and predictable.
pub const MAX_WIDTH: usize = 4096;

const WORD_BITS: usize = 64;

/// Errors from kernel operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("width {width} exceeds capacity {max}")]
    Capacity { width: usize, max: usize },
    #[error("coordinate {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
}

/// A vector over F2 with a fixed number of coordinates.
///
/// Coordinates at or beyond `width` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    width: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// The zero vector of the given width.
    pub fn zeros(width: usize) -> Result<Self, F2Error> {
        if width > MAX_WIDTH {
            return Err(F2Error::Capacity {
                width,
                max: MAX_WIDTH,
            });
        }
        Ok(Self {
            width,
            words: vec![0; width.div_ceil(WORD_BITS)],
        })
    }

    /// The standard basis vector with a single one at `index`.
    pub fn unit(width: usize, index: usize) -> Result<Self, F2Error> {
        let mut v = Self::zeros(width)?;
        v.set(index, true)?;
        Ok(v)
    }

    /// Builds a vector from the listed one-coordinates.
    pub fn from_ones<I: IntoIterator<Item = usize>>(width: usize, ones: I) -> Result<Self, F2Error> {
        let mut v = Self::zeros(width)?;
        for i in ones {
            v.set(i, true)?;
        }
        Ok(v)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.width, "coordinate {index} out of range");
        self.words[index / WORD_BITS] >> (index % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) -> Result<(), F2Error> {
        if index >= self.width {
            return Err(F2Error::IndexOutOfRange {
                index,
                width: self.width,
            });
        }
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
        Ok(())
    }

    /// In-place addition (XOR).
    pub fn xor_assign(&mut self, other: &Self) -> Result<(), F2Error> {
        if self.width != other.width {
            return Err(F2Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
        Ok(())
    }

    /// Index of the first (lowest) one-coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterates over one-coordinates in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(|&i| self.get(i))
    }

    /// Evaluates `self` as a linear functional on `other`: the parity of
    /// the coordinatewise AND.
    pub fn dot(&self, other: &Self) -> Result<bool, F2Error> {
        if self.width != other.width {
            return Err(F2Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let parity: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(parity % 2 == 1)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Parses a 0/1 string; the leftmost character is coordinate 0.
impl FromStr for BitVector {
    type Err = F2Error;

    fn from_str(s: &str) -> Result<Self, F2Error> {
        let mut v = BitVector::zeros(s.len())?;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true)?,
                _ => {
                    return Err(F2Error::IndexOutOfRange {
                        index: i,
                        width: s.len(),
                    })
                }
            }
        }
        Ok(v)
    }
}

/// A subspace of F2^width held as a row-echelon basis.
///
/// Rows are nonzero with strictly increasing pivot (first-one) columns, so
/// `rank` is the number of rows and membership reduces against each row at
/// most once.
#[derive(Clone, PartialEq, Eq)]
pub struct RowSpace {
    width: usize,
    rows: Vec<BitVector>,
}

impl RowSpace {
    /// The zero subspace of the given width.
    pub fn new(width: usize) -> Result<Self, F2Error> {
        if width > MAX_WIDTH {
            return Err(F2Error::Capacity {
                width,
                max: MAX_WIDTH,
            });
        }
        Ok(Self {
            width,
            rows: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True when the space is all of F2^width.
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    fn reduce(&self, v: &BitVector) -> Result<BitVector, F2Error> {
        if v.width() != self.width {
            return Err(F2Error::WidthMismatch {
                left: self.width,
                right: v.width(),
            });
        }
        let mut v = v.clone();
        for row in &self.rows {
            let pivot = row.first_one().expect("echelon rows are nonzero");
            if v.get(pivot) {
                v.xor_assign(row)?;
            }
        }
        Ok(v)
    }

    /// Adds `v` to the span. Returns true iff `v` was outside the old span.
    pub fn insert(&mut self, v: &BitVector) -> Result<bool, F2Error> {
        let reduced = self.reduce(v)?;
        match reduced.first_one() {
            None => Ok(false),
            Some(pivot) => {
                let at = self
                    .rows
                    .partition_point(|r| r.first_one().expect("nonzero") < pivot);
                self.rows.insert(at, reduced);
                Ok(true)
            }
        }
    }

    /// True iff `v` is an XOR-combination of the rows.
    pub fn contains(&self, v: &BitVector) -> Result<bool, F2Error> {
        Ok(self.reduce(v)?.is_zero())
    }
}

impl fmt::Debug for RowSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}
