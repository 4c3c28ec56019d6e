//! Sample carriers for 1-D signals and 2-D images.

use std::ops::Index;

use crate::error::{AwtError, Result};
use crate::scalar::Real;

/// A finite, real-valued 1-D signal of at least two samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    samples: Vec<T>,
}

impl<T: Real> Signal<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(AwtError::InvalidLength {
                n: samples.len(),
                reason: "a signal needs at least two samples",
            });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(AwtError::NonFinite { index });
        }
        Ok(Self { samples })
    }

    /// Builds a signal from `f64` values, converting to `T`.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| T::lit(v)).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![T::zero(); n])
    }

    /// Unit impulse at index 0.
    pub fn impulse(n: usize) -> Result<Self> {
        let mut s = vec![T::zero(); n.max(1)];
        s[0] = T::one();
        Self::new(s)
    }

    pub(crate) fn from_vec_unchecked(samples: Vec<T>) -> Self {
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<T> {
        self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.samples.iter()
    }

    /// `a * self + b * other`, elementwise.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if other.len() != self.len() {
            return Err(AwtError::InvalidLength {
                n: other.len(),
                reason: "signals to combine differ in length",
            });
        }
        Self::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        )
    }
}

impl<T> Index<usize> for Signal<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.samples[i]
    }
}

/// A finite, real-valued image stored row-major, at least 2x2.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Real> Image<T> {
    pub fn new(height: usize, width: usize, data: Vec<T>) -> Result<Self> {
        if height < 2 || width < 2 {
            return Err(AwtError::InvalidLength {
                n: height.min(width),
                reason: "an image needs at least two rows and two columns",
            });
        }
        if data.len() != height * width {
            return Err(AwtError::InvalidLength {
                n: data.len(),
                reason: "pixel count does not match height * width",
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(AwtError::NonFinite { index });
        }
        Ok(Self { height, width, data })
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::new(height, width, vec![T::zero(); height * width])
    }

    /// Unit impulse at pixel (0, 0).
    pub fn impulse(height: usize, width: usize) -> Result<Self> {
        let mut img = Self::zeros(height, width)?;
        img.data[0] = T::one();
        Ok(img)
    }

    pub(crate) fn from_vec_unchecked(height: usize, width: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), height * width);
        Self { height, width, data }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Circular shift by `rows` down and `cols` right (negative values shift back).
    pub fn circular_shift(&self, rows: isize, cols: isize) -> Self {
        let (h, w) = (self.height, self.width);
        let dr = rows.rem_euclid(h as isize) as usize;
        let dc = cols.rem_euclid(w as isize) as usize;
        let mut out = vec![T::zero(); h * w];
        for r in 0..h {
            let tr = (r + dr) % h;
            for c in 0..w {
                out[tr * w + (c + dc) % w] = self.data[r * w + c];
            }
        }
        Self::from_vec_unchecked(h, w, out)
    }
}
