//! Circular convolution through the discrete Fourier transform.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::{max_abs, Real};

// Imaginary leftovers of a real-by-real product must stay at rounding level.
fn residue_bound<T: Real>(len: usize, scale: T) -> T {
    T::lit(1e-10).max(T::slack(len) * T::lit(100.0)) * (T::one() + scale)
}

/// Length-`n` circular convolver with cached forward and inverse plans.
#[derive(Clone)]
pub struct CircularConvolver<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for CircularConvolver<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircularConvolver").field("n", &self.n).finish()
    }
}

impl<T: Real> CircularConvolver<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward transform of a real sequence.
    pub fn spectrum(&self, x: &[T]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n, "convolver length mismatch");
        let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Circular convolution given both operands already transformed.
    pub fn convolve_spectra(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Vec<T> {
        let mut buf: Vec<Complex<T>> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.inverse.process(&mut buf);
        let norm = T::one() / T::lit(self.n as f64);
        let out: Vec<T> = buf.iter().map(|c| c.re * norm).collect();
        debug_assert!(
            buf.iter().map(|c| (c.im * norm).abs()).fold(T::zero(), T::max)
                <= residue_bound(self.n, max_abs(&out)),
            "imaginary residue above rounding level"
        );
        out
    }

    /// `out[j] = sum_m x[m] * kernel[(j - m) mod n]`.
    pub fn convolve(&self, x: &[T], kernel: &[T]) -> Vec<T> {
        self.convolve_spectra(&self.spectrum(x), &self.spectrum(kernel))
    }
}

/// `h x w` circular convolver for row-major images.
#[derive(Clone)]
pub struct CircularConvolver2D<T: Real> {
    height: usize,
    width: usize,
    rows: (Arc<dyn Fft<T>>, Arc<dyn Fft<T>>),
    cols: (Arc<dyn Fft<T>>, Arc<dyn Fft<T>>),
}

impl<T: Real> fmt::Debug for CircularConvolver2D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircularConvolver2D")
            .field("height", &self.height)
            .field("width", &self.width)
            .finish()
    }
}

fn transpose<T: Copy>(src: &[T], h: usize, w: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(src.len());
    for c in 0..w {
        for r in 0..h {
            out.push(src[r * w + c]);
        }
    }
    out
}

impl<T: Real> CircularConvolver2D<T> {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            height,
            width,
            rows: (planner.plan_fft_forward(width), planner.plan_fft_inverse(width)),
            cols: (planner.plan_fft_forward(height), planner.plan_fft_inverse(height)),
        }
    }

    fn transform(&self, mut buf: Vec<Complex<T>>, inverse: bool) -> Vec<Complex<T>> {
        let (row_fft, col_fft) = if inverse {
            (&self.rows.1, &self.cols.1)
        } else {
            (&self.rows.0, &self.cols.0)
        };
        // rustfft processes a buffer holding several consecutive rows in one call
        row_fft.process(&mut buf);
        let mut t = transpose(&buf, self.height, self.width);
        col_fft.process(&mut t);
        transpose(&t, self.width, self.height)
    }

    pub fn spectrum(&self, x: &[T]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.height * self.width, "convolver size mismatch");
        self.transform(x.iter().map(|&v| Complex::new(v, T::zero())).collect(), false)
    }

    pub fn convolve_spectra(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Vec<T> {
        let prod: Vec<Complex<T>> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let buf = self.transform(prod, true);
        let len = self.height * self.width;
        let norm = T::one() / T::lit(len as f64);
        let out: Vec<T> = buf.iter().map(|c| c.re * norm).collect();
        debug_assert!(
            buf.iter().map(|c| (c.im * norm).abs()).fold(T::zero(), T::max)
                <= residue_bound(len, max_abs(&out)),
            "imaginary residue above rounding level"
        );
        out
    }

    pub fn convolve(&self, x: &[T], kernel: &[T]) -> Vec<T> {
        self.convolve_spectra(&self.spectrum(x), &self.spectrum(kernel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct(x: &[f64], k: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|j| (0..n).map(|m| x[m] * k[(j + n - m) % n]).sum())
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2usize, 8, 12, 64] {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let k: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let c = CircularConvolver::new(n);
            assert!(max_abs_diff(&c.convolve(&x, &k), &direct(&x, &k)) < 1e-13);
        }
    }

    #[test]
    fn impulse_is_identity() {
        let c = CircularConvolver::<f64>::new(8);
        let k = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let mut d = vec![0.0; 8];
        d[0] = 1.0;
        assert!(max_abs_diff(&c.convolve(&d, &k), &k) < 1e-14);
    }

    #[test]
    fn two_d_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (h, w) = (4usize, 6usize);
        let x: Vec<f64> = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let k: Vec<f64> = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut expected = vec![0.0; h * w];
        for r in 0..h {
            for c in 0..w {
                for a in 0..h {
                    for b in 0..w {
                        expected[r * w + c] += x[a * w + b] * k[((r + h - a) % h) * w + (c + w - b) % w];
                    }
                }
            }
        }
        let conv = CircularConvolver2D::new(h, w);
        assert!(max_abs_diff(&conv.convolve(&x, &k), &expected) < 1e-13);
    }
}
