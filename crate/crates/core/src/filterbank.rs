//! The averaged transform as a bank of circular FIR filters.
//!
//! A linear, shift-invariant operator is its impulse response, so each scale
//! is fully described by one length-`n` kernel (origin at index 0, indices
//! taken modulo `n`). Kernels are derived once per `(wavelet, size)` and then
//! applied by frequency-domain circular convolution.

use std::sync::OnceLock;

use rustfft::num_complex::Complex;

use crate::conv::{CircularConvolver, CircularConvolver2D};
use crate::dwt::WaveletCoeffs;
use crate::error::{AwtError, Result};
use crate::reference::{awt2d_full_naive_levels, awt_full_naive_levels, ScaleSpectra, ScaleSpectra2D};
use crate::scalar::{max_abs, Real};
use crate::signal::{Image, Signal};
use crate::wavelet::{max_levels, WaveletKind, WaveletSpec};

type Spectra1D<T> = (CircularConvolver<T>, Vec<Vec<Complex<T>>>);
type Spectra2D<T> = (CircularConvolver2D<T>, Vec<Vec<Complex<T>>>);

/// Per-scale circular impulse responses for one wavelet and signal length.
#[derive(Debug, Clone)]
pub struct AwtFilterBank<T: Real> {
    n: usize,
    wavelet: WaveletKind,
    dc_filter: Vec<T>,
    filters: Vec<Vec<T>>,
    spectra: OnceLock<Spectra1D<T>>,
}

impl<T: Real> AwtFilterBank<T> {
    /// Assembles a bank from stored kernels, checking only shapes.
    pub fn from_parts(wavelet: WaveletKind, n: usize, dc_filter: Vec<T>, filters: Vec<Vec<T>>) -> Result<Self> {
        let max = max_levels(n)?;
        if filters.is_empty() || filters.len() > max {
            return Err(AwtError::InvalidSpectra(format!(
                "length {n} takes 1..={max} scale filters, got {}",
                filters.len()
            )));
        }
        if dc_filter.len() != n || filters.iter().any(|f| f.len() != n) {
            return Err(AwtError::InvalidSpectra(format!("every kernel must have length {n}")));
        }
        Ok(Self {
            n,
            wavelet,
            dc_filter,
            filters,
            spectra: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.filters.len()
    }

    pub fn wavelet(&self) -> WaveletKind {
        self.wavelet
    }

    pub fn dc_filter(&self) -> &[T] {
        &self.dc_filter
    }

    /// Detail kernels for scales 1..=k.
    pub fn filters(&self) -> &[Vec<T>] {
        &self.filters
    }

    /// Kernel of scale `s`, 0 being DC.
    pub fn kernel(&self, s: usize) -> Result<&[T]> {
        match s {
            0 => Ok(&self.dc_filter),
            _ => self
                .filters
                .get(s - 1)
                .map(Vec::as_slice)
                .ok_or(AwtError::InvalidScale { scale: s, max: self.k() }),
        }
    }

    /// DC kernel first, then scales 1..=k.
    pub fn kernels(&self) -> impl Iterator<Item = &[T]> {
        std::iter::once(self.dc_filter.as_slice()).chain(self.filters.iter().map(Vec::as_slice))
    }

    /// Number of taps spanned by the significant part of kernel `s`.
    pub fn effective_support(&self, s: usize) -> Result<usize> {
        Ok(effective_support(self.kernel(s)?))
    }

    fn spectra(&self) -> &Spectra1D<T> {
        self.spectra.get_or_init(|| {
            let conv = CircularConvolver::new(self.n);
            let specs = self.kernels().map(|k| conv.spectrum(k)).collect();
            (conv, specs)
        })
    }
}

/// Circular extent `2r + 1` (capped at `n`) where `r` is the largest circular
/// distance from the origin of a tap above working precision.
pub fn effective_support<T: Real>(kernel: &[T]) -> usize {
    let n = kernel.len();
    let threshold = max_abs(kernel) * T::epsilon() * T::lit(1e4);
    let radius = kernel
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > threshold)
        .map(|(j, _)| j.min(n - j))
        .max()
        .unwrap_or(0);
    (2 * radius + 1).min(n)
}

/// Derives the full-depth bank as the averaged transform of the unit impulse.
pub fn derive_filter_bank<T: Real>(wavelet: &WaveletSpec<T>, n: usize) -> Result<AwtFilterBank<T>> {
    derive_filter_bank_levels(wavelet, n, max_levels(n)?)
}

/// [`derive_filter_bank`] with an explicit number of scales.
pub fn derive_filter_bank_levels<T: Real>(
    wavelet: &WaveletSpec<T>,
    n: usize,
    levels: usize,
) -> Result<AwtFilterBank<T>> {
    let spectra = awt_full_naive_levels(&Signal::impulse(n)?, wavelet, levels)?;
    let filters = spectra.spectra().iter().map(|s| s.as_slice().to_vec()).collect();
    AwtFilterBank::from_parts(wavelet.kind(), n, spectra.dc().as_slice().to_vec(), filters)
}

// Circular autocorrelation `r[j] = sum_i v[(i + j) mod n] v[i]`, by FFT.
fn circular_autocorrelation<T: Real>(conv: &CircularConvolver<T>, v: &[T]) -> Vec<T> {
    let spec = conv.spectrum(v);
    let power: Vec<Complex<T>> = spec.iter().map(|c| Complex::new(c.norm_sqr(), T::zero())).collect();
    let one = {
        let mut d = vec![T::zero(); v.len()];
        d[0] = T::one();
        conv.spectrum(&d)
    };
    conv.convolve_spectra(&power, &one)
}

/// Derives the same bank in O(n log n) per scale.
///
/// The averaged projection onto a subspace spanned by `n / 2^s` translates of
/// one periodized basis vector `b` has kernel `2^-s * autocorr(b)`, so only a
/// single synthesis per scale is needed. Used for long signals where the
/// impulse route is quadratic.
pub fn derive_filter_bank_fast<T: Real>(wavelet: &WaveletSpec<T>, n: usize) -> Result<AwtFilterBank<T>> {
    derive_filter_bank_fast_levels(wavelet, n, max_levels(n)?)
}

/// [`derive_filter_bank_fast`] with an explicit number of scales.
pub fn derive_filter_bank_fast_levels<T: Real>(
    wavelet: &WaveletSpec<T>,
    n: usize,
    k: usize,
) -> Result<AwtFilterBank<T>> {
    crate::reference::check_levels(max_levels(n)?, k)?;
    let conv = CircularConvolver::new(n);
    let unit = |level: usize, in_detail: bool| -> Result<Vec<T>> {
        let mut coeffs = WaveletCoeffs {
            n,
            details: (1..=k).map(|j| vec![T::zero(); n >> j]).collect(),
            approx: vec![T::zero(); n >> k],
        };
        if in_detail {
            coeffs.details[level - 1][0] = T::one();
        } else {
            coeffs.approx[0] = T::one();
        }
        Ok(crate::dwt::idwt_periodic(&coeffs, wavelet)?.into_vec())
    };
    let scaled = |v: Vec<T>, level: usize| {
        let f = T::one() / T::lit((1u64 << level) as f64);
        circular_autocorrelation(&conv, &v).into_iter().map(|x| x * f).collect::<Vec<T>>()
    };
    let dc = scaled(unit(k, false)?, k);
    let filters = (1..=k)
        .map(|s| Ok(scaled(unit(s, true)?, s)))
        .collect::<Result<Vec<_>>>()?;
    AwtFilterBank::from_parts(wavelet.kind(), n, dc, filters)
}

/// Piecewise-linear scale-1 Haar profile: 0.5 at 0, -0.25 at +-1, 0 beyond +-2.
fn haar_hat<T: Real>(x: T) -> T {
    let a = x.abs();
    let (half, quarter) = (T::lit(0.5), T::lit(0.25));
    if a <= T::one() {
        half - (half + quarter) * a
    } else if a <= T::lit(2.0) {
        -quarter * (T::lit(2.0) - a)
    } else {
        T::zero()
    }
}

/// Closed-form Haar kernel of scale `s` for a power-of-two length:
/// `y_s(x) = 2^-(s-1) * y_1(2^-(s-1) * x)`, wrapped circularly.
pub fn haar_closed_form_filter<T: Real>(n: usize, s: usize) -> Result<Vec<T>> {
    if n < 2 || !n.is_power_of_two() {
        return Err(AwtError::InvalidLength {
            n,
            reason: "the closed-form Haar kernels need a power-of-two length",
        });
    }
    let k = n.trailing_zeros() as usize;
    if s == 0 || s > k {
        return Err(AwtError::InvalidScale { scale: s, max: k });
    }
    let dilation = T::lit((1u64 << (s - 1)) as f64);
    let reach = (1isize << s) - 1;
    let mut kernel = vec![T::zero(); n];
    for j in -reach..=reach {
        let idx = j.rem_euclid(n as isize) as usize;
        kernel[idx] = kernel[idx] + haar_hat(T::lit(j as f64) / dilation) / dilation;
    }
    Ok(kernel)
}

/// Fast averaged transform: every scale by circular convolution with its kernel.
pub fn awt_fft<T: Real>(x: &Signal<T>, bank: &AwtFilterBank<T>) -> Result<ScaleSpectra<T>> {
    if x.len() != bank.n() {
        return Err(AwtError::BankMismatch {
            bank: bank.n().to_string(),
            input: x.len().to_string(),
        });
    }
    let (conv, kernels) = bank.spectra();
    let xs = conv.spectrum(x.as_slice());
    let mut out = kernels
        .iter()
        .map(|k| Signal::from_vec_unchecked(conv.convolve_spectra(&xs, k)));
    let dc = out.next().expect("DC kernel");
    ScaleSpectra::new(bank.wavelet(), dc, out.collect())
}

/// 2-D kernels for one wavelet and image size.
#[derive(Debug, Clone)]
pub struct FilterBank2D<T: Real> {
    height: usize,
    width: usize,
    wavelet: WaveletKind,
    dc_kernel: Vec<T>,
    kernels: Vec<Vec<T>>,
    spectra: OnceLock<Spectra2D<T>>,
}

impl<T: Real> FilterBank2D<T> {
    pub fn from_parts(
        wavelet: WaveletKind,
        height: usize,
        width: usize,
        dc_kernel: Vec<T>,
        kernels: Vec<Vec<T>>,
    ) -> Result<Self> {
        let max = crate::dwt::max_levels_2d(height, width)?;
        if kernels.is_empty() || kernels.len() > max {
            return Err(AwtError::InvalidSpectra(format!(
                "{height}x{width} takes 1..={max} scale kernels, got {}",
                kernels.len()
            )));
        }
        let len = height * width;
        if dc_kernel.len() != len || kernels.iter().any(|v| v.len() != len) {
            return Err(AwtError::InvalidSpectra(format!(
                "every kernel must hold {height}x{width} values"
            )));
        }
        Ok(Self {
            height,
            width,
            wavelet,
            dc_kernel,
            kernels,
            spectra: OnceLock::new(),
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn k(&self) -> usize {
        self.kernels.len()
    }

    pub fn wavelet(&self) -> WaveletKind {
        self.wavelet
    }

    pub fn dc_kernel(&self) -> &[T] {
        &self.dc_kernel
    }

    pub fn kernels(&self) -> &[Vec<T>] {
        &self.kernels
    }

    pub fn kernel(&self, s: usize) -> Result<&[T]> {
        match s {
            0 => Ok(&self.dc_kernel),
            _ => self
                .kernels
                .get(s - 1)
                .map(Vec::as_slice)
                .ok_or(AwtError::InvalidScale { scale: s, max: self.k() }),
        }
    }

    pub fn all_kernels(&self) -> impl Iterator<Item = &[T]> {
        std::iter::once(self.dc_kernel.as_slice()).chain(self.kernels.iter().map(Vec::as_slice))
    }

    fn spectra(&self) -> &Spectra2D<T> {
        self.spectra.get_or_init(|| {
            let conv = CircularConvolver2D::new(self.height, self.width);
            let specs = self.all_kernels().map(|k| conv.spectrum(k)).collect();
            (conv, specs)
        })
    }
}

// Averaged approximation kernels a_0 = delta, a_s = delta - sum_{t <= s} filters_t.
fn approximation_kernels<T: Real>(bank: &AwtFilterBank<T>, levels: usize) -> Vec<Vec<T>> {
    let mut current = vec![T::zero(); bank.n()];
    current[0] = T::one();
    let mut out = vec![current.clone()];
    for f in &bank.filters()[..levels] {
        for (c, v) in current.iter_mut().zip(f) {
            *c = *c - *v;
        }
        out.push(current.clone());
    }
    out
}

fn outer<T: Real>(col: &[T], row: &[T]) -> Vec<T> {
    col.iter().flat_map(|&a| row.iter().map(move |&b| a * b)).collect()
}

/// Derives the full-depth 2-D bank; see [`derive_filter_bank_2d_levels`].
pub fn derive_filter_bank_2d<T: Real>(
    wavelet: &WaveletSpec<T>,
    height: usize,
    width: usize,
) -> Result<FilterBank2D<T>> {
    derive_filter_bank_2d_levels(wavelet, height, width, crate::dwt::max_levels_2d(height, width)?)
}

/// Derives a 2-D bank with `k` scales from the two 1-D banks.
///
/// Averaging over 2-D shifts factors over the axes, and the joint detail
/// projection of level `s` is `A_{s-1} (x) A_{s-1} - A_s (x) A_s` in terms of
/// the 1-D approximation projections, so each kernel is a difference of two
/// outer products of averaged 1-D approximation kernels.
pub fn derive_filter_bank_2d_levels<T: Real>(
    wavelet: &WaveletSpec<T>,
    height: usize,
    width: usize,
    k: usize,
) -> Result<FilterBank2D<T>> {
    crate::reference::check_levels(crate::dwt::max_levels_2d(height, width)?, k)?;
    let bank_for = |n: usize| filter_bank_for_levels(wavelet, n, k);
    let col_bank = bank_for(height)?;
    let row_bank = if width == height { col_bank.clone() } else { bank_for(width)? };
    let cols = approximation_kernels(&col_bank, k);
    let rows = approximation_kernels(&row_bank, k);
    let kernels = (1..=k)
        .map(|s| {
            let finer = outer(&cols[s - 1], &rows[s - 1]);
            let coarser = outer(&cols[s], &rows[s]);
            finer.into_iter().zip(coarser).map(|(a, b)| a - b).collect()
        })
        .collect();
    FilterBank2D::from_parts(wavelet.kind(), height, width, outer(&cols[k], &rows[k]), kernels)
}

/// Derives the 2-D bank as the naive 2-D averaged transform of the impulse.
/// Quadratic in the pixel count; meant for small sizes and cross-checks.
pub fn derive_filter_bank_2d_naive<T: Real>(
    wavelet: &WaveletSpec<T>,
    height: usize,
    width: usize,
) -> Result<FilterBank2D<T>> {
    derive_filter_bank_2d_naive_levels(wavelet, height, width, crate::dwt::max_levels_2d(height, width)?)
}

pub fn derive_filter_bank_2d_naive_levels<T: Real>(
    wavelet: &WaveletSpec<T>,
    height: usize,
    width: usize,
    k: usize,
) -> Result<FilterBank2D<T>> {
    let sp = awt2d_full_naive_levels(&Image::impulse(height, width)?, wavelet, k)?;
    let kernels = sp.spectra().iter().map(|i| i.as_slice().to_vec()).collect();
    FilterBank2D::from_parts(wavelet.kind(), height, width, sp.dc().as_slice().to_vec(), kernels)
}

/// Above this length 1-D banks are derived by autocorrelation instead of the
/// quadratic impulse route.
pub const FAST_DERIVATION_THRESHOLD: usize = 512;

/// Picks the derivation route by length; both produce the same kernels.
pub fn filter_bank_for<T: Real>(wavelet: &WaveletSpec<T>, n: usize) -> Result<AwtFilterBank<T>> {
    filter_bank_for_levels(wavelet, n, max_levels(n)?)
}

pub fn filter_bank_for_levels<T: Real>(wavelet: &WaveletSpec<T>, n: usize, k: usize) -> Result<AwtFilterBank<T>> {
    if n > FAST_DERIVATION_THRESHOLD {
        derive_filter_bank_fast_levels(wavelet, n, k)
    } else {
        derive_filter_bank_levels(wavelet, n, k)
    }
}

/// Fast 2-D averaged transform by 2-D circular convolution.
pub fn awt2d_fft<T: Real>(img: &Image<T>, bank: &FilterBank2D<T>) -> Result<ScaleSpectra2D<T>> {
    if (img.height(), img.width()) != (bank.height(), bank.width()) {
        return Err(AwtError::BankMismatch {
            bank: format!("{}x{}", bank.height(), bank.width()),
            input: format!("{}x{}", img.height(), img.width()),
        });
    }
    let (h, w) = (img.height(), img.width());
    let (conv, kernels) = bank.spectra();
    let xs = conv.spectrum(img.as_slice());
    let mut out = kernels
        .iter()
        .map(|k| Image::from_vec_unchecked(h, w, conv.convolve_spectra(&xs, k)));
    let dc = out.next().expect("DC kernel");
    ScaleSpectra2D::new(bank.wavelet(), dc, out.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{awt_full_naive, circular_shift, inverse_awt};
    use crate::scalar::{dot, max_abs_diff};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SCALE1: [f64; 3] = [-0.25, 0.5, -0.25];
    const SCALE2: [f64; 7] = [-0.0625, -0.125, 0.0625, 0.25, 0.0625, -0.125, -0.0625];

    fn centered(kernel: &[f64], half: usize) -> Vec<f64> {
        let n = kernel.len() as isize;
        (-(half as isize)..=half as isize)
            .map(|j| kernel[j.rem_euclid(n) as usize])
            .collect()
    }

    fn random_signal(n: usize, rng: &mut ChaCha8Rng) -> Signal<f64> {
        Signal::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    fn check_invariants(bank: &AwtFilterBank<f64>) {
        let n = bank.n();
        let mut total = vec![0.0; n];
        for (s, f) in bank.kernels().enumerate() {
            for j in 0..n {
                assert!((f[(n - j) % n] - f[j]).abs() <= 1e-12, "symmetry s={s} j={j}");
                total[j] += f[j];
            }
            if s > 0 {
                assert!(f.iter().sum::<f64>().abs() <= 1e-10, "zero gain s={s}");
            }
            assert!(effective_support(f) <= n);
        }
        let mut delta = vec![0.0; n];
        delta[0] = 1.0;
        assert!(max_abs_diff(&total, &delta) <= 1e-10, "completeness");
    }

    #[test]
    fn haar_coefficients() {
        let w = WaveletKind::Haar.spec::<f64>();
        for n in [8usize, 16, 64] {
            let bank = derive_filter_bank(&w, n).unwrap();
            let c1 = centered(&bank.filters()[0], 2);
            assert_abs_diff_eq!(c1.as_slice(), [0.0, -0.25, 0.5, -0.25, 0.0].as_slice(), epsilon = 1e-12);
            assert_eq!(bank.effective_support(1).unwrap(), 3);
            if n >= 16 {
                let c2 = centered(&bank.filters()[1], 3);
                assert_abs_diff_eq!(c2.as_slice(), SCALE2.as_slice(), epsilon = 1e-12);
                assert_eq!(bank.effective_support(2).unwrap(), 7);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let s1 = haar_closed_form_filter::<f64>(32, 1).unwrap();
        assert_abs_diff_eq!(centered(&s1, 1).as_slice(), SCALE1.as_slice(), epsilon = 1e-15);
        let s2 = haar_closed_form_filter::<f64>(32, 2).unwrap();
        assert_abs_diff_eq!(centered(&s2, 3).as_slice(), SCALE2.as_slice(), epsilon = 1e-15);
        // y2(2x) * 2 = y1(x)
        for x in -2isize..=2 {
            let y2 = s2[(2 * x).rem_euclid(32) as usize];
            let y1 = s1[x.rem_euclid(32) as usize];
            assert_abs_diff_eq!(2.0 * y2, y1, epsilon = 1e-15);
        }
        let s3 = haar_closed_form_filter::<f64>(64, 3).unwrap();
        assert_eq!(effective_support(&s3), 15);
        let bank = derive_filter_bank(&WaveletKind::Haar.spec::<f64>(), 64).unwrap();
        assert!(max_abs_diff(&s3, &bank.filters()[2]) <= 1e-12);
    }

    #[test]
    fn closed_form_covers_every_scale_including_wrapped_ones() {
        for n in [2usize, 4, 8, 32, 128] {
            let bank = derive_filter_bank(&WaveletKind::Haar.spec::<f64>(), n).unwrap();
            for s in 1..=bank.k() {
                let closed = haar_closed_form_filter::<f64>(n, s).unwrap();
                assert!(max_abs_diff(&closed, &bank.filters()[s - 1]) <= 1e-12, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn closed_form_errors() {
        assert!(matches!(haar_closed_form_filter::<f64>(12, 1), Err(AwtError::InvalidLength { .. })));
        assert!(matches!(haar_closed_form_filter::<f64>(16, 5), Err(AwtError::InvalidScale { .. })));
        assert!(matches!(haar_closed_form_filter::<f64>(16, 0), Err(AwtError::InvalidScale { .. })));
    }

    #[test]
    fn invariants_hold_for_every_bank() {
        for kind in WaveletKind::ALL {
            for n in [2usize, 4, 8, 12, 24, 64, 128] {
                check_invariants(&derive_filter_bank(&kind.spec::<f64>(), n).unwrap());
            }
        }
    }

    #[test]
    fn fast_derivation_matches_impulse_route() {
        for kind in WaveletKind::ALL {
            for n in [2usize, 8, 12, 64, 256] {
                let w = kind.spec::<f64>();
                let a = derive_filter_bank(&w, n).unwrap();
                let b = derive_filter_bank_fast(&w, n).unwrap();
                for (x, y) in a.kernels().zip(b.kernels()) {
                    assert!(max_abs_diff(x, y) <= 1e-12, "{kind} n={n}");
                }
            }
        }
    }

    #[test]
    fn fft_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for kind in WaveletKind::ALL {
            let w = kind.spec();
            for n in [8usize, 32, 128] {
                let bank = derive_filter_bank(&w, n).unwrap();
                let x = random_signal(n, &mut rng);
                let fast = awt_fft(&x, &bank).unwrap();
                let slow = awt_full_naive(&x, &w).unwrap();
                for (a, b) in fast.iter().zip(slow.iter()) {
                    assert!(max_abs_diff(a.as_slice(), b.as_slice()) <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn impulse_returns_kernels() {
        let bank = derive_filter_bank(&WaveletKind::Daub4.spec::<f64>(), 16).unwrap();
        let sp = awt_fft(&Signal::impulse(16).unwrap(), &bank).unwrap();
        for (a, b) in sp.iter().zip(bank.kernels()) {
            assert!(max_abs_diff(a.as_slice(), b) <= 1e-14);
        }
    }

    #[test]
    fn fft_shift_and_size_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bank = derive_filter_bank(&WaveletKind::Daub8.spec::<f64>(), 128).unwrap();
        let y = random_signal(128, &mut rng);
        let a = awt_fft(&y, &bank).unwrap();
        let b = awt_fft(&circular_shift(&y, 20), &bank).unwrap();
        for (u, v) in a.iter().zip(b.iter()) {
            assert!(max_abs_diff(circular_shift(u, 20).as_slice(), v.as_slice()) <= 1e-10);
        }
        assert!(max_abs_diff(inverse_awt(&a).as_slice(), y.as_slice()) <= 1e-10);
        let short = random_signal(64, &mut rng);
        assert!(matches!(awt_fft(&short, &bank), Err(AwtError::BankMismatch { .. })));
    }

    #[test]
    fn haar_filters_overlap_their_translates() {
        let bank = derive_filter_bank(&WaveletKind::Haar.spec::<f64>(), 32).unwrap();
        let f = &bank.filters()[0];
        let shifted = crate::reference::shift_vec(f, 1);
        assert!(dot(f, &shifted).abs() > 1e-6);
    }

    #[test]
    fn two_d_separable_matches_naive() {
        for kind in WaveletKind::ALL {
            for (h, w) in [(4usize, 4usize), (8, 8), (4, 8), (8, 16)] {
                let wl = kind.spec::<f64>();
                let fast = derive_filter_bank_2d(&wl, h, w).unwrap();
                let slow = derive_filter_bank_2d_naive(&wl, h, w).unwrap();
                assert_eq!(fast.k(), slow.k());
                for (a, b) in fast.all_kernels().zip(slow.all_kernels()) {
                    assert!(max_abs_diff(a, b) <= 1e-12, "{kind} {h}x{w}");
                }
            }
        }
    }

    #[test]
    fn reduced_depth_banks_agree() {
        for kind in WaveletKind::ALL {
            let wl = kind.spec::<f64>();
            for levels in 1..=3 {
                let slow = derive_filter_bank_levels(&wl, 16, levels).unwrap();
                let fast = derive_filter_bank_fast_levels(&wl, 16, levels).unwrap();
                assert_eq!(slow.k(), levels);
                for (a, b) in slow.kernels().zip(fast.kernels()) {
                    assert!(max_abs_diff(a, b) <= 1e-12);
                }
                let s2 = derive_filter_bank_2d_levels(&wl, 8, 16, levels).unwrap();
                let n2 = derive_filter_bank_2d_naive_levels(&wl, 8, 16, levels).unwrap();
                for (a, b) in s2.all_kernels().zip(n2.all_kernels()) {
                    assert!(max_abs_diff(a, b) <= 1e-12);
                }
            }
            assert!(derive_filter_bank_2d_levels(&wl, 8, 16, 4).is_err());
        }
    }

    #[test]
    fn two_d_invariants() {
        let bank = derive_filter_bank_2d(&WaveletKind::Haar.spec::<f64>(), 16, 16).unwrap();
        let (h, w) = (16, 16);
        let mut total = vec![0.0; h * w];
        for k in bank.all_kernels() {
            for a in 0..h {
                for b in 0..w {
                    let mirrored = k[((h - a) % h) * w + (w - b) % w];
                    assert!((mirrored - k[a * w + b]).abs() <= 1e-12);
                    total[a * w + b] += k[a * w + b];
                }
            }
        }
        total[0] -= 1.0;
        assert!(max_abs(&total) <= 1e-10);
    }

    #[test]
    fn two_d_mismatch() {
        let bank = derive_filter_bank_2d(&WaveletKind::Haar.spec::<f64>(), 8, 8).unwrap();
        let img = Image::zeros(8, 16).unwrap();
        assert!(matches!(awt2d_fft(&img, &bank), Err(AwtError::BankMismatch { .. })));
    }

    #[test]
    fn f32_bank_is_close_to_f64() {
        let b64 = derive_filter_bank(&WaveletKind::Daub4.spec::<f64>(), 32).unwrap();
        let b32 = derive_filter_bank(&WaveletKind::Daub4.spec::<f32>(), 32).unwrap();
        for (a, b) in b64.kernels().zip(b32.kernels()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - *y as f64).abs() < 1e-5);
            }
        }
    }
}
