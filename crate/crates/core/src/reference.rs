//! Averaged wavelet transform by explicit averaging over every circular shift.
//!
//! This is the slow ground truth: for each shift the input is rotated,
//! decomposed, projected onto each scale, rotated back and accumulated. Cost
//! is O(n^2 log n) in 1-D and O((hw)^2 k) in 2-D.

use crate::dwt::{dwt2d_periodic, dwt_periodic, max_levels_2d, projections, projections_2d};
use crate::error::{AwtError, Result};
use crate::scalar::Real;
use crate::signal::{Image, Signal};
use crate::wavelet::{max_levels, WaveletKind, WaveletSpec};

/// DC component plus `k` zero-mean scale spectra, all the length of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSpectra<T> {
    wavelet: WaveletKind,
    dc: Signal<T>,
    spectra: Vec<Signal<T>>,
}

impl<T: Real> ScaleSpectra<T> {
    pub fn new(wavelet: WaveletKind, dc: Signal<T>, spectra: Vec<Signal<T>>) -> Result<Self> {
        let n = dc.len();
        if let Some((s, bad)) = spectra.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(AwtError::InvalidSpectra(format!(
                "scale {} has length {}, DC has length {n}",
                s + 1,
                bad.len()
            )));
        }
        Ok(Self { wavelet, dc, spectra })
    }

    pub fn wavelet(&self) -> WaveletKind {
        self.wavelet
    }

    pub fn n(&self) -> usize {
        self.dc.len()
    }

    /// Number of detail scales.
    pub fn k(&self) -> usize {
        self.spectra.len()
    }

    pub fn dc(&self) -> &Signal<T> {
        &self.dc
    }

    /// Detail spectra, scales 1..=k.
    pub fn spectra(&self) -> &[Signal<T>] {
        &self.spectra
    }

    /// Scale `s` with 0 meaning DC.
    pub fn scale(&self, s: usize) -> Result<&Signal<T>> {
        match s {
            0 => Ok(&self.dc),
            _ => self.spectra.get(s - 1).ok_or(AwtError::InvalidScale {
                scale: s,
                max: self.k(),
            }),
        }
    }

    /// Iterates DC first, then scales 1..=k.
    pub fn iter(&self) -> impl Iterator<Item = &Signal<T>> {
        std::iter::once(&self.dc).chain(&self.spectra)
    }

    /// Number of stored reals, `(k + 1) * n`.
    pub fn stored_values(&self) -> usize {
        self.iter().map(Signal::len).sum()
    }
}

/// 2-D counterpart of [`ScaleSpectra`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSpectra2D<T> {
    wavelet: WaveletKind,
    dc: Image<T>,
    spectra: Vec<Image<T>>,
}

impl<T: Real> ScaleSpectra2D<T> {
    pub fn new(wavelet: WaveletKind, dc: Image<T>, spectra: Vec<Image<T>>) -> Result<Self> {
        let dims = (dc.height(), dc.width());
        if let Some((s, bad)) = spectra
            .iter()
            .enumerate()
            .find(|(_, v)| (v.height(), v.width()) != dims)
        {
            return Err(AwtError::InvalidSpectra(format!(
                "scale {} is {}x{}, DC is {}x{}",
                s + 1,
                bad.height(),
                bad.width(),
                dims.0,
                dims.1
            )));
        }
        Ok(Self { wavelet, dc, spectra })
    }

    pub fn wavelet(&self) -> WaveletKind {
        self.wavelet
    }

    pub fn height(&self) -> usize {
        self.dc.height()
    }

    pub fn width(&self) -> usize {
        self.dc.width()
    }

    pub fn k(&self) -> usize {
        self.spectra.len()
    }

    pub fn dc(&self) -> &Image<T> {
        &self.dc
    }

    pub fn spectra(&self) -> &[Image<T>] {
        &self.spectra
    }

    pub fn scale(&self, s: usize) -> Result<&Image<T>> {
        match s {
            0 => Ok(&self.dc),
            _ => self.spectra.get(s - 1).ok_or(AwtError::InvalidScale {
                scale: s,
                max: self.k(),
            }),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Image<T>> {
        std::iter::once(&self.dc).chain(&self.spectra)
    }
}

pub(crate) fn check_levels(max: usize, levels: usize) -> Result<()> {
    if levels == 0 || levels > max {
        return Err(AwtError::InvalidScale { scale: levels, max });
    }
    Ok(())
}

/// Circular right shift by `i` (any integer, taken modulo n): `out[(j + i) mod n] = x[j]`.
pub fn circular_shift<T: Real>(x: &Signal<T>, i: isize) -> Signal<T> {
    Signal::from_vec_unchecked(shift_vec(x.as_slice(), i))
}

pub(crate) fn shift_vec<T: Copy>(x: &[T], i: isize) -> Vec<T> {
    let n = x.len();
    let d = i.rem_euclid(n as isize) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&x[n - d..]);
    out.extend_from_slice(&x[..n - d]);
    out
}

// acc[j] += v[(j + i) mod n], i.e. accumulate the left shift by i.
fn accumulate_aligned<T: Real>(acc: &mut [T], v: &[T], i: usize) {
    let n = acc.len();
    for (j, a) in acc.iter_mut().enumerate() {
        *a = *a + v[(j + i) % n];
    }
}

// Shared driver: per shift, all k+1 projections, aligned and accumulated.
fn average_projections<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>, k: usize) -> Result<Vec<Vec<T>>> {
    let n = x.len();
    let mut acc = vec![vec![T::zero(); n]; k + 1];
    for i in 0..n {
        let shifted = circular_shift(x, i as isize);
        let coeffs = dwt_periodic(&shifted, wavelet, k)?;
        for (a, p) in acc.iter_mut().zip(projections(&coeffs, wavelet)?) {
            accumulate_aligned(a, &p, i);
        }
    }
    let scale = T::one() / T::lit(n as f64);
    for a in &mut acc {
        a.iter_mut().for_each(|v| *v = *v * scale);
    }
    Ok(acc)
}

/// One scale of the averaged transform by literal averaging; `s = 0` is DC.
pub fn awt_scale_naive<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>, s: usize) -> Result<Signal<T>> {
    let n = x.len();
    let k = max_levels(n)?;
    if s > k {
        return Err(AwtError::InvalidScale { scale: s, max: k });
    }
    let mut acc = vec![T::zero(); n];
    for i in 0..n {
        let shifted = circular_shift(x, i as isize);
        let coeffs = dwt_periodic(&shifted, wavelet, k)?;
        let p = if s == 0 {
            crate::dwt::reconstruct_approx(&coeffs, wavelet)?
        } else {
            crate::dwt::reconstruct_detail(&coeffs, wavelet, s)?
        };
        accumulate_aligned(&mut acc, p.as_slice(), i);
    }
    let scale = T::one() / T::lit(n as f64);
    Ok(Signal::from_vec_unchecked(acc.into_iter().map(|v| v * scale).collect()))
}

/// The complete averaged transform (DC and every scale) by literal averaging,
/// at the full depth `k = max_levels(n)`.
pub fn awt_full_naive<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>) -> Result<ScaleSpectra<T>> {
    awt_full_naive_levels(x, wavelet, max_levels(x.len())?)
}

/// [`awt_full_naive`] with an explicit number of scales; the DC term is then
/// the averaged approximation at level `levels`.
pub fn awt_full_naive_levels<T: Real>(
    x: &Signal<T>,
    wavelet: &WaveletSpec<T>,
    levels: usize,
) -> Result<ScaleSpectra<T>> {
    check_levels(max_levels(x.len())?, levels)?;
    let mut acc = average_projections(x, wavelet, levels)?
        .into_iter()
        .map(Signal::from_vec_unchecked);
    let dc = acc.next().expect("at least the DC projection");
    ScaleSpectra::new(wavelet.kind(), dc, acc.collect())
}

/// Sums DC and every scale spectrum.
pub fn inverse_awt<T: Real>(spectra: &ScaleSpectra<T>) -> Signal<T> {
    let mut out = spectra.dc().as_slice().to_vec();
    for s in spectra.spectra() {
        for (o, v) in out.iter_mut().zip(s.iter()) {
            *o = *o + *v;
        }
    }
    Signal::from_vec_unchecked(out)
}

/// Sums DC and every 2-D scale spectrum.
pub fn inverse_awt_2d<T: Real>(spectra: &ScaleSpectra2D<T>) -> Image<T> {
    let mut out = spectra.dc().as_slice().to_vec();
    for s in spectra.spectra() {
        for (o, v) in out.iter_mut().zip(s.as_slice()) {
            *o = *o + *v;
        }
    }
    Image::from_vec_unchecked(spectra.height(), spectra.width(), out)
}

/// 2-D averaged transform by literal averaging over all `h * w` shifts, at
/// depth `min(max_levels(h), max_levels(w))`.
///
/// Each scale combines the three oriented detail bands of its level. Only
/// meant for small images.
pub fn awt2d_full_naive<T: Real>(img: &Image<T>, wavelet: &WaveletSpec<T>) -> Result<ScaleSpectra2D<T>> {
    awt2d_full_naive_levels(img, wavelet, max_levels_2d(img.height(), img.width())?)
}

/// [`awt2d_full_naive`] with an explicit number of scales.
pub fn awt2d_full_naive_levels<T: Real>(
    img: &Image<T>,
    wavelet: &WaveletSpec<T>,
    k: usize,
) -> Result<ScaleSpectra2D<T>> {
    let (h, w) = (img.height(), img.width());
    check_levels(max_levels_2d(h, w)?, k)?;
    let mut acc = vec![vec![T::zero(); h * w]; k + 1];
    for a in 0..h {
        for b in 0..w {
            let shifted = img.circular_shift(a as isize, b as isize);
            let coeffs = dwt2d_periodic(&shifted, wavelet, k)?;
            for (sum, p) in acc.iter_mut().zip(projections_2d(&coeffs, wavelet)) {
                for r in 0..h {
                    let src = (r + a) % h;
                    for c in 0..w {
                        let v = p[src * w + (c + b) % w];
                        sum[r * w + c] = sum[r * w + c] + v;
                    }
                }
            }
        }
    }
    let scale = T::one() / T::lit((h * w) as f64);
    let mut images = acc
        .into_iter()
        .map(|v| Image::from_vec_unchecked(h, w, v.into_iter().map(|x| x * scale).collect()));
    let dc = images.next().expect("at least the DC projection");
    ScaleSpectra2D::new(wavelet.kind(), dc, images.collect())
}
