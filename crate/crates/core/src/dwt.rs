//! Periodized orthonormal discrete wavelet transform and per-scale projections.
//!
//! Analysis is circular correlation with the filter origin at index 0,
//! keeping even positions:
//!
//! ```text
//! approx[j] = sum_i lowpass[i]  * x[(2j + i) mod m]
//! detail[j] = sum_i highpass[i] * x[(2j + i) mod m]
//! ```
//!
//! Synthesis is the transpose. Filters longer than the current level wrap
//! around more than once, which keeps the transform orthonormal down to a
//! level length of one.

use crate::error::{AwtError, Result};
use crate::scalar::Real;
use crate::signal::{Image, Signal};
use crate::wavelet::{max_levels, WaveletSpec};

/// Output of a k-level periodized DWT.
///
/// `details[j]` holds level `j + 1` and has length `n / 2^(j+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs<T> {
    pub n: usize,
    pub details: Vec<Vec<T>>,
    pub approx: Vec<T>,
}

impl<T: Real> WaveletCoeffs<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Checks the halving pattern of every vector.
    pub fn validate(&self) -> Result<()> {
        let k = self.levels();
        if k >= usize::BITS as usize || !self.n.is_multiple_of(1usize << k) {
            return Err(AwtError::InvalidCoeffs(format!(
                "length {} is not divisible by 2^{k}",
                self.n
            )));
        }
        for (j, d) in self.details.iter().enumerate() {
            let expected = self.n >> (j + 1);
            if d.len() != expected {
                return Err(AwtError::InvalidCoeffs(format!(
                    "level {} detail has {} coefficients, expected {expected}",
                    j + 1,
                    d.len()
                )));
            }
        }
        if self.approx.len() != self.n >> k {
            return Err(AwtError::InvalidCoeffs(format!(
                "approximation has {} coefficients, expected {}",
                self.approx.len(),
                self.n >> k
            )));
        }
        Ok(())
    }

    /// Sum of squares over every coefficient.
    pub fn energy(&self) -> T {
        let mut acc = T::zero();
        for v in self.details.iter().flatten().chain(&self.approx) {
            acc = acc + *v * *v;
        }
        acc
    }
}

pub(crate) fn analyze_into<T: Real>(
    x: &[T],
    w: &WaveletSpec<T>,
    approx: &mut [T],
    detail: &mut [T],
) {
    let m = x.len();
    let (lo, hi) = (w.lowpass(), w.highpass());
    for j in 0..m / 2 {
        let mut a = T::zero();
        let mut d = T::zero();
        for i in 0..lo.len() {
            let v = x[(2 * j + i) % m];
            a = a + lo[i] * v;
            d = d + hi[i] * v;
        }
        approx[j] = a;
        detail[j] = d;
    }
}

/// Inverse of one analysis step. `detail` may be `None` for an all-zero band.
pub(crate) fn synthesize_into<T: Real>(
    approx: &[T],
    detail: Option<&[T]>,
    w: &WaveletSpec<T>,
    out: &mut [T],
) {
    let m = out.len();
    let (lo, hi) = (w.lowpass(), w.highpass());
    out.iter_mut().for_each(|v| *v = T::zero());
    for j in 0..m / 2 {
        let a = approx[j];
        let d = detail.map_or(T::zero(), |d| d[j]);
        for i in 0..lo.len() {
            let p = (2 * j + i) % m;
            out[p] = out[p] + lo[i] * a + hi[i] * d;
        }
    }
}

fn check_levels(n: usize, levels: usize) -> Result<()> {
    let max = if n >= 2 && n.is_multiple_of(2) { max_levels(n)? } else { 0 };
    if levels > max {
        return Err(AwtError::InvalidLevels { n, levels, max });
    }
    Ok(())
}

/// k-level periodized orthonormal DWT.
pub fn dwt_periodic<T: Real>(
    signal: &Signal<T>,
    wavelet: &WaveletSpec<T>,
    levels: usize,
) -> Result<WaveletCoeffs<T>> {
    let n = signal.len();
    check_levels(n, levels)?;
    let mut current = signal.as_slice().to_vec();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let half = current.len() / 2;
        let mut a = vec![T::zero(); half];
        let mut d = vec![T::zero(); half];
        analyze_into(&current, wavelet, &mut a, &mut d);
        details.push(d);
        current = a;
    }
    Ok(WaveletCoeffs {
        n,
        details,
        approx: current,
    })
}

/// Inverse of [`dwt_periodic`].
pub fn idwt_periodic<T: Real>(
    coeffs: &WaveletCoeffs<T>,
    wavelet: &WaveletSpec<T>,
) -> Result<Signal<T>> {
    coeffs.validate()?;
    let mut current = coeffs.approx.clone();
    for d in coeffs.details.iter().rev() {
        let mut out = vec![T::zero(); current.len() * 2];
        synthesize_into(&current, Some(d), wavelet, &mut out);
        current = out;
    }
    Signal::new(current)
}

// Runs synthesis from `level` down to the signal with all finer details zero.
fn synthesize_from<T: Real>(
    mut approx: Vec<T>,
    mut detail: Option<&[T]>,
    level: usize,
    wavelet: &WaveletSpec<T>,
) -> Vec<T> {
    for _ in 0..level {
        let mut out = vec![T::zero(); approx.len() * 2];
        synthesize_into(&approx, detail.take(), wavelet, &mut out);
        approx = out;
    }
    approx
}

/// Projection onto the detail subspace of scale `s` (1-based), reconstructed to full length.
pub fn reconstruct_detail<T: Real>(
    coeffs: &WaveletCoeffs<T>,
    wavelet: &WaveletSpec<T>,
    s: usize,
) -> Result<Signal<T>> {
    coeffs.validate()?;
    let k = coeffs.levels();
    if s == 0 || s > k {
        return Err(AwtError::InvalidScale { scale: s, max: k });
    }
    let d = &coeffs.details[s - 1];
    let zeros = vec![T::zero(); d.len()];
    Ok(Signal::from_vec_unchecked(synthesize_from(
        zeros,
        Some(d),
        s,
        wavelet,
    )))
}

/// Projection onto the coarsest approximation subspace.
pub fn reconstruct_approx<T: Real>(
    coeffs: &WaveletCoeffs<T>,
    wavelet: &WaveletSpec<T>,
) -> Result<Signal<T>> {
    coeffs.validate()?;
    Ok(Signal::from_vec_unchecked(synthesize_from(
        coeffs.approx.clone(),
        None,
        coeffs.levels(),
        wavelet,
    )))
}

/// All k+1 projections at once: index 0 is the approximation, index `s` the
/// detail of scale `s`.
pub fn projections<T: Real>(coeffs: &WaveletCoeffs<T>, wavelet: &WaveletSpec<T>) -> Result<Vec<Vec<T>>> {
    let k = coeffs.levels();
    let mut out = Vec::with_capacity(k + 1);
    out.push(reconstruct_approx(coeffs, wavelet)?.into_vec());
    for s in 1..=k {
        out.push(reconstruct_detail(coeffs, wavelet, s)?.into_vec());
    }
    Ok(out)
}

/// The three oriented detail bands of one 2-D level, each `h/2 x w/2` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands<T> {
    /// Low along rows, high along columns.
    pub lh: Vec<T>,
    pub hl: Vec<T>,
    pub hh: Vec<T>,
}

/// Output of a k-level separable periodized 2-D DWT.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs2D<T> {
    pub height: usize,
    pub width: usize,
    pub details: Vec<Subbands<T>>,
    pub approx: Vec<T>,
}

impl<T> WaveletCoeffs2D<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }
}

/// Level count of a 2-D decomposition: the smaller of the two axis valuations.
pub fn max_levels_2d(height: usize, width: usize) -> Result<usize> {
    Ok(max_levels(height)?.min(max_levels(width)?))
}

/// Depth used for image decompositions when none is requested.
///
/// Full depth, except when the coarsest approximation would be a single
/// coefficient (square power-of-two images): the DC image would then be the
/// constant mean, so stop one level earlier. A 128x128 image gives DC plus six
/// scales.
pub fn default_image_levels(height: usize, width: usize) -> Result<usize> {
    let k = max_levels_2d(height, width)?;
    if k >= 2 && height >> k == 1 && width >> k == 1 {
        Ok(k - 1)
    } else {
        Ok(k)
    }
}

// One separable analysis step on an h x w block: rows first, then columns.
fn analyze_2d<T: Real>(x: &[T], h: usize, w: usize, wl: &WaveletSpec<T>) -> [Vec<T>; 4] {
    let (h2, w2) = (h / 2, w / 2);
    let mut row_lo = vec![T::zero(); h * w2];
    let mut row_hi = vec![T::zero(); h * w2];
    for r in 0..h {
        analyze_into(
            &x[r * w..(r + 1) * w],
            wl,
            &mut row_lo[r * w2..(r + 1) * w2],
            &mut row_hi[r * w2..(r + 1) * w2],
        );
    }
    let columns = |src: &[T]| {
        let mut lo = vec![T::zero(); h2 * w2];
        let mut hi = vec![T::zero(); h2 * w2];
        let mut col = vec![T::zero(); h];
        let mut a = vec![T::zero(); h2];
        let mut d = vec![T::zero(); h2];
        for c in 0..w2 {
            for r in 0..h {
                col[r] = src[r * w2 + c];
            }
            analyze_into(&col, wl, &mut a, &mut d);
            for r in 0..h2 {
                lo[r * w2 + c] = a[r];
                hi[r * w2 + c] = d[r];
            }
        }
        (lo, hi)
    };
    let (ll, lh) = columns(&row_lo);
    let (hl, hh) = columns(&row_hi);
    [ll, lh, hl, hh]
}

// Inverse of `analyze_2d`; `None` bands are zero.
fn synthesize_2d<T: Real>(
    ll: &[T],
    bands: Option<&Subbands<T>>,
    h: usize,
    w: usize,
    wl: &WaveletSpec<T>,
) -> Vec<T> {
    let (h2, w2) = (h / 2, w / 2);
    let columns = |lo: &[T], hi: Option<&[T]>| {
        let mut out = vec![T::zero(); h * w2];
        let mut a = vec![T::zero(); h2];
        let mut d = vec![T::zero(); h2];
        let mut col = vec![T::zero(); h];
        for c in 0..w2 {
            for r in 0..h2 {
                a[r] = lo[r * w2 + c];
                if let Some(hi) = hi {
                    d[r] = hi[r * w2 + c];
                }
            }
            synthesize_into(&a, hi.map(|_| d.as_slice()), wl, &mut col);
            for r in 0..h {
                out[r * w2 + c] = col[r];
            }
        }
        out
    };
    let row_lo = columns(ll, bands.map(|b| b.lh.as_slice()));
    let row_hi = bands.map(|b| columns(&b.hl, Some(&b.hh)));
    let mut out = vec![T::zero(); h * w];
    for r in 0..h {
        synthesize_into(
            &row_lo[r * w2..(r + 1) * w2],
            row_hi.as_ref().map(|v| &v[r * w2..(r + 1) * w2]),
            wl,
            &mut out[r * w..(r + 1) * w],
        );
    }
    out
}

/// k-level separable periodized 2-D DWT (Mallat pyramid on the LL band).
pub fn dwt2d_periodic<T: Real>(
    img: &Image<T>,
    wavelet: &WaveletSpec<T>,
    levels: usize,
) -> Result<WaveletCoeffs2D<T>> {
    let (h, w) = (img.height(), img.width());
    let max = max_levels_2d(h, w)?;
    if levels > max {
        return Err(AwtError::InvalidLevels {
            n: h.min(w),
            levels,
            max,
        });
    }
    let mut current = img.as_slice().to_vec();
    let (mut ch, mut cw) = (h, w);
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let [ll, lh, hl, hh] = analyze_2d(&current, ch, cw, wavelet);
        details.push(Subbands { lh, hl, hh });
        current = ll;
        ch /= 2;
        cw /= 2;
    }
    Ok(WaveletCoeffs2D {
        height: h,
        width: w,
        details,
        approx: current,
    })
}

/// Inverse of [`dwt2d_periodic`].
pub fn idwt2d_periodic<T: Real>(coeffs: &WaveletCoeffs2D<T>, wavelet: &WaveletSpec<T>) -> Result<Image<T>> {
    let k = coeffs.levels();
    let mut current = coeffs.approx.clone();
    for level in (1..=k).rev() {
        let (h, w) = (coeffs.height >> (level - 1), coeffs.width >> (level - 1));
        current = synthesize_2d(&current, Some(&coeffs.details[level - 1]), h, w, wavelet);
    }
    Image::new(coeffs.height, coeffs.width, current)
}

/// All k+1 2-D projections: index 0 is the approximation, index `s` joins the
/// three oriented detail bands of scale `s`.
pub fn projections_2d<T: Real>(coeffs: &WaveletCoeffs2D<T>, wavelet: &WaveletSpec<T>) -> Vec<Vec<T>> {
    let k = coeffs.levels();
    let run_down = |mut data: Vec<T>, mut bands: Option<&Subbands<T>>, from: usize| {
        for level in (1..=from).rev() {
            let (h, w) = (coeffs.height >> (level - 1), coeffs.width >> (level - 1));
            data = synthesize_2d(&data, bands.take(), h, w, wavelet);
        }
        data
    };
    let mut out = Vec::with_capacity(k + 1);
    out.push(run_down(coeffs.approx.clone(), None, k));
    for s in 1..=k {
        let zeros = vec![T::zero(); coeffs.details[s - 1].hh.len()];
        out.push(run_down(zeros, Some(&coeffs.details[s - 1]), s));
    }
    out
}
