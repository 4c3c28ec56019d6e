//! Quantified experiments on the transform: the invariant suite, the shift
//! variance of the plain DWT versus the averaged transform, and substructure
//! matching across scales.

use std::fmt;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dwt::{dwt_periodic, reconstruct_detail};
use crate::error::{AwtError, Result};
use crate::filterbank::{awt_fft, filter_bank_for, AwtFilterBank};
use crate::reference::{awt_full_naive, circular_shift, inverse_awt, ScaleSpectra};
use crate::scalar::{max_abs, max_abs_diff, mean, Real};
use crate::signal::{Image, Signal};
use crate::wavelet::WaveletSpec;

/// Absolute tolerances of the invariant suite, for unit-amplitude input.
/// [`verify_transform_with`] scales them by `max(1, max|x|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub shift_invariance: f64,
    pub reconstruction: f64,
    pub zero_mean: f64,
    pub dc_mean: f64,
    pub linearity: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            shift_invariance: 1e-10,
            reconstruction: 1e-10,
            zero_mean: 1e-10,
            dc_mean: 1e-12,
            linearity: 1e-10,
            oracle: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults widened in proportion to the machine epsilon of `T`.
    pub fn for_type<T: Real>() -> Self {
        let ratio = (T::epsilon().to_f64_lossless() / f64::EPSILON).max(1.0);
        Self::uniform_scaled(Self::default(), ratio)
    }

    /// Every tolerance set to the same value.
    pub fn all(value: f64) -> Self {
        Self {
            shift_invariance: value,
            reconstruction: value,
            zero_mean: value,
            dc_mean: value,
            linearity: value,
            oracle: value,
        }
    }

    fn uniform_scaled(t: Self, f: f64) -> Self {
        Self {
            shift_invariance: t.shift_invariance * f,
            reconstruction: t.reconstruction * f,
            zero_mean: t.zero_mean * f,
            dc_mean: t.dc_mean * f,
            linearity: t.linearity * f,
            oracle: t.oracle * f,
        }
    }
}

/// One named residual against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<40} residual={:.3e} tolerance={:.3e} {}",
                c.name,
                c.residual,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "overall {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn spectra_residual<T: Real>(a: &ScaleSpectra<T>, b: &ScaleSpectra<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |m, (u, v)| m.max(max_abs_diff(u.as_slice(), v.as_slice())))
}

/// Largest deviation of `awt(CS_i x)` from `CS_i awt(x)` over every shift and scale.
pub fn shift_invariance_residual<T: Real>(x: &Signal<T>, bank: &AwtFilterBank<T>) -> Result<T> {
    let base = awt_fft(x, bank)?;
    let mut worst = T::zero();
    for i in 0..x.len() {
        let shifted = awt_fft(&circular_shift(x, i as isize), bank)?;
        for (u, v) in base.iter().zip(shifted.iter()) {
            worst = worst.max(max_abs_diff(circular_shift(u, i as isize).as_slice(), v.as_slice()));
        }
    }
    Ok(worst)
}

/// Runs the invariant suite with the default tolerances for `T`.
pub fn verify_transform<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>) -> Result<VerificationReport> {
    verify_transform_with(x, wavelet, &Tolerances::for_type::<T>())
}

/// Runs the invariant suite: shift invariance over all shifts, reconstruction,
/// zero-mean spectra, DC mean, linearity and fast-versus-naive agreement.
pub fn verify_transform_with<T: Real>(
    x: &Signal<T>,
    wavelet: &WaveletSpec<T>,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let bank = filter_bank_for(wavelet, x.len())?;
    verify_transform_with_bank(x, wavelet, &bank, tol)
}

/// As [`verify_transform_with`], using a prebuilt (for example cached) filter bank.
pub fn verify_transform_with_bank<T: Real>(
    x: &Signal<T>,
    wavelet: &WaveletSpec<T>,
    bank: &AwtFilterBank<T>,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let n = x.len();
    if bank.n() != n {
        return Err(AwtError::BankMismatch {
            bank: bank.n().to_string(),
            input: n.to_string(),
        });
    }
    if bank.wavelet() != wavelet.kind() {
        return Err(AwtError::CorruptBank(format!(
            "bank built for {}, requested {}",
            bank.wavelet(),
            wavelet.kind()
        )));
    }
    let amp = max_abs(x.as_slice()).to_f64_lossless().max(1.0);
    let f = |v: T| v.to_f64_lossless();
    let fast = awt_fft(x, bank)?;

    let mut report = VerificationReport::default();
    report.push(Check::new(
        "shift invariance (all shifts, all scales)",
        f(shift_invariance_residual(x, bank)?),
        tol.shift_invariance * amp,
    ));
    report.push(Check::new(
        "reconstruction",
        f(max_abs_diff(inverse_awt(&fast).as_slice(), x.as_slice())),
        tol.reconstruction * amp,
    ));
    let zero_mean = fast
        .spectra()
        .iter()
        .fold(T::zero(), |m, s| m.max(mean(s.as_slice()).abs()));
    report.push(Check::new("zero-mean scale spectra", f(zero_mean), tol.zero_mean * amp));
    report.push(Check::new(
        "DC mean equals signal mean",
        f((mean(fast.dc().as_slice()) - mean(x.as_slice())).abs()),
        tol.dc_mean * amp,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001 ^ n as u64);
    let a = T::lit(rng.gen_range(-2.0..2.0));
    let b = T::lit(rng.gen_range(-2.0..2.0));
    let y = Signal::new((0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0) * amp)).collect())?;
    let combined = awt_fft(&x.combine(a, &y, b)?, bank)?;
    let ay = awt_fft(&y, bank)?;
    let mut lin = T::zero();
    for ((z, u), v) in combined.iter().zip(fast.iter()).zip(ay.iter()) {
        for j in 0..n {
            lin = lin.max((z[j] - (a * u[j] + b * v[j])).abs());
        }
    }
    report.push(Check::new("linearity", f(lin), tol.linearity * amp));

    let naive = awt_full_naive(x, wavelet)?;
    report.push(Check::new(
        "filter bank vs. shift averaging",
        f(spectra_residual(&fast, &naive)),
        tol.oracle * amp,
    ));
    Ok(report)
}

fn require_power_of_two(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(AwtError::InvalidLength {
            n,
            reason: "shift-variance measurement needs a power-of-two length",
        });
    }
    Ok(())
}

/// `max_i |REC_1(WT(CS_i x)) - CS_i REC_1(WT(x))|_inf / |x|_inf`: how far the
/// scale-1 detail projection of the plain DWT is from commuting with shifts.
pub fn wt_shift_variance<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>) -> Result<T> {
    let n = x.len();
    require_power_of_two(n)?;
    let norm = max_abs(x.as_slice());
    if norm == T::zero() {
        return Ok(T::zero());
    }
    let rec1 = |s: &Signal<T>| -> Result<Signal<T>> { reconstruct_detail(&dwt_periodic(s, wavelet, 1)?, wavelet, 1) };
    let base = rec1(x)?;
    let mut worst = T::zero();
    for i in 0..n {
        let moved = rec1(&circular_shift(x, i as isize))?;
        worst = worst.max(max_abs_diff(moved.as_slice(), circular_shift(&base, i as isize).as_slice()));
    }
    Ok(worst / norm)
}

/// Same measurement as [`wt_shift_variance`] with the scale-1 averaged spectrum
/// in place of the plain detail projection.
pub fn awt_shift_variance<T: Real>(x: &Signal<T>, wavelet: &WaveletSpec<T>) -> Result<T> {
    let n = x.len();
    require_power_of_two(n)?;
    let norm = max_abs(x.as_slice());
    if norm == T::zero() {
        return Ok(T::zero());
    }
    let bank = filter_bank_for(wavelet, n)?;
    let base = awt_fft(x, &bank)?;
    let mut worst = T::zero();
    for i in 0..n {
        let moved = awt_fft(&circular_shift(x, i as isize), &bank)?;
        let expected = circular_shift(&base.spectra()[0], i as isize);
        worst = worst.max(max_abs_diff(moved.spectra()[0].as_slice(), expected.as_slice()));
    }
    Ok(worst / norm)
}

/// Per-scale comparison of a windowed substructure with the full signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstructureResult {
    pub scale: usize,
    pub window: Range<usize>,
    /// Relative L2 distance over the whole window.
    pub match_error: f64,
    /// Window with `edge_margin` samples removed from both ends (at least one
    /// sample is always kept).
    pub interior: Range<usize>,
    pub edge_margin: usize,
    /// Relative L2 distance over `interior`.
    pub interior_error: f64,
    pub filter_support: usize,
}

/// `x` inside `window`, zero elsewhere.
pub fn substructure_signal<T: Real>(x: &Signal<T>, window: &Range<usize>) -> Result<Signal<T>> {
    let n = x.len();
    if window.start >= window.end || window.end > n {
        return Err(AwtError::InvalidWindow {
            start: window.start,
            end: window.end,
            n,
        });
    }
    Ok(Signal::from_vec_unchecked(
        x.iter()
            .enumerate()
            .map(|(j, &v)| if window.contains(&j) { v } else { T::zero() })
            .collect(),
    ))
}

fn relative_l2<T: Real>(approx: &[T], reference: &[T]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &r) in approx.iter().zip(reference) {
        let (a, r) = (a.to_f64_lossless(), r.to_f64_lossless());
        num += (a - r) * (a - r);
        den += r * r;
    }
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        (num / den).sqrt()
    }
}

/// Compares the averaged transform of `x` restricted to `window` with the
/// transform of `x` itself, scale by scale.
pub fn substructure_experiment<T: Real>(
    x: &Signal<T>,
    window: Range<usize>,
    wavelet: &WaveletSpec<T>,
) -> Result<Vec<SubstructureResult>> {
    let sub = substructure_signal(x, &window)?;
    let bank = filter_bank_for(wavelet, x.len())?;
    let full = awt_fft(x, &bank)?;
    let part = awt_fft(&sub, &bank)?;
    let len = window.end - window.start;
    (1..=bank.k())
        .map(|s| {
            let support = bank.effective_support(s)?;
            let margin = (support / 2).min((len - 1) / 2);
            let interior = window.start + margin..window.end - margin;
            let f = full.spectra()[s - 1].as_slice();
            let p = part.spectra()[s - 1].as_slice();
            Ok(SubstructureResult {
                scale: s,
                window: window.clone(),
                match_error: relative_l2(&p[window.clone()], &f[window.clone()]),
                interior: interior.clone(),
                edge_margin: margin,
                interior_error: relative_l2(&p[interior.clone()], &f[interior]),
                filter_support: support,
            })
        })
        .collect()
}

/// Test signal: two Gaussian bumps and a step.
///
/// `x[j] = exp(-((j - 0.3n) / 0.05n)^2 / 2) + 0.6 exp(-((j - 0.6n) / 0.08n)^2 / 2) + 0.4 [j >= 0.8n]`
pub fn synthetic_signal<T: Real>(n: usize) -> Result<Signal<T>> {
    let nf = n as f64;
    let bump = |j: f64, c: f64, w: f64| (-0.5 * ((j - c * nf) / (w * nf)).powi(2)).exp();
    Signal::new(
        (0..n)
            .map(|j| {
                let jf = j as f64;
                let step = if jf >= 0.8 * nf { 0.4 } else { 0.0 };
                T::lit(bump(jf, 0.3, 0.05) + 0.6 * bump(jf, 0.6, 0.08) + step)
            })
            .collect(),
    )
}

/// Window of [`synthetic_signal`] covering the first bump (centre +- 2.5 widths).
pub fn synthetic_window(n: usize) -> Range<usize> {
    let c = 0.3 * n as f64;
    let half = 2.5 * 0.05 * n as f64;
    (c - half).floor() as usize..(c + half).ceil() as usize
}

/// Uniform noise in [-1, 1), reproducible from `seed`.
pub fn seeded_noise<T: Real>(n: usize, seed: u64) -> Result<Signal<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Signal::new((0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect())
}

/// Test image in [0, 1]: two blobs, a bright rectangle and a soft diagonal ramp.
pub fn synthetic_image<T: Real>(height: usize, width: usize) -> Result<Image<T>> {
    let (hf, wf) = (height as f64, width as f64);
    let mut data = Vec::with_capacity(height * width);
    for r in 0..height {
        for c in 0..width {
            let (y, x) = (r as f64 / hf, c as f64 / wf);
            let blob = |cy: f64, cx: f64, s: f64| (-((y - cy).powi(2) + (x - cx).powi(2)) / (2.0 * s * s)).exp();
            let rect = if (0.6..0.85).contains(&y) && (0.15..0.45).contains(&x) { 0.5 } else { 0.0 };
            let v = 0.15 * (x + y) + 0.6 * blob(0.3, 0.3, 0.08) + 0.4 * blob(0.4, 0.7, 0.15) + rect;
            data.push(T::lit(v.min(1.0)));
        }
    }
    Image::new(height, width, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::WaveletKind;

    fn random_signal(n: usize, seed: u64) -> Signal<f64> {
        seeded_noise(n, seed).unwrap()
    }

    #[test]
    fn random_signal_passes() {
        let r = verify_transform(&random_signal(64, 1), &WaveletKind::Haar.spec()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 6);
    }

    #[test]
    fn constant_and_alternating_pass() {
        let w = WaveletKind::Daub4.spec();
        let c = Signal::new(vec![4.0; 32]).unwrap();
        assert!(verify_transform(&c, &w).unwrap().passed());
        let alt = Signal::new((0..32).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect()).unwrap();
        assert!(verify_transform(&alt, &w).unwrap().passed());
        // Nyquist content sits entirely in scale 1 for Haar
        let bank = filter_bank_for(&WaveletKind::Haar.spec(), 32).unwrap();
        let sp = awt_fft(&alt, &bank).unwrap();
        assert!(max_abs_diff(sp.spectra()[0].as_slice(), alt.as_slice()) < 1e-12);
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = VerificationReport::default();
        r.push(Check::new("a", 1e-12, 1e-10));
        assert!(r.passed());
        r.push(Check::new("b", 1e-3, 1e-10));
        assert!(!r.passed());
        assert!(r.to_string().contains("FAIL"));
        assert!(r.to_string().ends_with("overall FAIL"));
    }

    #[test]
    fn wt_is_shift_variant_awt_is_not() {
        let w = WaveletKind::Haar.spec();
        let d = Signal::<f64>::impulse(8).unwrap();
        let v = wt_shift_variance(&d, &w).unwrap();
        assert!((v - 0.5).abs() < 1e-15, "brute force over 8 shifts gives 0.5, got {v}");
        assert!(awt_shift_variance(&d, &w).unwrap() <= 1e-10);
        let c = Signal::new(vec![2.0; 16]).unwrap();
        assert!(wt_shift_variance(&c, &w).unwrap() <= 1e-12);
        assert!(matches!(
            wt_shift_variance(&Signal::new(vec![1.0; 12]).unwrap(), &w),
            Err(AwtError::InvalidLength { .. })
        ));
    }

    #[test]
    fn substructure_orders_scales() {
        let x = synthetic_signal::<f64>(128).unwrap();
        let win = synthetic_window(128);
        assert_eq!(win, 22..55);
        let res = substructure_experiment(&x, win, &WaveletKind::Haar.spec()).unwrap();
        assert_eq!(res.len(), 7);
        assert!(res[0].match_error < res[6].match_error);
        assert!(res[0].interior_error <= res[6].interior_error);
        for pair in res.windows(2) {
            assert!(pair[0].filter_support <= pair[1].filter_support);
        }
        assert!(res.iter().all(|r| r.match_error >= 0.0));
    }

    #[test]
    fn full_window_matches_exactly() {
        let x = synthetic_signal::<f64>(64).unwrap();
        for r in substructure_experiment(&x, 0..64, &WaveletKind::Daub8.spec()).unwrap() {
            assert!(r.match_error <= 1e-12);
        }
    }

    #[test]
    fn empty_or_outside_window_is_rejected() {
        let x = synthetic_signal::<f64>(64).unwrap();
        let w = WaveletKind::Haar.spec();
        assert!(matches!(substructure_experiment(&x, 5..5, &w), Err(AwtError::InvalidWindow { .. })));
        assert!(matches!(substructure_experiment(&x, 60..70, &w), Err(AwtError::InvalidWindow { .. })));
    }

    #[test]
    fn synthetic_image_is_bounded() {
        let img = synthetic_image::<f64>(32, 16).unwrap();
        assert!(img.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn verify_with_bank_rejects_foreign_banks() {
        let x = random_signal(16, 4);
        let haar = WaveletKind::Haar.spec::<f64>();
        let d4 = WaveletKind::Daub4.spec::<f64>();
        let bank = filter_bank_for(&haar, 16).unwrap();
        assert!(verify_transform_with_bank(&x, &haar, &bank, &Tolerances::default()).unwrap().passed());
        assert!(matches!(
            verify_transform_with_bank(&x, &d4, &bank, &Tolerances::default()),
            Err(AwtError::CorruptBank(_))
        ));
        let small = filter_bank_for(&haar, 8).unwrap();
        assert!(matches!(
            verify_transform_with_bank(&x, &haar, &small, &Tolerances::default()),
            Err(AwtError::BankMismatch { .. })
        ));
    }

}
