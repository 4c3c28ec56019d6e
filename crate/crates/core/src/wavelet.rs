//! Orthonormal wavelet filters and level bookkeeping.

#![allow(clippy::excessive_precision)]

use std::fmt;
use std::str::FromStr;

use crate::error::{AwtError, Result};
use crate::scalar::Real;

/// Eight-tap Daubechies scaling filter (four vanishing moments), sum normalised to sqrt(2).
const DAUB8_LOWPASS: [f64; 8] = [
    0.230_377_813_308_896_500_863_291_183_044_070_850_0,
    0.714_846_570_552_915_647_089_921_955_273_992_603_7,
    0.630_880_767_929_858_907_881_716_338_300_615_220_2,
    -0.027_983_769_416_859_854_211_413_747_180_075_385_41,
    -0.187_034_811_719_093_084_079_570_672_789_081_419_6,
    0.030_841_381_835_560_763_627_219_362_534_959_050_17,
    0.032_883_011_666_885_199_735_407_513_549_244_388_66,
    -0.010_597_401_785_069_032_104_883_208_524_027_229_18,
];

/// The wavelets this crate knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveletKind {
    Haar,
    Daub4,
    Daub8,
}

impl WaveletKind {
    pub const ALL: [WaveletKind; 3] = [WaveletKind::Haar, WaveletKind::Daub4, WaveletKind::Daub8];

    pub fn name(self) -> &'static str {
        match self {
            WaveletKind::Haar => "Haar",
            WaveletKind::Daub4 => "Daub4",
            WaveletKind::Daub8 => "Daub8",
        }
    }

    fn lowpass_f64(self) -> Vec<f64> {
        match self {
            WaveletKind::Haar => vec![std::f64::consts::FRAC_1_SQRT_2; 2],
            WaveletKind::Daub4 => {
                let s3 = 3f64.sqrt();
                let d = 4.0 * std::f64::consts::SQRT_2;
                vec![(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d]
            }
            WaveletKind::Daub8 => DAUB8_LOWPASS.to_vec(),
        }
    }

    pub fn spec<T: Real>(self) -> WaveletSpec<T> {
        let lowpass: Vec<T> = self.lowpass_f64().into_iter().map(T::lit).collect();
        let highpass = quadrature_mirror(&lowpass);
        WaveletSpec {
            kind: self,
            lowpass,
            highpass,
        }
    }
}

impl fmt::Display for WaveletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveletKind {
    type Err = AwtError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(WaveletKind::Haar),
            "daub4" => Ok(WaveletKind::Daub4),
            "daub8" => Ok(WaveletKind::Daub8),
            _ => Err(AwtError::UnknownWavelet(s.to_string())),
        }
    }
}

/// Analysis/synthesis filter pair of an orthonormal wavelet.
///
/// `highpass[i] = (-1)^i * lowpass[L-1-i]`. Because the basis is orthonormal
/// the same pair serves for analysis and synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec<T> {
    kind: WaveletKind,
    lowpass: Vec<T>,
    highpass: Vec<T>,
}

impl<T: Real> WaveletSpec<T> {
    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn lowpass(&self) -> &[T] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[T] {
        &self.highpass
    }

    pub fn taps(&self) -> usize {
        self.lowpass.len()
    }
}

/// Alternating flip of a scaling filter.
pub fn quadrature_mirror<T: Real>(lowpass: &[T]) -> Vec<T> {
    let l = lowpass.len();
    (0..l)
        .map(|i| {
            let v = lowpass[l - 1 - i];
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Looks up a wavelet by name (`Haar`, `Daub4`, `Daub8`; case-insensitive).
pub fn wavelet_filters<T: Real>(name: &str) -> Result<WaveletSpec<T>> {
    Ok(name.parse::<WaveletKind>()?.spec())
}

/// Number of dyadic levels a periodized DWT can take on a length-`n` signal:
/// the 2-adic valuation of `n`.
pub fn max_levels(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(AwtError::InvalidLength {
            n,
            reason: "need at least two samples",
        });
    }
    if !n.is_multiple_of(2) {
        return Err(AwtError::InvalidLength {
            n,
            reason: "odd lengths admit no decomposition level",
        });
    }
    Ok(n.trailing_zeros() as usize)
}
