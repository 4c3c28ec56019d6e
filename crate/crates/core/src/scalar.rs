//! Scalar abstraction shared by every transform in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating point sample type: `f32` or `f64`.
///
/// Everything in the crate is generic over this trait. The `f64` aliases at the
/// crate root are what the CLI and the tolerances in the docs refer to.
pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into this type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant must be representable")
    }

    /// Widens to `f64` (lossless for both supported types).
    fn to_f64_lossless(self) -> f64 {
        self.to_f64().expect("finite float converts to f64")
    }

    /// Size-aware rounding slack, `n * eps`, used for internal sanity checks.
    fn slack(n: usize) -> Self {
        Self::epsilon() * Self::lit(n.max(1) as f64)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + FftNum
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Largest absolute elementwise difference between two equally sized slices.
pub fn max_abs_diff<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// Largest absolute value in a slice, zero when empty.
pub fn max_abs<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// Arithmetic mean with a sequential left-to-right sum.
pub fn mean<T: Real>(a: &[T]) -> T {
    let mut acc = T::zero();
    for &v in a {
        acc = acc + v;
    }
    acc / T::lit(a.len() as f64)
}

/// Sequential dot product.
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc = acc + x * y;
    }
    acc
}
