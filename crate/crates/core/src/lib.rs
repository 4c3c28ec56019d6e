//! Averaged wavelet transform (AWT).
//!
//! A linear, circularly shift-invariant multiscale decomposition. Each scale
//! spectrum is the average, over every circular shift of the input, of the
//! aligned wavelet detail projection at that scale. Because the result is
//! linear and shift invariant it is also a bank of symmetric FIR filters, one
//! per scale, so the fast path is a set of circular convolutions.
//!
//! The library is generic over the sample type ([`Real`], `f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod analysis;
pub mod bank_io;
pub mod conv;
pub mod dwt;
pub mod error;
pub mod filterbank;
pub mod reference;
pub mod scalar;
pub mod signal;
pub mod wavelet;

pub use error::{AwtError, Result};
pub use scalar::Real;
pub use wavelet::{max_levels, wavelet_filters, WaveletKind};

pub type Signal1D = signal::Signal<f64>;
pub type Image2D = signal::Image<f64>;
pub type WaveletSpec = wavelet::WaveletSpec<f64>;
pub type WaveletCoeffs = dwt::WaveletCoeffs<f64>;
pub type ScaleSpectra = reference::ScaleSpectra<f64>;
pub type ScaleSpectra2D = reference::ScaleSpectra2D<f64>;
pub type AwtFilterBank = filterbank::AwtFilterBank<f64>;
pub type FilterBank2D = filterbank::FilterBank2D<f64>;
