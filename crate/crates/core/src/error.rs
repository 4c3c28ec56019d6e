use thiserror::Error;

/// Everything that can go wrong in the transform library.
#[derive(Debug, Error)]
pub enum AwtError {
    #[error("invalid length {n}: {reason}")]
    InvalidLength { n: usize, reason: &'static str },

    #[error("unknown wavelet `{0}` (supported: Haar, Daub4, Daub8)")]
    UnknownWavelet(String),

    #[error("cannot decompose a length-{n} signal into {levels} levels (at most {max})")]
    InvalidLevels { n: usize, levels: usize, max: usize },

    #[error("inconsistent wavelet coefficients: {0}")]
    InvalidCoeffs(String),

    #[error("scale {scale} out of range 0..={max}")]
    InvalidScale { scale: usize, max: usize },

    #[error("inconsistent scale spectra: {0}")]
    InvalidSpectra(String),

    #[error("filter bank is for size {bank}, input has size {input}")]
    BankMismatch { bank: String, input: String },

    #[error("corrupt filter bank file: {0}")]
    CorruptBank(String),

    #[error("invalid window {start}..{end} for a length-{n} signal")]
    InvalidWindow { start: usize, end: usize, n: usize },

    #[error("sample {index} is not finite")]
    NonFinite { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AwtError> = std::result::Result<T, E>;
