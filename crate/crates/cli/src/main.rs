mod commands;
mod error;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Averaged wavelet transform: shift-invariant multiscale decomposition of
/// periodic signals and images.
#[derive(Debug, Parser)]
#[command(name = "awt", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Wavelet family: Haar, Daub4 or Daub8.
    #[arg(long, global = true, default_value = "Haar")]
    pub wavelet: String,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "awt_out")]
    pub out: PathBuf,

    /// Scales to write, e.g. `0,2,4-6`; 0 is the DC term. Default: all.
    #[arg(long, global = true)]
    pub scales: Option<String>,

    /// Absolute tolerance for unit-amplitude input, scaled by max(1, max|x|).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Directory of cached filter bank files.
    #[arg(long, global = true)]
    pub bank_cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a 1-D signal (CSV, one value per line) into DC and scale spectra.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Write the filter bank kernels for a size `N` or `HxW`, origin centred.
    /// Scales 1..=k by default; add 0 to `--scales` for the DC kernel.
    Filters {
        #[arg(long)]
        size: String,
        /// Decomposition depth for 2-D banks (default: automatic).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Run the invariant checks on a signal, or on the built-in suite.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Decompose a PGM image (P2 or P5) into DC and scale spectra.
    Image {
        #[arg(long)]
        input: PathBuf,
        /// Decomposition depth (default: automatic).
        #[arg(long)]
        levels: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Decompose { input } => commands::decompose(c, input),
        Command::Filters { size, levels } => commands::filters(c, size, *levels),
        Command::Verify { input } => commands::verify(c, input.as_deref()),
        Command::Image { input, levels } => commands::image(c, input, *levels),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
