//! `rainbow` — command-line front end for the graded-chain entanglement
//! laboratory: spectra, entropy profiles, SDRG runs, scaling fits,
//! continuum predictions, and bulk parameter sweeps, emitted as CSV or
//! JSON for external plotting.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure
//! (including partially failed sweeps), 3 exponential range guard.

mod commands;
mod emit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rainbow_core::Error;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Entanglement of the exponentially graded free-fermion chain",
    max_term_width = 100
)]
struct Cli {
    /// Overall coupling scale J0 (entropies do not depend on it).
    #[arg(long = "J0", global = true, default_value_t = 1.0)]
    j0: f64,

    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Single-particle spectrum: mode energies, occupations, Fermi gap.
    Spectrum(SpectrumArgs),
    /// Block entanglement entropies of the ground state.
    Entropy(EntropyArgs),
    /// Strong-disorder RG: valence-bond state and arc diagram.
    Sdrg(SdrgArgs),
    /// Fit an entropy scaling law to a CSV produced by entropy or sweep.
    Fit(FitArgs),
    /// Compare exact half-chain entropies against the weak-grading
    /// continuum prediction.
    Predict(PredictArgs),
    /// Bulk half-chain entropy sweep over chain sizes and gradings.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// Chain half-size L (the chain has 2L sites).
    #[arg(long = "L")]
    l: usize,
    /// Inhomogeneity parameter h >= 0.
    #[arg(long)]
    h: f64,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long = "L")]
    l: usize,
    #[arg(long)]
    h: f64,
    /// Renyi order n (n = 1 is the von Neumann entropy).
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Emit only the half-chain block instead of the full profile.
    #[arg(long)]
    half: bool,
}

#[derive(Args)]
struct SdrgArgs {
    #[arg(long = "L")]
    l: usize,
    #[arg(long)]
    h: f64,
}

#[derive(Args)]
struct FitArgs {
    /// Scaling model to fit.
    #[arg(long, value_enum)]
    model: FitModel,
    /// Input CSV with a header row; needs columns L and S (half-chain
    /// models) or ell and S (block model). Comment lines start with '#'.
    #[arg(long)]
    input: PathBuf,
    /// Finite-size power K in the oscillatory correction.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Renyi order of the fitted data (block model).
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Chain half-size the block profile belongs to (block model).
    #[arg(long = "L")]
    l: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitModel {
    /// S(L) = (c/6) ln L + c' + f (-1)^L L^-K at the half chain.
    CftHalf,
    /// Same basis along a fixed-z trajectory: (c(z), d(z), f(z)).
    ZFamily,
    /// S_n(ell) against the conformal chord at fixed chain size.
    BlockScaling,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    h: f64,
    /// Central charge entering the prediction.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Non-universal offset, e.g. from a homogeneous-chain fit.
    #[arg(long = "c-prime")]
    c_prime: f64,
    #[arg(long = "l-min")]
    l_min: usize,
    #[arg(long = "l-max")]
    l_max: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Chain half-sizes, comma-separated (e.g. 16,24,32).
    #[arg(long = "l-values", value_delimiter = ',')]
    l_values: Option<Vec<usize>>,
    /// Gradings h, comma-separated. Mutually exclusive with --z-values.
    #[arg(long = "h-values", value_delimiter = ',', allow_hyphen_values = true)]
    h_values: Option<Vec<f64>>,
    /// Effective sizes z = hL, comma-separated (h = z/L per chain).
    #[arg(long = "z-values", value_delimiter = ',', allow_hyphen_values = true)]
    z_values: Option<Vec<f64>>,
    /// Renyi orders, comma-separated.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<f64>>,
    /// Entropy method for each point.
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Exact,
    Sdrg,
    Both,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outputs, not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidInput(_) => 1,
                Error::Numerical(_) => 2,
                Error::Underflow(_) => 3,
            })
        }
    }
}
