//! Error taxonomy shared across the crate.
//!
//! Three families, matching the command-line exit-code contract:
//! invalid input (usage), numerical failure (convergence, degeneracy,
//! rank deficiency), and the exponential-range guard (couplings or map
//! values leaving the representable double range).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside an operation's documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical procedure could not certify its result: eigensolver
    /// non-convergence, degenerate Fermi level or ground state, rank
    /// deficiency in a least-squares design, or an eigenvalue outside
    /// its validity window.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Exponential-range guard: the requested parameters push e^{±x}
    /// outside double precision (couplings underflow for large h·L, or
    /// the continuum coordinate map overflows for large h·|x|).
    #[error("exponential range guard: {0}")]
    Underflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
