//! Numerical laboratory for the exponentially graded ("rainbow")
//! free-fermion chain.
//!
//! A chain of `2L` sites carries nearest-neighbour hoppings that decay as
//! `e^{−h·d}` with the distance `d` of the bond from the centre. At `h = 0`
//! this is the critical homogeneous chain; as `h` grows the ground state
//! crosses over to a "rainbow" of concentric bonds whose half-chain
//! entanglement obeys a volume law. This crate computes that crossover
//! three independent ways and fits the resulting scaling laws:
//!
//! * [`spectral`] + [`entanglement`] — exact single-particle
//!   diagonalization and block entropies from ground-state correlation
//!   matrices (Wick's theorem);
//! * [`sdrg`] — the strong-disorder renormalization group, which decimates
//!   the strongest bond in log-coupling space and predicts bond-counting
//!   entropies;
//! * [`oracle`] — a brute-force many-body check in the full Fock space for
//!   small chains.
//!
//! [`fit`] extracts central charges from entropy scaling, [`continuum`]
//! evaluates the curved-background predictions (coordinate flattening map,
//! horizon temperature, weak-grading entropy law), and [`chain`] and
//! [`linalg`] hold the model definition and the dense symmetric
//! eigensolvers everything rests on.

// The linear-algebra kernels index loops so they read like the matrix
// formulas they implement; iterator rewrites obscure the symmetry there.
#![allow(clippy::needless_range_loop)]

pub mod chain;
pub mod continuum;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod oracle;
pub mod sdrg;
pub mod special;
pub mod spectral;

pub use chain::ChainSpec;
pub use error::{Error, Result};
