//! Block entanglement entropies from the correlation matrix.
//!
//! For a Slater-determinant ground state, the reduced density matrix of a
//! block B is determined by the eigenvalues ν_p of the restricted
//! correlation matrix C[B,B]: each mode contributes an independent
//! two-level system with occupation ν_p.  Von Neumann and Rényi entropies
//! are sums over these single-mode contributions; ν exponentially close
//! to 0 or 1 (cut bonds deep in the strong-disorder regime) contribute
//! nothing and are excluded by a cutoff rather than evaluated as 0·log 0.

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh_dense, Matrix};
use crate::spectral::correlation_matrix_for;

/// Occupations within this distance of 0 or 1 contribute no entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Block-spectrum eigenvalues may stray outside [0,1] by at most this
/// much before being reported as a numerical-consistency failure.
pub const VALIDITY_WINDOW: f64 = 1e-9;

/// A set of site indices, sorted and duplicate-free.  Contiguity is not
/// required — the correlation-matrix method does not care.
#[derive(Debug, Clone)]
pub struct Block {
    sites: Vec<usize>,
}

impl Block {
    pub fn new(mut sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidInput("empty block".into()));
        }
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate site in block".into()));
        }
        Ok(Block { sites })
    }

    /// Left block {0, …, ℓ-1}.
    pub fn left(ell: usize) -> Result<Self> {
        Block::new((0..ell).collect())
    }

    /// Left half of a 2L-site chain.
    pub fn half_chain(l: usize) -> Result<Self> {
        Block::left(l)
    }

    /// All sites of a 2L-site chain not in this block.
    pub fn complement(&self, sites_total: usize) -> Result<Self> {
        let mut mask = vec![true; sites_total];
        for &s in &self.sites {
            if s >= sites_total {
                return Err(Error::InvalidInput(format!(
                    "block site {s} outside chain of {sites_total} sites"
                )));
            }
            mask[s] = false;
        }
        Block::new(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &keep)| keep.then_some(i))
                .collect(),
        )
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Eigenvalues ν_p of C[B,B], ascending, clamped to [0,1] within
/// `validity_window`.
pub fn block_spectrum_with(c: &Matrix, b: &Block, validity_window: f64) -> Result<Vec<f64>> {
    if let Some(&max) = b.sites().last() {
        if max >= c.n() {
            return Err(Error::InvalidInput(format!(
                "block site {max} outside {}-site correlation matrix",
                c.n()
            )));
        }
    }
    let sub = c.submatrix(b.sites());
    let mut nu = eigvalsh_dense(&sub)?;
    for v in nu.iter_mut() {
        if *v < -validity_window || *v > 1.0 + validity_window {
            return Err(Error::Numerical(format!(
                "correlation eigenvalue {v} outside [0,1] beyond the {validity_window:e} window"
            )));
        }
        *v = v.clamp(0.0, 1.0);
    }
    Ok(nu)
}

/// [`block_spectrum_with`] at the default validity window.
pub fn block_spectrum(c: &Matrix, b: &Block) -> Result<Vec<f64>> {
    block_spectrum_with(c, b, VALIDITY_WINDOW)
}

/// Von Neumann entropy −Σ [ν ln ν + (1−ν) ln(1−ν)] over a block spectrum.
pub fn von_neumann_from_spectrum_with(nu: &[f64], cutoff: f64) -> f64 {
    nu.iter()
        .filter(|&&v| v > cutoff && 1.0 - v > cutoff)
        .map(|&v| -v * v.ln() - (1.0 - v) * (1.0 - v).ln())
        .sum()
}

/// Rényi entropy (1/(1−n))·Σ ln[ν^n + (1−ν)^n]; n = 1 delegates to the
/// von Neumann limit.
pub fn renyi_from_spectrum_with(nu: &[f64], n: f64, cutoff: f64) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "Rényi order must be positive, got {n}"
        )));
    }
    if n == 1.0 {
        return Ok(von_neumann_from_spectrum_with(nu, cutoff));
    }
    let sum: f64 = nu
        .iter()
        .filter(|&&v| v > cutoff && 1.0 - v > cutoff)
        .map(|&v| (v.powf(n) + (1.0 - v).powf(n)).ln())
        .sum();
    Ok(sum / (1.0 - n))
}

/// Von Neumann entropy of block B in the state described by C.
pub fn von_neumann_entropy(c: &Matrix, b: &Block) -> Result<f64> {
    Ok(von_neumann_from_spectrum_with(
        &block_spectrum(c, b)?,
        ENTROPY_CUTOFF,
    ))
}

/// Rényi entropy of order n (n = 1 → von Neumann) of block B.
pub fn renyi_entropy(c: &Matrix, b: &Block, n: f64) -> Result<f64> {
    renyi_from_spectrum_with(&block_spectrum(c, b)?, n, ENTROPY_CUTOFF)
}

/// Entropy samples S(ℓ) for left blocks ℓ = 1..2L-1 at Rényi order n.
#[derive(Debug, Clone)]
pub struct EntropyProfile {
    pub samples: Vec<(usize, f64)>,
    pub spec: ChainSpec,
    pub n: f64,
}

/// Left-block entropy profile from a single diagonalization.
///
/// For ℓ > L the complement (suffix) block is diagonalized instead: the
/// global state is pure, so S(B) = S(B̄), and the smaller submatrix keeps
/// the profile O(L⁴) overall.
pub fn entropy_profile(spec: &ChainSpec, n: f64) -> Result<EntropyProfile> {
    let c = correlation_matrix_for(spec)?;
    let sites = spec.sites();
    let mut samples = Vec::with_capacity(sites - 1);
    for ell in 1..sites {
        let block = if ell <= spec.l {
            Block::left(ell)?
        } else {
            Block::new((ell..sites).collect())?
        };
        samples.push((ell, renyi_entropy(&c, &block, n)?));
    }
    Ok(EntropyProfile { samples, spec: *spec, n })
}
