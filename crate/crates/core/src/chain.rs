//! The rainbow chain: 2L fermionic sites with hopping amplitudes decaying
//! exponentially away from the central bond.
//!
//! Sites are indexed 0..2L-1 internally (array coordinates); the physics
//! literature's half-integer labels ±1/2, ±3/2, … appear only at I/O
//! boundaries via [`site_label`].  Bond i joins sites (i, i+1) and carries
//! strength J_m = J0·e^{-h·m}, where m is the half-integer distance of the
//! bond from the center (m = 0 for the central bond i = L-1).  The
//! single-particle Hamiltonian is the symmetric tridiagonal matrix with
//! zero diagonal and off-diagonal -J/2.

use crate::error::{Error, Result};

/// Largest exponent magnitude allowed before e^{-x} underflows double
/// precision (and e^{+x} overflows); used by the coupling and coordinate
/// map guards.
pub const EXP_GUARD: f64 = 700.0;

/// Relative spacing below which adjacent levels are treated as degenerate.
/// The single-particle Fermi check compares the gap against the magnitude
/// of the levels straddling it (see
/// [`crate::spectral::ground_state_occupation`]); the many-body oracle
/// compares against the spectral radius.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// Model parameters: half the site count L, inhomogeneity h, coupling
/// scale J0.  The effective size z = h·L is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub l: usize,
    pub h: f64,
    pub j0: f64,
}

impl ChainSpec {
    pub fn new(l: usize, h: f64, j0: f64) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidInput("L must be at least 1".into()));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(Error::InvalidInput(format!(
                "h must be finite and non-negative, got {h}"
            )));
        }
        if !j0.is_finite() || j0 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "J0 must be finite and positive, got {j0}"
            )));
        }
        Ok(ChainSpec { l, h, j0 })
    }

    /// Total number of sites, 2L.
    pub fn sites(&self) -> usize {
        2 * self.l
    }

    /// Effective size z = h·L, the single variable separating the weak
    /// (z ≪ 1) and strong (z ≫ 1) inhomogeneity regimes.
    pub fn effective_size(&self) -> f64 {
        self.h * self.l as f64
    }
}

/// Symmetric tridiagonal matrix in (diagonal, off-diagonal) form;
/// `off[i]` couples rows i and i+1.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Half-integer site label: i - L + 1/2, running -L+1/2 … L-1/2.
pub fn site_label(i: usize, l: usize) -> Result<f64> {
    if i >= 2 * l {
        return Err(Error::InvalidInput(format!(
            "site index {i} out of range for 2L = {}",
            2 * l
        )));
    }
    Ok(i as f64 - l as f64 + 0.5)
}

/// Half-integer distance m of bond i from the chain center: 0 for the
/// central bond (i = L-1), |i - (L-1)| - 1/2 otherwise.
pub fn bond_distance(i: usize, l: usize) -> f64 {
    if i == l - 1 {
        0.0
    } else {
        (i as f64 - (l - 1) as f64).abs() - 0.5
    }
}

/// Bond strengths J_i = J0·e^{-h·d(i)} for i = 0..2L-2.
///
/// h = 0 is special-cased to exact J0 entries.  Errors with the range
/// guard once the outermost coupling would underflow (h·(L-3/2) > 700);
/// the log-domain SDRG path remains available in that regime.
pub fn coupling_profile(spec: &ChainSpec) -> Result<Vec<f64>> {
    let n_bonds = 2 * spec.l - 1;
    if spec.h == 0.0 {
        return Ok(vec![spec.j0; n_bonds]);
    }
    let max_d = bond_distance(0, spec.l);
    if spec.h * max_d > EXP_GUARD {
        return Err(Error::Underflow(format!(
            "couplings underflow double precision: h·(L - 3/2) = {} > {EXP_GUARD}",
            spec.h * max_d
        )));
    }
    Ok((0..n_bonds)
        .map(|i| spec.j0 * (-spec.h * bond_distance(i, spec.l)).exp())
        .collect())
}

/// Log-magnitudes ln J_i = ln J0 - h·d(i), exact at any h (no exponential
/// round trip); the SDRG front end for deep strong-disorder runs.
pub fn log_coupling_profile(spec: &ChainSpec) -> Vec<f64> {
    let lj0 = spec.j0.ln();
    (0..2 * spec.l - 1)
        .map(|i| lj0 - spec.h * bond_distance(i, spec.l))
        .collect()
}

/// Single-particle hopping matrix: zero diagonal, off-diagonal -J_i/2.
pub fn hopping_matrix(spec: &ChainSpec) -> Result<Tridiagonal> {
    let bonds = coupling_profile(spec)?;
    Ok(Tridiagonal {
        diag: vec![0.0; spec.sites()],
        off: bonds.iter().map(|j| -j / 2.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: usize, h: f64) -> ChainSpec {
        ChainSpec::new(l, h, 1.0).unwrap()
    }

    #[test]
    fn site_labels_are_half_integers() {
        assert_eq!(site_label(0, 6).unwrap(), -5.5); // -11/2 on 12 sites
        assert_eq!(site_label(5, 6).unwrap(), -0.5); // center-left
        assert_eq!(site_label(11, 6).unwrap(), 5.5); // rightmost, L - 1/2
        assert!(site_label(12, 6).is_err());
    }

    #[test]
    fn uniform_profile_is_bit_exact() {
        let p = coupling_profile(&ChainSpec::new(2, 0.0, 1.3).unwrap()).unwrap();
        assert_eq!(p, vec![1.3, 1.3, 1.3]);
    }

    #[test]
    fn profile_matches_half_integer_exponents() {
        // L=2, h=2: J_{1/2} = e^{-1} on both sides of the central J0.
        let p = coupling_profile(&spec(2, 2.0)).unwrap();
        assert!((p[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(p[1], 1.0);
        assert_eq!(p[0], p[2]);

        // L=3, h=1: central J0, next pair e^{-1/2}, outer pair e^{-3/2}.
        let p = coupling_profile(&spec(3, 1.0)).unwrap();
        assert_eq!(p[2], 1.0);
        assert!((p[1] - (-0.5f64).exp()).abs() < 1e-15);
        assert!((p[0] - (-1.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn profile_mirror_symmetric_and_decreasing() {
        for &(l, h) in &[(5usize, 0.7), (8, 2.0), (3, 0.01)] {
            let p = coupling_profile(&spec(l, h)).unwrap();
            let n = p.len();
            for i in 0..n {
                assert_eq!(p[i], p[n - 1 - i], "mirror symmetry at bond {i}");
            }
            for i in 0..l - 1 {
                assert!(p[i] < p[i + 1], "growth toward center at bond {i}");
            }
        }
    }

    #[test]
    fn hopping_matrix_is_minus_half_profile() {
        let s = spec(2, 2.0);
        let t = hopping_matrix(&s).unwrap();
        let p = coupling_profile(&s).unwrap();
        assert_eq!(t.diag, vec![0.0; 4]);
        for (o, j) in t.off.iter().zip(&p) {
            assert_eq!(*o, -j / 2.0);
        }
        // L=1: single central bond.
        let t1 = hopping_matrix(&spec(1, 3.0)).unwrap();
        assert_eq!(t1.off, vec![-0.5]);
    }

    #[test]
    fn effective_size_is_hl() {
        assert_eq!(ChainSpec::new(100, 0.05, 1.0).unwrap().effective_size(), 5.0);
        assert_eq!(spec(9, 1.0).effective_size(), 9.0);
        assert_eq!(spec(7, 0.0).effective_size(), 0.0);
    }

    #[test]
    fn underflow_guard_trips() {
        let err = coupling_profile(&spec(1000, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Underflow(_)));
        // Log-domain profile stays available at the same parameters.
        let logs = log_coupling_profile(&spec(1000, 1.0));
        assert_eq!(logs.len(), 1999);
        assert_eq!(logs[999], 0.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(ChainSpec::new(0, 1.0, 1.0).is_err());
        assert!(ChainSpec::new(2, -0.5, 1.0).is_err());
        assert!(ChainSpec::new(2, 1.0, 0.0).is_err());
        assert!(ChainSpec::new(2, f64::NAN, 1.0).is_err());
    }
}
