//! Single-particle spectrum, half-filled ground state, and the
//! correlation matrix C_ij = <c†_i c_j>.
//!
//! The hopping matrix has zero diagonal on a bipartite chain, so its
//! spectrum is particle-hole symmetric: modes come in ±ε pairs and the
//! half-filled ground state occupies exactly the L negative-energy modes.
//! The ground state is a Slater determinant, fully described by the
//! correlation matrix (an orthogonal projector onto the occupied modes).

use crate::chain::{hopping_matrix, ChainSpec, DEGENERACY_RTOL};
use crate::error::{Error, Result};
use crate::linalg::{eigh_tridiagonal, eigvalsh_tridiagonal, Eigh, Matrix};

/// Eigenmodes of the hopping matrix: `energies` ascending, `modes[k]` the
/// unit-norm eigenvector of `energies[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub modes: Vec<Vec<f64>>,
}

/// The L occupied mode indices and the two energies straddling the Fermi
/// level.
#[derive(Debug, Clone)]
pub struct OccupiedModes {
    pub indices: Vec<usize>,
    pub below: f64,
    pub above: f64,
}

/// Diagonalize the chain's hopping matrix.
pub fn single_particle_spectrum(spec: &ChainSpec) -> Result<Spectrum> {
    let t = hopping_matrix(spec)?;
    let Eigh { values, vectors } = eigh_tridiagonal(&t)?;
    Ok(Spectrum { energies: values, modes: vectors })
}

/// Eigenvalues only; enough for gaps and ground-state energies.
pub fn single_particle_energies(spec: &ChainSpec) -> Result<Vec<f64>> {
    let t = hopping_matrix(spec)?;
    eigvalsh_tridiagonal(&t)
}

/// Fermi gap ε_(L+1) − ε_(L) of an ascending 2L-mode spectrum.
pub fn single_particle_gap(energies: &[f64]) -> Result<f64> {
    let n = energies.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "gap needs an even mode count >= 2, got {n}"
        )));
    }
    Ok(energies[n / 2] - energies[n / 2 - 1])
}

/// Half filling: occupy the L lowest modes.
///
/// A Fermi gap below `DEGENERACY_RTOL` times the magnitude of the levels
/// adjacent to the Fermi point is reported as a degeneracy error rather
/// than broken arbitrarily. The comparison is local, not against the
/// spectral radius: the graded chain's levels shrink exponentially toward
/// the centre of the spectrum, yet the tridiagonal eigensolver resolves
/// them to relative precision, so a gap of 1e-19 between levels of
/// magnitude 1e-19 is a perfectly sharp Fermi point.
pub fn ground_state_occupation(spectrum: &Spectrum) -> Result<OccupiedModes> {
    let n = spectrum.energies.len();
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidInput(format!(
            "occupation needs an even mode count, got {n}"
        )));
    }
    let l = n / 2;
    let gap = spectrum.energies[l] - spectrum.energies[l - 1];
    let scale = spectrum.energies[l]
        .abs()
        .max(spectrum.energies[l - 1].abs());
    if gap <= DEGENERACY_RTOL * scale {
        return Err(Error::Numerical(format!(
            "degenerate Fermi level: gap {gap:e} at most {DEGENERACY_RTOL:e} of the Fermi-level magnitude {scale:e}"
        )));
    }
    Ok(OccupiedModes {
        indices: (0..l).collect(),
        below: spectrum.energies[l - 1],
        above: spectrum.energies[l],
    })
}

/// Ground-state energy at half filling: sum of the L lowest mode energies.
pub fn ground_state_energy(energies: &[f64]) -> Result<f64> {
    let n = energies.len();
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidInput(format!(
            "ground-state energy needs an even mode count, got {n}"
        )));
    }
    Ok(energies[..n / 2].iter().sum())
}

/// Correlation matrix C_ij = Σ_{k∈Ω} v_{k,i} v_{k,j} over occupied modes.
pub fn correlation_matrix(spectrum: &Spectrum, occupied: &OccupiedModes) -> Result<Matrix> {
    let n = spectrum.energies.len();
    for &k in &occupied.indices {
        if k >= n {
            return Err(Error::InvalidInput(format!(
                "occupied mode index {k} out of range for {n} modes"
            )));
        }
    }
    let mut c = Matrix::zeros(n);
    for &k in &occupied.indices {
        let v = &spectrum.modes[k];
        for i in 0..n {
            let vi = v[i];
            for j in i..n {
                c.add_at(i, j, vi * v[j]);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            let upper = c.at(j, i);
            c.set(i, j, upper);
        }
    }
    Ok(c)
}

/// Spectrum → occupation → correlation matrix in one step.
pub fn correlation_matrix_for(spec: &ChainSpec) -> Result<Matrix> {
    let spectrum = single_particle_spectrum(spec)?;
    let occ = ground_state_occupation(&spectrum)?;
    correlation_matrix(&spectrum, &occ)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: usize, h: f64) -> ChainSpec {
        ChainSpec::new(l, h, 1.0).unwrap()
    }

    #[test]
    fn particle_hole_symmetry() {
        for &(l, h) in &[(1usize, 0.0), (3, 1.0), (5, 0.6), (4, 2.0)] {
            let w = single_particle_energies(&spec(l, h)).unwrap();
            let n = w.len();
            for k in 0..n {
                assert!(
                    (w[k] + w[n - 1 - k]).abs() < 1e-10,
                    "(L={l}, h={h}) k={k}: {} vs {}",
                    w[k],
                    w[n - 1 - k]
                );
            }
        }
    }

    #[test]
    fn occupation_takes_negative_modes() {
        let s = single_particle_spectrum(&spec(3, 1.0)).unwrap();
        let occ = ground_state_occupation(&s).unwrap();
        assert_eq!(occ.indices, vec![0, 1, 2]);
        assert!(occ.below < 0.0 && occ.above > 0.0);
        for &k in &occ.indices {
            assert!(s.energies[k] < 0.0);
        }
    }

    #[test]
    fn single_bond_gap_and_correlations() {
        let s = single_particle_spectrum(&spec(1, 0.3)).unwrap();
        assert!((single_particle_gap(&s.energies).unwrap() - 1.0).abs() < 1e-14);
        let occ = ground_state_occupation(&s).unwrap();
        let c = correlation_matrix(&s, &occ).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((c.at(i, j) - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn correlation_matrix_is_projector_with_trace_l() {
        for &(l, h) in &[(2usize, 0.0), (4, 0.9), (6, 2.0)] {
            let c = correlation_matrix_for(&spec(l, h)).unwrap();
            let n = c.n();
            let trace: f64 = (0..n).map(|i| c.at(i, i)).sum();
            assert!((trace - l as f64).abs() < 1e-9, "trace {trace} vs {l}");
            let mut max_dev = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    let mut cc = 0.0;
                    for k in 0..n {
                        cc += c.at(i, k) * c.at(k, j);
                    }
                    max_dev = max_dev.max((cc - c.at(i, j)).abs());
                    assert!((c.at(i, j) - c.at(j, i)).abs() < 1e-12);
                }
            }
            assert!(max_dev <= 1e-9, "idempotence deviation {max_dev}");
        }
    }

    #[test]
    fn ground_state_energy_sums_occupied() {
        let w = single_particle_energies(&spec(3, 3.0)).unwrap();
        let e0 = ground_state_energy(&w).unwrap();
        let neg: f64 = w.iter().filter(|&&x| x < 0.0).sum();
        assert!((e0 - neg).abs() < 1e-12);
        // Frozen value, L=3 h=3 (cross-checked against the many-body oracle).
        assert!((e0 - (-0.549_894_44)).abs() < 1e-7, "E0 = {e0}");
    }

    #[test]
    fn gap_decreases_with_l_at_fixed_h() {
        let mut last = f64::INFINITY;
        for l in [2usize, 4, 6, 8] {
            let w = single_particle_energies(&spec(l, 1.0)).unwrap();
            let gap = single_particle_gap(&w).unwrap();
            assert!(gap < last, "gap({l}) = {gap} not below {last}");
            last = gap;
        }
    }

    #[test]
    fn gap_tracks_sdrg_cascade_scale() {
        // h=3, L=4: the last SDRG coupling scale is e^{-(L-1)h}; the exact
        // gap should be within a factor 3 (order-of-magnitude agreement).
        let w = single_particle_energies(&spec(4, 3.0)).unwrap();
        let gap = single_particle_gap(&w).unwrap();
        let scale = (-9.0f64).exp();
        assert!(gap / scale > 1.0 / 3.0 && gap / scale < 3.0, "ratio {}", gap / scale);
    }
}
