//! Brute-force many-body cross-check in the full Fock space.
//!
//! Everything else in this crate works in the one-particle sector and leans
//! on Wick's theorem. This module rebuilds small chains (at most
//! [`MAX_ORACLE_SITES`] sites) as explicit many-body problems — bitmask
//! basis, dense Hamiltonian, reduced density matrices — so the two routes
//! can be compared with no shared code path beyond the eigensolver.
//!
//! Conventions: bit i of a basis mask is the occupation of site i; basis
//! states are listed in increasing mask order at half filling. Hops are
//! nearest-neighbour only, so the Jordan–Wigner string between the two
//! sites is empty and matrix elements carry no fermionic sign.

use crate::chain::{ChainSpec, DEGENERACY_RTOL};
use crate::entanglement::ENTROPY_CUTOFF;
use crate::error::{Error, Result};
use crate::linalg::{eigh_dense, eigvalsh_dense, Matrix};

/// Largest chain (in sites, 2L) the many-body oracle will build. C(12,6) =
/// 924 states keeps dense diagonalization instant.
pub const MAX_ORACLE_SITES: usize = 12;

/// Half-filled Fock basis over `2l` sites.
#[derive(Debug, Clone)]
pub struct FockBasis {
    sites: usize,
    states: Vec<u32>,
    /// mask → basis index, `usize::MAX` for masks outside the sector.
    index: Vec<usize>,
}

impl FockBasis {
    pub fn half_filling(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidInput("chain half-size must be >= 1".into()));
        }
        let sites = 2 * l;
        if sites > MAX_ORACLE_SITES {
            return Err(Error::InvalidInput(format!(
                "many-body oracle limited to {MAX_ORACLE_SITES} sites, got {sites}"
            )));
        }
        let mut states = Vec::new();
        let mut index = vec![usize::MAX; 1 << sites];
        for mask in 0..(1u32 << sites) {
            if mask.count_ones() as usize == l {
                index[mask as usize] = states.len();
                states.push(mask);
            }
        }
        Ok(FockBasis { sites, states, index })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    fn position(&self, mask: u32) -> usize {
        self.index[mask as usize]
    }
}

/// Dense half-filling Hamiltonian `H = −Σ_i J_i/2 (c†_i c_{i+1} + h.c.)`.
pub fn build_hamiltonian(spec: &ChainSpec, basis: &FockBasis) -> Result<Matrix> {
    if basis.sites != spec.sites() {
        return Err(Error::InvalidInput(format!(
            "basis covers {} sites but the chain has {}",
            basis.sites,
            spec.sites()
        )));
    }
    let couplings = crate::chain::coupling_profile(spec)?;
    let dim = basis.dimension();
    let mut ham = Matrix::zeros(dim);
    for (col, &mask) in basis.states.iter().enumerate() {
        for (i, &j) in couplings.iter().enumerate() {
            let pair = (1u32 << i) | (1u32 << (i + 1));
            let occ = mask & pair;
            // Exactly one of the two sites occupied: the hop is allowed,
            // and adjacency means no Jordan-Wigner sign.
            if occ != 0 && occ != pair {
                let row = basis.position(mask ^ pair);
                ham.add_at(row, col, -j / 2.0);
            }
        }
    }
    Ok(ham)
}

/// Many-body ground state: energy and real amplitudes over the basis.
#[derive(Debug, Clone)]
pub struct ManyBodyGround {
    pub energy: f64,
    pub amplitudes: Vec<f64>,
}

/// Diagonalize the half-filling sector and return its ground state.
/// Rejects chains whose many-body gap is below the degeneracy threshold,
/// since then "the" ground state is not well defined.
pub fn ground_state(spec: &ChainSpec, basis: &FockBasis) -> Result<ManyBodyGround> {
    let ham = build_hamiltonian(spec, basis)?;
    let eig = eigh_dense(&ham)?;
    if eig.values.len() > 1 {
        let radius = eig.values[0].abs().max(eig.values.last().unwrap().abs());
        if eig.values[1] - eig.values[0] < DEGENERACY_RTOL * radius {
            return Err(Error::Numerical(
                "degenerate many-body ground state".into(),
            ));
        }
    }
    Ok(ManyBodyGround {
        energy: eig.values[0],
        amplitudes: eig.vectors[0].clone(),
    })
}

/// Reduced density matrix of the left prefix block (sites `0..ell`), in the
/// natural sub-mask basis of dimension `2^ell`.
///
/// For a prefix block the canonical site ordering already lists block sites
/// before environment sites, so tracing out the environment produces no
/// fermionic reordering signs.
pub fn reduced_density_matrix(
    ground: &ManyBodyGround,
    basis: &FockBasis,
    ell: usize,
) -> Result<Matrix> {
    if ell == 0 || ell >= basis.sites {
        return Err(Error::InvalidInput(format!(
            "block size must lie in 1..{}, got {ell}",
            basis.sites - 1
        )));
    }
    if ground.amplitudes.len() != basis.dimension() {
        return Err(Error::InvalidInput(
            "state vector does not match the basis dimension".into(),
        ));
    }
    let dim_b = 1usize << ell;
    let sub_mask = (dim_b - 1) as u32;
    // Group amplitudes by environment configuration.
    let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); 1 << (basis.sites - ell)];
    for (pos, &mask) in basis.states.iter().enumerate() {
        let amp = ground.amplitudes[pos];
        groups[(mask >> ell) as usize].push(((mask & sub_mask) as usize, amp));
    }
    let mut rho = Matrix::zeros(dim_b);
    for group in &groups {
        for &(a, va) in group {
            for &(b, vb) in group {
                rho.add_at(a, b, va * vb);
            }
        }
    }
    Ok(rho)
}

/// Rényi entropy of the left prefix block straight from the reduced density
/// matrix; `n = 1` gives the von Neumann entropy.
pub fn reduced_entropy(
    ground: &ManyBodyGround,
    basis: &FockBasis,
    ell: usize,
    n: f64,
) -> Result<f64> {
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Renyi order must be positive and finite, got {n}"
        )));
    }
    let rho = reduced_density_matrix(ground, basis, ell)?;
    let mut probs = eigvalsh_dense(&rho)?;
    let mut trace = 0.0;
    for p in probs.iter_mut() {
        if *p < -1e-9 {
            return Err(Error::Numerical(format!(
                "reduced density matrix has negative eigenvalue {p}"
            )));
        }
        *p = p.clamp(0.0, 1.0);
        trace += *p;
    }
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "reduced density matrix trace {trace} deviates from 1"
        )));
    }
    if (n - 1.0).abs() < 1e-12 {
        Ok(probs
            .iter()
            .filter(|&&p| p > ENTROPY_CUTOFF)
            .map(|&p| -p * p.ln())
            .sum())
    } else {
        let sum: f64 = probs.iter().map(|&p| p.powf(n)).sum();
        Ok(sum.ln() / (1.0 - n))
    }
}

/// The ideal rainbow state: concentric singlet-like bonds `(L−k, L−1+k)`,
/// k = 1..L, with alternating symmetric/antisymmetric combinations starting
/// symmetric at the centre. Returns amplitudes over `basis`, unit norm.
pub fn rainbow_state(basis: &FockBasis) -> Result<Vec<f64>> {
    let l = basis.sites / 2;
    let mut amps = vec![0.0f64; basis.dimension()];
    let norm = 0.5f64.powi(l as i32 / 2) * if l % 2 == 1 { 0.5f64.sqrt() } else { 1.0 };
    // One creation operator per bond, applied innermost bond first; each
    // bond contributes either its left site a_k or its right site b_k.
    for choice in 0..(1u32 << l) {
        let mut sites = Vec::with_capacity(l);
        let mut coeff = norm;
        for k in 1..=l {
            let take_right = choice & (1 << (k - 1)) != 0;
            if take_right {
                sites.push(l - 1 + k);
                // Antisymmetric bonds (even k) pick up a minus sign on the
                // right site.
                if k % 2 == 0 {
                    coeff = -coeff;
                }
            } else {
                sites.push(l - k);
            }
        }
        // Parity of the permutation sorting the creation operators into
        // canonical ascending order.
        let mut inversions = 0usize;
        for i in 0..sites.len() {
            for j in (i + 1)..sites.len() {
                if sites[i] > sites[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 1 {
            coeff = -coeff;
        }
        let mask: u32 = sites.iter().map(|&s| 1u32 << s).sum();
        amps[basis.position(mask)] = coeff;
    }
    Ok(amps)
}

/// |⟨rainbow | ground⟩| for a small chain.
pub fn rainbow_overlap(spec: &ChainSpec) -> Result<f64> {
    let basis = FockBasis::half_filling(spec.l)?;
    let ground = ground_state(spec, &basis)?;
    let rainbow = rainbow_state(&basis)?;
    let dot: f64 = rainbow
        .iter()
        .zip(&ground.amplitudes)
        .map(|(a, b)| a * b)
        .sum();
    Ok(dot.abs())
}
