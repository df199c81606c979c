//! Fermionic Dasgupta–Ma strong-disorder renormalization group.
//!
//! Repeatedly bond the pair of sites joined by the strongest coupling and
//! replace the two couplings adjacent to it by the second-order effective
//! coupling J̃ = −J_L·J_R/J_max.  Magnitudes live in the log domain with a
//! separate sign: on the rainbow chain the relevant scales reach e^{-hL}
//! and would underflow linear arithmetic long before the physics runs out.
//! The output is a valence-bond state — a perfect matching of the sites,
//! each pair in the bonding (J̃ > 0) or antibonding (J̃ < 0) orbital — and
//! block entropies are log 2 per bond cut by the block boundary.
//!
//! For the rainbow profile the RG closes in a cascade: the k-th decimation
//! bonds the mirror pair (L-k, L-1+k) at log scale ln J0 − (k−1)h with
//! strictly alternating sign, starting bonding at the center.

use crate::chain::{log_coupling_profile, ChainSpec};
use crate::entanglement::Block;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::LN_2;

/// Two-site orbital type selected by the sign of the effective coupling:
/// the ground state of −(J/2)(c†c + h.c.) is bonding for J > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondType {
    Bonding,
    Antibonding,
}

impl BondType {
    pub fn as_str(self) -> &'static str {
        match self {
            BondType::Bonding => "bonding",
            BondType::Antibonding => "antibonding",
        }
    }
}

/// One decimated pair: sites `a < b`, orbital type, and the log magnitude
/// of the coupling that bonded them.
#[derive(Debug, Clone)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub bond_type: BondType,
    pub log_scale: f64,
}

/// The full RG output: bonds in decimation order, covering every site
/// exactly once.
#[derive(Debug, Clone)]
pub struct ValenceBondState {
    pub bonds: Vec<Bond>,
    pub sites: usize,
}

#[derive(Debug)]
struct Coupling {
    log_mag: f64,
    sign: i8,
    left: usize,
    right: usize,
    prev: Option<usize>,
    next: Option<usize>,
    alive: bool,
}

struct HeapEntry {
    log_mag: f64,
    left: usize,
    id: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on log magnitude; ties decimate the leftmost coupling
        // first (then oldest id) for full determinism.
        self.log_mag
            .total_cmp(&other.log_mag)
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Run the RG on signed couplings given as (log|J|, sign of J); coupling i
/// joins sites (i, i+1).
pub fn run_sdrg_signed(log_mags: &[f64], signs: &[i8]) -> Result<ValenceBondState> {
    if log_mags.is_empty() {
        return Err(Error::InvalidInput("empty coupling profile".into()));
    }
    if log_mags.len() != signs.len() {
        return Err(Error::InvalidInput(format!(
            "{} log magnitudes but {} signs",
            log_mags.len(),
            signs.len()
        )));
    }
    if log_mags.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite log magnitude".into()));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidInput("signs must be ±1".into()));
    }
    let sites = log_mags.len() + 1;
    if !sites.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "valence-bond covering needs an even site count, got {sites}"
        )));
    }

    let mut couplings: Vec<Coupling> = (0..log_mags.len())
        .map(|i| Coupling {
            log_mag: log_mags[i],
            sign: signs[i],
            left: i,
            right: i + 1,
            prev: (i > 0).then(|| i - 1),
            next: (i + 1 < log_mags.len()).then_some(i + 1),
            alive: true,
        })
        .collect();
    let mut heap: BinaryHeap<HeapEntry> = couplings
        .iter()
        .enumerate()
        .map(|(id, c)| HeapEntry { log_mag: c.log_mag, left: c.left, id })
        .collect();

    let mut bonds = Vec::with_capacity(sites / 2);
    while let Some(entry) = heap.pop() {
        let id = entry.id;
        if !couplings[id].alive {
            continue; // stale heap entry
        }
        couplings[id].alive = false;
        bonds.push(Bond {
            a: couplings[id].left,
            b: couplings[id].right,
            bond_type: if couplings[id].sign > 0 {
                BondType::Bonding
            } else {
                BondType::Antibonding
            },
            log_scale: couplings[id].log_mag,
        });
        match (couplings[id].prev, couplings[id].next) {
            (Some(p), Some(q)) => {
                let new_id = couplings.len();
                let merged = Coupling {
                    log_mag: couplings[p].log_mag + couplings[q].log_mag - couplings[id].log_mag,
                    sign: -couplings[p].sign * couplings[q].sign * couplings[id].sign,
                    left: couplings[p].left,
                    right: couplings[q].right,
                    prev: couplings[p].prev,
                    next: couplings[q].next,
                    alive: true,
                };
                couplings[p].alive = false;
                couplings[q].alive = false;
                if let Some(pp) = merged.prev {
                    couplings[pp].next = Some(new_id);
                }
                if let Some(qq) = merged.next {
                    couplings[qq].prev = Some(new_id);
                }
                heap.push(HeapEntry {
                    log_mag: merged.log_mag,
                    left: merged.left,
                    id: new_id,
                });
                couplings.push(merged);
            }
            (Some(p), None) => {
                couplings[p].alive = false;
                if let Some(pp) = couplings[p].prev {
                    couplings[pp].next = None;
                }
            }
            (None, Some(q)) => {
                couplings[q].alive = false;
                if let Some(qq) = couplings[q].next {
                    couplings[qq].prev = None;
                }
            }
            (None, None) => {}
        }
    }

    let mut seen = vec![false; sites];
    for bond in &bonds {
        for s in [bond.a, bond.b] {
            if seen[s] {
                return Err(Error::Numerical(format!(
                    "RG bookkeeping error: site {s} bonded twice"
                )));
            }
            seen[s] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Numerical("RG bookkeeping error: unbonded site".into()));
    }
    Ok(ValenceBondState { bonds, sites })
}

/// Run the RG on raw signed couplings J (nonzero); coupling i joins
/// sites (i, i+1).
pub fn run_sdrg(profile: &[f64]) -> Result<ValenceBondState> {
    if profile.iter().any(|&j| j == 0.0 || !j.is_finite()) {
        return Err(Error::InvalidInput(
            "couplings must be finite and nonzero".into(),
        ));
    }
    let logs: Vec<f64> = profile.iter().map(|j| j.abs().ln()).collect();
    let signs: Vec<i8> = profile.iter().map(|&j| if j > 0.0 { 1 } else { -1 }).collect();
    run_sdrg_signed(&logs, &signs)
}

/// Run the RG on a rainbow chain directly in the log domain (exact at any
/// h — no exponentials are ever formed, so the underflow guard that
/// limits exact diagonalization does not apply here).
pub fn run_sdrg_chain(spec: &ChainSpec) -> Result<ValenceBondState> {
    let logs = log_coupling_profile(spec);
    let signs = vec![1i8; logs.len()];
    run_sdrg_signed(&logs, &signs)
}

/// Number of bonds with exactly one endpoint in the block.
pub fn bond_count(vbs: &ValenceBondState, block: &Block) -> usize {
    let inside = |s: usize| block.sites().binary_search(&s).is_ok();
    vbs.bonds
        .iter()
        .filter(|b| inside(b.a) != inside(b.b))
        .count()
}

/// Bond-counting entropy n_B·log 2 of a block.
pub fn bond_count_entropy(vbs: &ValenceBondState, block: &Block) -> f64 {
    bond_count(vbs, block) as f64 * LN_2
}

/// True iff every bond joins a mirror pair (L-k, L-1+k), i.e. the state
/// is the concentric rainbow.
pub fn is_rainbow(vbs: &ValenceBondState) -> bool {
    vbs.bonds.iter().all(|b| b.a + b.b == vbs.sites - 1)
}

/// Bond-counting entropies for left blocks ℓ = 1..2L-1.
pub fn sdrg_entropy_profile(vbs: &ValenceBondState) -> Vec<(usize, f64)> {
    let mut delta = vec![0i64; vbs.sites + 1];
    for b in &vbs.bonds {
        let (lo, hi) = (b.a.min(b.b), b.a.max(b.b));
        // The bond crosses the cut after site l-1 for l in (lo, hi].
        delta[lo + 1] += 1;
        delta[hi + 1] -= 1;
    }
    let mut cuts = 0i64;
    (1..vbs.sites)
        .map(|ell| {
            cuts += delta[ell];
            (ell, cuts as f64 * LN_2)
        })
        .collect()
}

/// ASCII arc diagram: sites on the baseline, bonds as nested arcs drawn
/// with '-' (bonding) or '=' (antibonding).
pub fn arc_diagram(vbs: &ValenceBondState) -> String {
    let n = vbs.sites;
    let width = 2 * (n - 1) + 1;

    // Nesting level: 1 + deepest bond strictly inside.  SDRG on a path
    // never produces crossing bonds, so levels are well defined.
    let mut order: Vec<usize> = (0..vbs.bonds.len()).collect();
    order.sort_by_key(|&i| vbs.bonds[i].b - vbs.bonds[i].a);
    let mut level = vec![1usize; vbs.bonds.len()];
    for (pos, &i) in order.iter().enumerate() {
        let (a, b) = (vbs.bonds[i].a, vbs.bonds[i].b);
        for &j in &order[..pos] {
            if vbs.bonds[j].a > a && vbs.bonds[j].b < b {
                level[i] = level[i].max(level[j] + 1);
            }
        }
    }
    let max_level = level.iter().copied().max().unwrap_or(1);
    let site_row = max_level + 1;
    let mut grid = vec![vec![b' '; width]; site_row + 1];

    for i in 0..n {
        grid[site_row][2 * i] = b'o';
    }
    for (i, bond) in vbs.bonds.iter().enumerate() {
        let row = max_level - level[i];
        let (ca, cb) = (2 * bond.a, 2 * bond.b);
        let fill = match bond.bond_type {
            BondType::Bonding => b'-',
            BondType::Antibonding => b'=',
        };
        grid[row][ca] = b'+';
        grid[row][cb] = b'+';
        for c in ca + 1..cb {
            grid[row][c] = fill;
        }
        for r in grid.iter_mut().take(site_row).skip(row + 1) {
            r[ca] = b'|';
            r[cb] = b'|';
        }
    }

    let mut out = String::new();
    for row in grid {
        let line = String::from_utf8(row).expect("ascii grid");
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str("bonding: ---  antibonding: ===\n");
    out
}
