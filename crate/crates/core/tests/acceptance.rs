//! Acceptance checklist for the laboratory.
//!
//! One test per criterion; each prints exactly one PASS/FAIL line with the
//! measured numbers (run with `cargo test --test acceptance -- --nocapture`
//! to see the lines for passing criteria too) and then asserts. Tolerances
//! are pinned in the assertions, not shared constants, so each criterion
//! reads as a self-contained statement.

use rainbow_core::chain::ChainSpec;
use rainbow_core::continuum::{coordinate_map, inverse_coordinate_map, predicted_entropy_weak};
use rainbow_core::entanglement::{
    entropy_profile, renyi_entropy, von_neumann_entropy, Block,
};
use rainbow_core::fit::{fit_cft_halfchain, fit_z_family};
use rainbow_core::oracle::{ground_state, reduced_entropy, FockBasis};
use rainbow_core::sdrg::{is_rainbow, run_sdrg_chain, sdrg_entropy_profile};
use rainbow_core::spectral::{
    correlation_matrix_for, single_particle_energies, single_particle_gap,
};
use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

fn report(id: u32, name: &str, pass: bool, details: &str) -> bool {
    println!(
        "criterion {id} ({name}): {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn spec(l: usize, h: f64) -> ChainSpec {
    ChainSpec::new(l, h, 1.0).unwrap()
}

fn half_chain_entropy(l: usize, h: f64) -> f64 {
    let c = correlation_matrix_for(&spec(l, h)).unwrap();
    von_neumann_entropy(&c, &Block::half_chain(l).unwrap()).unwrap()
}

#[test]
fn criterion_1_correlation_method_matches_fock_oracle() {
    let t0 = Instant::now();
    let mut max_dev = 0.0f64;
    for l in 1..=4usize {
        for &h in &[0.0, 0.5, 2.0] {
            let sp = spec(l, h);
            let corr = correlation_matrix_for(&sp).unwrap();
            let basis = FockBasis::half_filling(l).unwrap();
            let ground = ground_state(&sp, &basis).unwrap();
            for ell in 1..2 * l {
                let block = Block::left(ell).unwrap();
                for &n in &[1.0, 2.0] {
                    let s_corr = renyi_entropy(&corr, &block, n).unwrap();
                    let s_fock = reduced_entropy(&ground, &basis, ell, n).unwrap();
                    max_dev = max_dev.max((s_corr - s_fock).abs());
                }
            }
        }
    }
    let dt = t0.elapsed();
    let pass = max_dev <= 1e-8 && dt < Duration::from_secs(10);
    assert!(
        report(
            1,
            "correlation method vs many-body oracle",
            pass,
            &format!(
                "max |dS| = {max_dev:.3e} over 2L in {{2,4,6,8}}, h in {{0,0.5,2}}, \
                 all blocks, n in {{1,2}} (tol 1e-8); {dt:.2?} (cap 10 s)"
            ),
        ),
        "criterion 1 failed"
    );
}

#[test]
fn criterion_2_homogeneous_central_charge() {
    let t0 = Instant::now();
    let samples: Vec<(usize, f64)> =
        (16..=256).map(|l| (l, half_chain_entropy(l, 0.0))).collect();
    let fit = fit_cft_halfchain(&samples, 1.0).unwrap();
    let dt = t0.elapsed();
    let c = fit.central_charge;
    let pass = (0.95..=1.05).contains(&c) && dt < Duration::from_secs(120);
    assert!(
        report(
            2,
            "half-chain fit at h = 0 over L = 16..256",
            pass,
            &format!(
                "c = {c:.6} (window [0.95, 1.05]), c' = {:.4}, f = {:.4}, \
                 rms = {:.1e}; {dt:.2?} (cap 120 s)",
                fit.coefficients[1], fit.coefficients[2], fit.residual_rms
            ),
        ),
        "criterion 2 failed"
    );
}

#[test]
fn criterion_3_strong_grading_volume_law_and_staircase() {
    // Both clauses evaluated at the pinned point h = 4, L = 8 (z = 32).
    let profile = entropy_profile(&spec(8, 4.0), 1.0).unwrap();
    let s_half = profile.samples[7].1;
    let ratio = s_half / (8.0 * LN_2);
    let clause_volume = (0.98..=1.0).contains(&ratio);

    let vbs = run_sdrg_chain(&spec(8, 4.0)).unwrap();
    let stair = sdrg_entropy_profile(&vbs);
    let mut max_dev = 0.0f64;
    for (&(_, se), &(_, ss)) in profile.samples.iter().zip(stair.iter()) {
        max_dev = max_dev.max((se - ss).abs());
    }
    let clause_staircase = max_dev <= 0.05;

    let pass = clause_volume && clause_staircase;
    assert!(
        report(
            3,
            "volume law and SDRG staircase at h = 4, L = 8",
            pass,
            &format!(
                "S(L)/(L ln 2) = {ratio:.4} (window [0.98, 1.00]); \
                 max |S_exact - S_sdrg| = {max_dev:.3} nats (tol 0.05)"
            ),
        ),
        "criterion 3 failed"
    );
}

#[test]
fn criterion_4_sdrg_always_finds_the_rainbow() {
    let mut checked = 0usize;
    for l in 1..=64usize {
        for &h in &[0.05, 0.5, 1.0, 4.0] {
            let vbs = run_sdrg_chain(&spec(l, h)).unwrap();
            assert!(
                is_rainbow(&vbs),
                "criterion 4 failed: no rainbow at L={l}, h={h}"
            );
            checked += 1;
        }
    }
    assert!(report(
        4,
        "SDRG yields concentric bonds for every graded chain",
        true,
        &format!("{checked} chains, L = 1..64, h in {{0.05, 0.5, 1, 4}}"),
    ));
}

#[test]
fn criterion_5_z_family_effective_charge() {
    let t0 = Instant::now();
    let sizes: Vec<usize> = (16..=128).collect();
    let h0: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&l| (l, half_chain_entropy(l, 0.0)))
        .collect();
    let c0 = fit_cft_halfchain(&h0, 1.0).unwrap().central_charge;

    let mut cz = Vec::new();
    let mut d_ratio = Vec::new();
    for &z in &[5.0, 9.0] {
        let samples: Vec<(usize, f64)> = sizes
            .iter()
            .map(|&l| (l, half_chain_entropy(l, z / l as f64)))
            .collect();
        let fit = fit_z_family(&samples, 1.0).unwrap();
        cz.push(fit.central_charge);
        d_ratio.push(fit.coefficients[1] / z);
    }
    let dt = t0.elapsed();

    let clause_charge = cz[1] < cz[0] && cz[0] < c0 && (c0 - 1.0).abs() <= 0.05;
    // Pinned literal slope for the d(z) offset, not a use of 1/pi.
    #[allow(clippy::approx_constant)]
    const D_SLOPE: f64 = 0.318;
    let clause_offset = d_ratio.iter().all(|&r| (r - D_SLOPE).abs() <= 0.15 * D_SLOPE);
    let pass = clause_charge && clause_offset && dt < Duration::from_secs(300);
    assert!(
        report(
            5,
            "fixed-z trajectories over L = 16..128",
            pass,
            &format!(
                "c(9) = {:.4} < c(5) = {:.4} < c(0) = {c0:.4} [{}]; \
                 d(z)/z = {:.4}, {:.4} vs 0.318 +/- 15% [{}]; {dt:.2?} (cap 300 s)",
                cz[1],
                cz[0],
                if clause_charge { "ok" } else { "violated" },
                d_ratio[0],
                d_ratio[1],
                if clause_offset { "ok" } else { "violated" },
            ),
        ),
        "criterion 5 failed"
    );
}

#[test]
fn criterion_6_weak_grading_prediction() {
    // Offset calibrated once on the homogeneous chain, as in criterion 2.
    let h0: Vec<(usize, f64)> =
        (16..=256).map(|l| (l, half_chain_entropy(l, 0.0))).collect();
    let c_prime = fit_cft_halfchain(&h0, 1.0).unwrap().coefficients[1];

    let mut devs = Vec::new();
    for &h in &[0.01, 0.05] {
        let mut max_dev = 0.0f64;
        for l in 32..=256usize {
            let s_exact = half_chain_entropy(l, h);
            let s_pred = predicted_entropy_weak(l, h, 1.0, c_prime).unwrap();
            max_dev = max_dev.max((s_exact - s_pred).abs());
        }
        devs.push(max_dev);
    }
    let pass = devs.iter().all(|&d| d <= 0.1);
    assert!(
        report(
            6,
            "weak-grading entropy prediction over L = 32..256",
            pass,
            &format!(
                "max |S_exact - S_pred| = {:.4} (h = 0.01), {:.4} (h = 0.05) nats \
                 (tol 0.1), c = 1, c' = {c_prime:.4}",
                devs[0], devs[1]
            ),
        ),
        "criterion 6 failed"
    );
}

#[test]
fn criterion_7_gap_collapses_with_size() {
    let sizes = [4usize, 8, 16, 32];
    let mut all_monotone = true;
    let mut gaps_h2 = Vec::new();
    for &h in &[0.5, 1.0, 2.0] {
        let gaps: Vec<f64> = sizes
            .iter()
            .map(|&l| {
                single_particle_gap(&single_particle_energies(&spec(l, h)).unwrap()).unwrap()
            })
            .collect();
        all_monotone &= gaps.windows(2).all(|w| w[1] < w[0]);
        if h == 2.0 {
            gaps_h2 = gaps;
        }
    }
    // Frozen gaps at h = 2 pin the exponential cascade to 5%. The L = 32
    // value sits right on the SDRG estimate 0.88 e^{-2(L-1)} — resolving it
    // at all requires the locally scaled deflation test in the tridiagonal
    // eigensolver; a fixed absolute threshold would return noise near 1e-16.
    let frozen = [2.179e-3, 7.308e-7, 8.224e-14, 1.041e-27];
    let frozen_ok = gaps_h2
        .iter()
        .zip(frozen.iter())
        .all(|(&g, &f)| (g - f).abs() / f < 0.05);
    let pass = all_monotone && frozen_ok;
    assert!(
        report(
            7,
            "finite-size gap strictly decreasing in L",
            pass,
            &format!(
                "h in {{0.5, 1, 2}}, L in {{4, 8, 16, 32}}; gaps at h = 2: \
                 {:.3e}, {:.3e}, {:.3e}, {:.3e}",
                gaps_h2[0], gaps_h2[1], gaps_h2[2], gaps_h2[3]
            ),
        ),
        "criterion 7 failed"
    );
}

#[test]
fn criterion_8_property_suites() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const INSTANCES: usize = 100;
    let mut rng = StdRng::seed_from_u64(42);
    let mut suites: Vec<(&str, usize)> = Vec::new();

    // Suite 1: single-particle spectra are particle-hole symmetric.
    for _ in 0..INSTANCES {
        let l = rng.random_range(1..=12usize);
        let h = rng.random_range(0.0..2.0);
        let j0 = rng.random_range(0.5..2.0);
        let e = single_particle_energies(&ChainSpec::new(l, h, j0).unwrap()).unwrap();
        let radius = e.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let n = e.len();
        for k in 0..n {
            assert!(
                (e[k] + e[n - 1 - k]).abs() <= 1e-9 * radius,
                "particle-hole symmetry broken at L={l}, h={h}, k={k}"
            );
        }
    }
    suites.push(("particle-hole symmetry", INSTANCES));

    // Suite 2: the correlation matrix is a rank-L projector.
    for _ in 0..INSTANCES {
        let l = rng.random_range(1..=10usize);
        let h = rng.random_range(0.0..2.0);
        let c = correlation_matrix_for(&spec(l, h)).unwrap();
        let n = 2 * l;
        let mut trace = 0.0;
        let mut max_idem = 0.0f64;
        for i in 0..n {
            trace += c.at(i, i);
            for j in 0..n {
                let mut cij2 = 0.0;
                for k in 0..n {
                    cij2 += c.at(i, k) * c.at(k, j);
                }
                max_idem = max_idem.max((cij2 - c.at(i, j)).abs());
            }
        }
        assert!((trace - l as f64).abs() <= 1e-9, "trace C != L at L={l}, h={h}");
        assert!(max_idem <= 1e-9, "C^2 != C at L={l}, h={h}: {max_idem}");
    }
    suites.push(("correlation projector", INSTANCES));

    // Suite 3: entropies of complementary blocks coincide (pure state).
    for _ in 0..INSTANCES {
        let l = rng.random_range(1..=8usize);
        let h = rng.random_range(0.0..2.0);
        let c = correlation_matrix_for(&spec(l, h)).unwrap();
        let n = 2 * l;
        let size = rng.random_range(1..n);
        let mut sites: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = rng.random_range(i..n);
            sites.swap(i, j);
        }
        let block = Block::new(sites[..size].to_vec()).unwrap();
        let comp = block.complement(n).unwrap();
        let s = von_neumann_entropy(&c, &block).unwrap();
        let sc = von_neumann_entropy(&c, &comp).unwrap();
        assert!((s - sc).abs() <= 1e-8, "S(B) != S(B~) at L={l}, h={h}");
        let r = renyi_entropy(&c, &block, 2.0).unwrap();
        let rc = renyi_entropy(&c, &comp, 2.0).unwrap();
        assert!((r - rc).abs() <= 1e-8, "S_2(B) != S_2(B~) at L={l}, h={h}");
    }
    suites.push(("complement symmetry", INSTANCES));

    // Suite 4: Renyi entropies decrease with the order n.
    for _ in 0..INSTANCES {
        let l = rng.random_range(1..=8usize);
        let h = rng.random_range(0.0..2.0);
        let c = correlation_matrix_for(&spec(l, h)).unwrap();
        let ell = rng.random_range(1..2 * l);
        let block = Block::left(ell).unwrap();
        let orders = [0.5, 1.0, 2.0, 3.0];
        let entropies: Vec<f64> = orders
            .iter()
            .map(|&n| renyi_entropy(&c, &block, n).unwrap())
            .collect();
        for w in entropies.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-10,
                "Renyi order violated at L={l}, h={h}, ell={ell}: {entropies:?}"
            );
        }
    }
    suites.push(("Renyi monotonicity in n", INSTANCES));

    // Suite 5: the half-chain fit recovers planted coefficients exactly.
    for _ in 0..INSTANCES {
        let c = rng.random_range(0.3..3.0);
        let cp = rng.random_range(-2.0..2.0);
        let f = rng.random_range(-1.0..1.0);
        let lo = rng.random_range(4..20usize);
        let samples: Vec<(usize, f64)> = (lo..lo + 12)
            .map(|l| {
                let lf = l as f64;
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                (l, c / 6.0 * lf.ln() + cp + f * sign / lf)
            })
            .collect();
        let fit = fit_cft_halfchain(&samples, 1.0).unwrap();
        assert!(
            (fit.central_charge - c).abs() <= 1e-6
                && (fit.coefficients[1] - cp).abs() <= 1e-6
                && (fit.coefficients[2] - f).abs() <= 1e-6,
            "fit recovery failed for (c, c', f) = ({c}, {cp}, {f})"
        );
    }
    suites.push(("scaling-fit recovery", INSTANCES));

    // Suite 6: the flattening map round-trips and preserves order.
    for _ in 0..INSTANCES {
        let h = rng.random_range(0.0..5.0);
        let x = rng.random_range(-50.0..50.0);
        let y = rng.random_range(-50.0..50.0);
        let xt = coordinate_map(x, h).unwrap();
        let back = inverse_coordinate_map(xt, h).unwrap();
        assert!(
            (back - x).abs() <= 1e-10 * x.abs().max(1.0),
            "round trip failed at x={x}, h={h}"
        );
        let yt = coordinate_map(y, h).unwrap();
        assert_eq!(x < y, xt < yt, "order not preserved at h={h}");
    }
    suites.push(("coordinate map round trip", INSTANCES));

    let detail = suites
        .iter()
        .map(|(name, n)| format!("{name} x{n}"))
        .collect::<Vec<_>>()
        .join(", ");
    assert!(report(8, "randomized invariant suites", true, &detail));
}
