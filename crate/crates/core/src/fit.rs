//! Least-squares fits of entropy scaling laws.
//!
//! Three three-parameter models share one linear solver:
//!
//! * half-chain scaling, `S(L) = (c/6) ln L + c' + f (−1)^L L^{−K}`;
//! * the same basis read as the weak-inhomogeneity family at fixed `z = hL`,
//!   where slope, offset and oscillation amplitude all become functions of z;
//! * block scaling at fixed chain size, `S_n(ℓ) = c(1+1/n)/12 · ln D(ℓ) + c'_n
//!   + f_n cos(πℓ) D_osc(ℓ)^{−K/n}` with the half-filling chord
//!   `D(ℓ) = (4L/π) sin(πℓ/2L)` and `D_osc = 2D`.
//!
//! The solver is a Householder QR; the design matrices are tall and thin
//! (n × 3), so the conditioning report comes from the exact eigenvalues of
//! the 3 × 3 normal matrix RᵀR.

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh_dense, Matrix};
use crate::special::gamma;
use std::f64::consts::PI;

/// Condition-number threshold above which a fit is flagged as unreliable.
pub const CONDITION_WARN: f64 = 1e8;

/// Relative column-norm floor below which the design is treated as
/// rank-deficient.
const RANK_TOL: f64 = 1e-12;

/// Outcome of a scaling fit. `coefficients` are reported in physical
/// normalization: the leading entry is the central charge inferred from the
/// slope, not the raw slope itself.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Model identifier (`"cft-half"`, `"z-family"`, `"block-scaling"`).
    pub model: &'static str,
    /// Names matching `coefficients` entry by entry.
    pub coefficient_names: [&'static str; 3],
    pub coefficients: [f64; 3],
    /// Central charge implied by the fitted slope.
    pub central_charge: f64,
    /// Root-mean-square residual over all samples.
    pub residual_rms: f64,
    /// Condition number of the design (square root of the RᵀR eigenvalue
    /// ratio); `f64::INFINITY` when the normal matrix is numerically
    /// singular.
    pub condition_estimate: f64,
    /// True when `condition_estimate` exceeds [`CONDITION_WARN`].
    pub ill_conditioned: bool,
    pub n_samples: usize,
}

/// (−1)^m without trigonometry: `cos(πm)` is exactly ±1 at integer m.
fn parity_sign(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Conformal chord length of an `ell`-site block in a `2l`-site open chain
/// at half filling: `(4L/π) sin(πℓ / 2L)` with `L = l`.
pub fn chord_length(l: usize, ell: usize) -> f64 {
    let big_l = l as f64;
    4.0 * big_l / PI * (PI * ell as f64 / (2.0 * big_l)).sin()
}

fn validate_samples(samples: &[(usize, f64)]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples to fit".into()));
    }
    for &(l, s) in samples {
        if l == 0 {
            return Err(Error::InvalidInput("sample with size 0".into()));
        }
        if !s.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite entropy sample at size {l}"
            )));
        }
    }
    Ok(())
}

fn require_halfchain_coverage(samples: &[(usize, f64)]) -> Result<()> {
    let mut sizes: Vec<usize> = samples.iter().map(|&(l, _)| l).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 distinct sizes to separate slope, offset and \
             oscillation; got {}",
            sizes.len()
        )));
    }
    let evens = sizes.iter().any(|l| l % 2 == 0);
    let odds = sizes.iter().any(|l| l % 2 == 1);
    if !(evens && odds) {
        return Err(Error::InvalidInput(
            "need both even and odd sizes to resolve the alternating term".into(),
        ));
    }
    Ok(())
}

/// Householder QR least squares for a tall n × 3 system. Returns the
/// coefficient triple, the RMS residual over the n rows, and the condition
/// estimate of the design.
fn solve_lsq3(mut a: Vec<[f64; 3]>, mut b: Vec<f64>) -> Result<([f64; 3], f64, f64)> {
    let n = a.len();
    debug_assert!(n >= 4);
    let col_scale = (0..3)
        .map(|j| a.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);

    for j in 0..3 {
        let norm2: f64 = (j..n).map(|i| a[i][j] * a[i][j]).sum();
        let norm = norm2.sqrt();
        if norm <= RANK_TOL * col_scale {
            return Err(Error::Numerical(format!(
                "rank-deficient design matrix (column {j})"
            )));
        }
        let alpha = if a[j][j] >= 0.0 { -norm } else { norm };
        let v0 = a[j][j] - alpha;
        let vtv = v0 * v0 + (norm2 - a[j][j] * a[j][j]);
        if vtv > 0.0 {
            // Reflect the remaining columns and the right-hand side. The
            // sub-diagonal of column j still holds the reflector tail.
            for k in (j + 1)..3 {
                let mut w = v0 * a[j][k];
                for i in (j + 1)..n {
                    w += a[i][j] * a[i][k];
                }
                let fac = 2.0 * w / vtv;
                a[j][k] -= fac * v0;
                for i in (j + 1)..n {
                    a[i][k] -= fac * a[i][j];
                }
            }
            let mut w = v0 * b[j];
            for i in (j + 1)..n {
                w += a[i][j] * b[i];
            }
            let fac = 2.0 * w / vtv;
            b[j] -= fac * v0;
            for i in (j + 1)..n {
                b[i] -= fac * a[i][j];
            }
        }
        a[j][j] = alpha;
        for i in (j + 1)..n {
            a[i][j] = 0.0;
        }
    }

    // Back-substitution on the 3 × 3 upper triangle.
    let mut beta = [0.0f64; 3];
    for j in (0..3).rev() {
        let mut s = b[j];
        for k in (j + 1)..3 {
            s -= a[j][k] * beta[k];
        }
        beta[j] = s / a[j][j];
    }

    // Orthogonal transforms preserve norms, so rows 3..n of the transformed
    // right-hand side are the least-squares residual.
    let residual_rms = (b[3..].iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();

    // Condition of the design from the exact spectrum of RᵀR.
    let mut rtr = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for k in 0..=i.min(j) {
                s += a[k][i] * a[k][j];
            }
            rtr.set(i, j, s);
        }
    }
    let evals = eigvalsh_dense(&rtr)?;
    let condition = if evals[0] <= 0.0 {
        f64::INFINITY
    } else {
        (evals[2] / evals[0]).sqrt()
    };

    Ok((beta, residual_rms, condition))
}

fn finish(
    model: &'static str,
    names: [&'static str; 3],
    slope_to_c: f64,
    solved: ([f64; 3], f64, f64),
    n_samples: usize,
) -> FitResult {
    let (beta, residual_rms, condition_estimate) = solved;
    let c = slope_to_c * beta[0];
    FitResult {
        model,
        coefficient_names: names,
        coefficients: [c, beta[1], beta[2]],
        central_charge: c,
        residual_rms,
        condition_estimate,
        ill_conditioned: condition_estimate > CONDITION_WARN,
        n_samples,
    }
}

/// Fit half-chain entropies `(L, S(L))` to
/// `S = (c/6) ln L + c' + f (−1)^L L^{−K}` and report `c = 6 × slope`.
///
/// Requires at least four distinct sizes covering both parities.
pub fn fit_cft_halfchain(samples: &[(usize, f64)], finite_size_power: f64) -> Result<FitResult> {
    let solved = halfchain_solve(samples, finite_size_power)?;
    Ok(finish(
        "cft-half",
        ["c", "c_prime", "f"],
        6.0,
        solved,
        samples.len(),
    ))
}

/// Same basis as [`fit_cft_halfchain`], for half-chain entropies collected
/// along a fixed-`z` trajectory (`z = hL`): the fitted triple is then read
/// as `(c(z), d(z), f(z))`. At `z = 0` the two fits coincide numerically.
pub fn fit_z_family(samples: &[(usize, f64)], finite_size_power: f64) -> Result<FitResult> {
    let solved = halfchain_solve(samples, finite_size_power)?;
    Ok(finish(
        "z-family",
        ["c_z", "d_z", "f_z"],
        6.0,
        solved,
        samples.len(),
    ))
}

fn halfchain_solve(
    samples: &[(usize, f64)],
    finite_size_power: f64,
) -> Result<([f64; 3], f64, f64)> {
    validate_samples(samples)?;
    require_halfchain_coverage(samples)?;
    if finite_size_power <= 0.0 || !finite_size_power.is_finite() {
        return Err(Error::InvalidInput(format!(
            "finite-size power must be positive and finite, got {finite_size_power}"
        )));
    }
    let design: Vec<[f64; 3]> = samples
        .iter()
        .map(|&(l, _)| {
            let lf = l as f64;
            [lf.ln(), 1.0, parity_sign(l) / lf.powf(finite_size_power)]
        })
        .collect();
    let rhs: Vec<f64> = samples.iter().map(|&(_, s)| s).collect();
    solve_lsq3(design, rhs)
}

/// Fit a single-chain block-entropy profile `(ℓ, S_n(ℓ))` at chain half-size
/// `l` and Rényi order `n` to
/// `S_n = c(1+1/n)/12 · ln D(ℓ) + c'_n + f_n cos(πℓ) (2D(ℓ))^{−K/n}`,
/// reporting `c = 12/(1+1/n) × slope`.
pub fn fit_block_scaling(
    samples: &[(usize, f64)],
    l: usize,
    n: f64,
    finite_size_power: f64,
) -> Result<FitResult> {
    validate_samples(samples)?;
    if l == 0 {
        return Err(Error::InvalidInput("chain half-size must be >= 1".into()));
    }
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Renyi order must be positive and finite, got {n}"
        )));
    }
    if finite_size_power <= 0.0 || !finite_size_power.is_finite() {
        return Err(Error::InvalidInput(format!(
            "finite-size power must be positive and finite, got {finite_size_power}"
        )));
    }
    if samples.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "block-scaling fit needs at least 5 samples, got {}",
            samples.len()
        )));
    }
    let sites = 2 * l;
    for &(ell, _) in samples {
        if ell >= sites {
            return Err(Error::InvalidInput(format!(
                "block size {ell} outside 1..{} for a {sites}-site chain",
                sites - 1
            )));
        }
    }
    let design: Vec<[f64; 3]> = samples
        .iter()
        .map(|&(ell, _)| {
            let chord = chord_length(l, ell);
            [
                chord.ln(),
                1.0,
                parity_sign(ell) * (2.0 * chord).powf(-finite_size_power / n),
            ]
        })
        .collect();
    let rhs: Vec<f64> = samples.iter().map(|&(_, s)| s).collect();
    let solved = solve_lsq3(design, rhs)?;
    let slope_to_c = 12.0 / (1.0 + 1.0 / n);
    Ok(finish(
        "block-scaling",
        ["c", "c_prime_n", "f_n"],
        slope_to_c,
        solved,
        samples.len(),
    ))
}

/// Closed-form oscillation amplitude for the homogeneous open chain at half
/// filling: `f_1 = 1` and for `n ≠ 1`
/// `f_n = 2/(1−n) · Γ(1/2 + 1/2n) / Γ(1/2 − 1/2n)`.
///
/// Undefined where the denominator Γ hits a pole, i.e. at `n = 1/(2k+1)`
/// for integer `k ≥ 1`.
pub fn f_n_analytic(n: f64) -> Result<f64> {
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Renyi order must be positive and finite, got {n}"
        )));
    }
    if (n - 1.0).abs() < 1e-14 {
        return Ok(1.0);
    }
    let arg = 0.5 - 1.0 / (2.0 * n);
    if arg < 0.5 {
        let nearest = arg.round();
        if nearest <= 0.0 && (arg - nearest).abs() < 1e-9 {
            return Err(Error::InvalidInput(format!(
                "f_n undefined at n = {n}: Gamma pole at argument {nearest}"
            )));
        }
    }
    Ok(2.0 / (1.0 - n) * gamma(0.5 + 1.0 / (2.0 * n)) / gamma(arg))
}
