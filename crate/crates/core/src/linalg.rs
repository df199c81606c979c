//! Dense symmetric and symmetric-tridiagonal eigensolvers.
//!
//! The tridiagonal kernel is implicit-shift QL with a *local* deflation
//! test (|e_m| measured against its neighboring diagonal entries, not the
//! matrix norm).  The rainbow chain's hopping matrix is strongly graded —
//! couplings span e^{-h(L-3/2)} — and a norm-based test would flush the
//! exponentially small eigenvalues that carry the gap physics; the local
//! test preserves them to near relative accuracy.  Dense matrices are
//! reduced to tridiagonal form by Householder reflections first.
//!
//! Eigenvalues are returned ascending.  Eigenvectors follow a fixed sign
//! convention (the largest-magnitude component is positive, ties resolved
//! to the lowest index) so downstream output is reproducible.

use crate::chain::Tridiagonal;
use crate::error::{Error, Result};

/// Iteration cap per eigenvalue in the QL sweep.
pub const MAX_QL_ITER: usize = 50;

/// Square matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn submatrix(&self, idx: &[usize]) -> Matrix {
        let mut s = Matrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                s.set(a, b, self.at(i, j));
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Eigendecomposition: `values[k]` ascending with unit-norm `vectors[k]`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
pub fn eigh_tridiagonal(t: &Tridiagonal) -> Result<Eigh> {
    let n = check_tridiagonal(t)?;
    let mut d = t.diag.clone();
    let mut e = padded_offdiag(&t.off, n);
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    ql_implicit(&mut d, &mut e, Some(&mut v), 0.0)?;
    Ok(finish(d, v))
}

/// Eigenvalues only (ascending) of a symmetric tridiagonal matrix.
pub fn eigvalsh_tridiagonal(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = check_tridiagonal(t)?;
    let mut d = t.diag.clone();
    let mut e = padded_offdiag(&t.off, n);
    ql_implicit(&mut d, &mut e, None, 0.0)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Full eigendecomposition of a dense symmetric matrix (Householder
/// reduction, then the tridiagonal QL kernel).
pub fn eigh_dense(m: &Matrix) -> Result<Eigh> {
    check_symmetric(m)?;
    let (mut d, mut e, mut v) = tridiagonalize(m, true);
    let floor = dense_deflation_floor(&d, &e);
    ql_implicit(&mut d, &mut e, Some(&mut v), floor)?;
    Ok(finish(d, v))
}

/// Eigenvalues only (ascending) of a dense symmetric matrix.
pub fn eigvalsh_dense(m: &Matrix) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let (mut d, mut e, _) = tridiagonalize(m, false);
    let floor = dense_deflation_floor(&d, &e);
    ql_implicit(&mut d, &mut e, None, floor)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Absolute deflation threshold for spectra reached through Householder
/// reduction. The reduction itself smears eigenvalues by O(eps·‖A‖), so
/// off-diagonals below that level carry no information — while the strictly
/// relative test can stall on clusters pinned at zero (reduced density
/// matrices are the prime case). Tridiagonal inputs skip this floor: the
/// graded chain matrix is exactly representable and its exponentially small
/// couplings are meaningful.
fn dense_deflation_floor(d: &[f64], e: &[f64]) -> f64 {
    let scale = d
        .iter()
        .zip(e.iter())
        .fold(0.0f64, |m, (&a, &b)| m.max(a.abs() + b.abs()));
    f64::EPSILON * scale
}

fn check_tridiagonal(t: &Tridiagonal) -> Result<usize> {
    let n = t.diag.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if t.off.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "off-diagonal length {} does not match dimension {n}",
            t.off.len()
        )));
    }
    Ok(n)
}

fn padded_offdiag(off: &[f64], n: usize) -> Vec<f64> {
    let mut e = off.to_vec();
    e.resize(n, 0.0);
    e
}

fn check_symmetric(m: &Matrix) -> Result<()> {
    let n = m.n();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let scale = m.max_abs();
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in i + 1..n {
            if (m.at(i, j) - m.at(j, i)).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "matrix not symmetric at ({i},{j}): {} vs {}",
                    m.at(i, j),
                    m.at(j, i)
                )));
            }
        }
    }
    Ok(())
}

/// Implicit-shift QL on (d, e); e[i] couples i and i+1, e[n-1] is scratch.
/// If given, `vectors` holds one row per eigenvector-in-progress and is
/// updated by every plane rotation. `floor` is an additional absolute
/// deflation threshold (0 disables it).
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    mut vectors: Option<&mut Vec<Vec<f64>>>,
    floor: f64,
) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            // First index m >= l where the chain decouples.  The test is
            // relative to the adjacent diagonal entries so that tiny
            // graded blocks deflate at their own scale.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::Numerical(format!(
                    "QL sweep failed to converge for eigenvalue {l} after {MAX_QL_ITER} iterations \
                     (n={n}, e[l]={:e}, d[l]={:e}, d[l+1]={:e})",
                    e[l], d[l], d[l + 1]
                )));
            }
            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut deflated_early = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(v) = vectors.as_deref_mut() {
                    let (lo, hi) = v.split_at_mut(i + 1);
                    let vi = &mut lo[i][..];
                    let vi1 = &mut hi[0][..];
                    for k in 0..vi.len() {
                        f = vi1[k];
                        vi1[k] = s * vi[k] + c * f;
                        vi[k] = c * vi[k] - s * f;
                    }
                }
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form.
/// Returns (d, e, v) with e in the QL layout (e[i] couples i, i+1) and v
/// holding the accumulated transform as rows-are-vectors (identity-shaped
/// placeholder when `accumulate` is false).
fn tridiagonalize(m: &Matrix, accumulate: bool) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let n = m.n();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            v[n - 1][i] = v[i][i];
            v[i][i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v[k][i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v[k][i + 1] * v[k][j];
                    }
                    for k in 0..=i {
                        v[k][j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[k][i + 1] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = v[n - 1][j];
            v[n - 1][j] = 0.0;
        }
        v[n - 1][n - 1] = 1.0;
    } else {
        // Without the accumulation pass, d holds Householder norms; the
        // reduced diagonal survives untouched on the matrix diagonal.
        for j in 0..n {
            d[j] = v[j][j];
        }
    }
    e[0] = 0.0;

    // Shift e into the QL layout: e[i] couples i and i+1.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    // Transpose the accumulated transform into rows-are-vectors layout.
    let rows = if accumulate {
        (0..n)
            .map(|j| (0..n).map(|k| v[k][j]).collect())
            .collect()
    } else {
        Vec::new()
    };
    (d, e, rows)
}

/// Sort eigenpairs ascending and apply the deterministic sign convention.
fn finish(d: Vec<f64>, v: Vec<Vec<f64>>) -> Eigh {
    let n = d.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap().then(a.cmp(&b)));
    let values: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let mut vectors: Vec<Vec<f64>> = idx.into_iter().map(|i| v[i].clone()).collect();
    for vec in &mut vectors {
        let mut arg = 0;
        let mut best = vec[0].abs();
        for (k, &x) in vec.iter().enumerate().skip(1) {
            if x.abs() > best {
                best = x.abs();
                arg = k;
            }
        }
        if vec[arg] < 0.0 {
            for x in vec.iter_mut() {
                *x = -*x;
            }
        }
    }
    Eigh { values, vectors }
}
