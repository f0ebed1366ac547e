//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by the implicit-shift QL iteration, with optional accumulation of the
//! orthogonal transforms for eigenvectors.
//!
//! This is the classic EISPACK tred2/tql2 pair. It is dense and computes the
//! full spectrum, which is what the analysis layers need (interior
//! eigenvalues enter the reports, not just extremal ones).

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Per-pair residual tolerance relative to the matrix norm: eigenpairs must
/// satisfy `||Mv - lambda v|| < EIGEN_RESIDUAL_TOL * ||M||`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;

const MAX_QL_SWEEPS: usize = 60;

/// Full symmetric eigendecomposition.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column-major eigenvectors: `vectors[k]` pairs with `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Worst residual `||Mv - lambda v|| / ||v||` over all pairs.
    pub residual: f64,
}

/// All eigenvalues of a symmetric matrix, ascending. Does not accumulate
/// eigenvectors, which roughly halves the work of the reduction and makes
/// the QL sweeps O(n^2).
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.raw().to_vec();
    let (mut d, mut e) = householder_tridiag(&mut a, n, false);
    ql_implicit(&mut d, &mut e, None, n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues and orthonormal eigenvectors, ascending, with a residual
/// check against [`EIGEN_RESIDUAL_TOL`].
pub fn symmetric_eigen(m: &SymMatrix) -> Result<SymmetricEigen> {
    let n = m.dim();
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: Vec::new(),
            residual: 0.0,
        });
    }
    let mut a = m.raw().to_vec();
    let (mut d, mut e) = householder_tridiag(&mut a, n, true);
    ql_implicit(&mut d, &mut e, Some(&mut a), n)?;

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| a[row * n + col]).collect())
        .collect();

    let scale = m.norm_inf().max(f64::MIN_POSITIVE);
    let mut residual: f64 = 0.0;
    for (lambda, v) in values.iter().zip(&vectors) {
        let mv = m.matvec(v);
        let mut num = 0.0;
        let mut den = 0.0;
        for (mvi, vi) in mv.iter().zip(v) {
            let r = mvi - lambda * vi;
            num += r * r;
            den += vi * vi;
        }
        residual = residual.max(num.sqrt() / den.sqrt().max(f64::MIN_POSITIVE));
    }
    if residual >= EIGEN_RESIDUAL_TOL * scale {
        return Err(Error::EigenConvergence { residual });
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        residual,
    })
}

/// Householder reduction of the symmetric matrix stored row-major in `a` to
/// tridiagonal form. Returns the diagonal `d` and subdiagonal `e` (with
/// `e[0] = 0`). When `accumulate` is set, `a` is overwritten with the
/// orthogonal matrix `Q` effecting `Q^T A Q = T`, ready for tql2-style
/// eigenvector accumulation.
fn householder_tridiag(a: &mut [f64], n: usize, accumulate: bool) -> (Vec<f64>, Vec<f64>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    if accumulate {
                        a[idx(j, i)] = a[idx(i, j)] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[idx(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }

    if accumulate {
        d[0] = 0.0;
        e[0] = 0.0;
        for i in 0..n {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[idx(i, k)] * a[idx(k, j)];
                    }
                    for k in 0..i {
                        a[idx(k, j)] -= g * a[idx(k, i)];
                    }
                }
            }
            d[i] = a[idx(i, i)];
            a[idx(i, i)] = 1.0;
            for j in 0..i {
                a[idx(j, i)] = 0.0;
                a[idx(i, j)] = 0.0;
            }
        }
    } else {
        e[0] = 0.0;
        for i in 0..n {
            d[i] = a[idx(i, i)];
        }
    }
    (d, e)
}

/// Implicit-shift QL iteration on the tridiagonal (d, e). When `z` is given
/// (row-major n-by-n), the rotations are accumulated into its columns so that
/// column k of `z` ends up as the eigenvector for `d[k]`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::EigenConvergence { residual: e[l].abs() });
            }

            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;

            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate without finishing the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
