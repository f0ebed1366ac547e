//! H-infinity sensitivity of the consensus loop: the closed form
//! `1/(a0 lambda2)` for first order, and a numeric frequency sweep of the
//! disturbance-to-deviation transfer matrix for general order.
//!
//! The disturbance enters the last derivative block; the performance output
//! is the position deviation from the consensus average (leaderless) or the
//! position error itself (grounded). For the leaderless loop, restricting to
//! the orthogonal complement of the consensus direction removes the marginal
//! average mode; the restricted transfer matrix at frequency `w` is the
//! inverse of the matrix polynomial
//! `P(jw) = (jw)^n I + sum_k a_k (jw)^k M`, evaluated by complex LU.

use crate::dynamics::{stability_report, ConsensusSystem};
use crate::error::{Error, Result};
use crate::graph::{build_laplacian, grounded_laplacian, Graph};
use crate::linalg::{eigenvalues, max_singular_value, CMatrix, SymMatrix};
use crate::par;
use crate::spectral::{algebraic_connectivity, grounded_eigenvalue};
use num_complex::Complex64;

/// Closed-form first-order H-infinity norm `1/(a0 lambda2)`.
pub fn hinf_first_order(g: &Graph, a0: f64) -> Result<f64> {
    if a0 <= 0.0 {
        return Err(Error::InvalidGains(format!("a0 must be positive, got {a0}")));
    }
    Ok(1.0 / (a0 * algebraic_connectivity(g)?))
}

/// Grounded first-order H-infinity norm `1/(a0 grounded_lambda1)`.
pub fn hinf_first_order_grounded(g: &Graph, leader: usize, a0: f64) -> Result<f64> {
    if a0 <= 0.0 {
        return Err(Error::InvalidGains(format!("a0 must be positive, got {a0}")));
    }
    Ok(1.0 / (a0 * grounded_eigenvalue(g, leader)?))
}

/// Frequency-sweep controls. The grid is logarithmic around `a0 * lambda`
/// (the smallest relevant eigenvalue), plus the DC point, with a
/// golden-section refinement around the grid peak.
#[derive(Debug, Clone, Copy)]
pub struct HinfOptions {
    pub grid_points: usize,
    pub decades: f64,
    pub refine_iters: usize,
}

impl Default for HinfOptions {
    fn default() -> Self {
        HinfOptions {
            grid_points: 400,
            decades: 6.0,
            refine_iters: 80,
        }
    }
}

/// Numeric H-infinity norm by frequency sweep with default options.
pub fn hinf_numeric(sys: &ConsensusSystem) -> Result<f64> {
    hinf_numeric_with(sys, &HinfOptions::default())
}

pub fn hinf_numeric_with(sys: &ConsensusSystem, opts: &HinfOptions) -> Result<f64> {
    let report = stability_report(sys)?;
    if !report.is_stable {
        return Err(Error::UnstableSystem {
            max_real_part: report.max_real_part,
        });
    }

    // Restricted symmetric operator: grounded Laplacian, or the Laplacian
    // compressed onto the disagreement subspace via a Householder basis of
    // the complement of the all-ones direction.
    let m_op = match sys.leader() {
        Some(l) => grounded_laplacian(sys.graph(), l)?,
        None => disagreement_restriction(&build_laplacian(sys.graph())),
    };
    let gains = sys.gains().coefficients().to_vec();
    let lam_min = eigenvalues(&m_op)?[0];
    let center = gains[0] * lam_min;
    if center <= 0.0 {
        return Err(Error::UnstableSystem {
            max_real_part: report.max_real_part,
        });
    }

    let half = opts.decades / 2.0;
    let pts = opts.grid_points.max(2);
    let mut grid: Vec<f64> = Vec::with_capacity(pts + 1);
    grid.push(0.0);
    for i in 0..pts {
        let frac = i as f64 / (pts - 1) as f64;
        grid.push(center * 10f64.powf(-half + opts.decades * frac));
    }

    let gains_ref = &gains;
    let m_ref = &m_op;
    let values = par::map_collect(grid.clone(), |w| gain_at(m_ref, gains_ref, w));
    let mut best_idx = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if v > best {
            best = v;
            best_idx = i;
        }
    }

    // Golden-section refinement on the bracket around the grid peak.
    let lo = if best_idx == 0 { 0.0 } else { grid[best_idx - 1] };
    let hi = if best_idx + 1 < grid.len() {
        grid[best_idx + 1]
    } else {
        grid[best_idx] * 10.0
    };
    let refined = golden_max(
        |w| gain_at(m_ref, gains_ref, w),
        lo,
        hi,
        opts.refine_iters,
    )?;
    Ok(best.max(refined))
}

/// sigma_max of the restricted transfer matrix at frequency `w`.
fn gain_at(m_op: &SymMatrix, gains: &[f64], w: f64) -> Result<f64> {
    let dim = m_op.dim();
    let s = Complex64::new(0.0, w);
    // weight = sum a_k s^k after the loop; pow ends at s^n.
    let mut pow = Complex64::ONE;
    let mut weight = Complex64::ZERO;
    for &a in gains.iter() {
        weight += a * pow;
        pow *= s;
    }
    let mut p = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            p.set(i, j, weight * m_op.get(i, j));
        }
        let v = p.get(i, i) + pow;
        p.set(i, i, v);
    }
    let g = p.inverse()?;
    Ok(max_singular_value(&g))
}

fn golden_max<F>(f: F, lo: f64, hi: f64, iters: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = fc.max(fd);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        best = best.max(fc.max(fd));
        if (b - a).abs() <= 1e-12 * (1.0 + b.abs()) {
            break;
        }
    }
    Ok(best)
}

/// Compress a Laplacian onto the orthogonal complement of the all-ones
/// direction: `M = W^T L W` where the columns of `W` complete `1/sqrt(N)`
/// to an orthonormal basis (Householder reflector). The eigenvalues of `M`
/// are exactly `lambda_2..lambda_N`.
fn disagreement_restriction(lap: &SymMatrix) -> SymMatrix {
    let n = lap.dim();
    // Reflector H = I - 2 v v^T / (v^T v) maps e_0 to the normalized ones
    // vector; its remaining columns span the disagreement subspace.
    let u = 1.0 / (n as f64).sqrt();
    let mut v: Vec<f64> = vec![u; n];
    v[0] -= 1.0;
    let vtv: f64 = v.iter().map(|x| x * x).sum();
    let col = |j: usize, i: usize| -> f64 {
        let e = if i == j { 1.0 } else { 0.0 };
        e - 2.0 * v[i] * v[j] / vtv
    };
    // W has columns 1..n of H; M = W^T L W.
    let mut w_cols: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for j in 1..n {
        w_cols.push((0..n).map(|i| col(j, i)).collect());
    }
    let lw: Vec<Vec<f64>> = w_cols.iter().map(|c| lap.matvec(c)).collect();
    let mut m = SymMatrix::zeros(n - 1);
    for a in 0..(n - 1) {
        for b in a..(n - 1) {
            let dot: f64 = w_cols[a].iter().zip(&lw[b]).map(|(x, y)| x * y).sum();
            m.set(a, b, dot);
        }
    }
    m
}
