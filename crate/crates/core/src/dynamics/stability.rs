//! Eigenvalue-based stability analysis of the consensus closed loop.
//!
//! The block companion matrix diagonalizes along the Laplacian eigenbasis:
//! each Laplacian eigenvalue `lam` contributes the roots of
//! `s^n + lam * (a_{n-1} s^{n-1} + ... + a_1 s + a_0)`. The spectrum of the
//! full closed loop is the union of these mode roots, which avoids a dense
//! nonsymmetric eigensolve entirely.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, monic_roots};
use crate::dynamics::ConsensusSystem;
use num_complex::Complex64;

/// Outcome of the closed-loop eigenvalue test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub is_stable: bool,
    /// Largest real part over the non-consensus modes (leaderless) or over
    /// all modes (grounded).
    pub max_real_part: f64,
    /// Eigenvalues exactly at the origin. A leaderless order-n loop carries
    /// exactly n of them (the consensus subspace).
    pub n_zero_modes: usize,
}

/// Roots of the per-mode characteristic polynomial
/// `s^n + lam * (a_{n-1} s^{n-1} + ... + a_0)`. A zero Laplacian eigenvalue
/// yields n integrator roots at the exact origin.
pub fn mode_polynomial_roots(gains: &[f64], lam: f64) -> Vec<Complex64> {
    let n = gains.len();
    if lam == 0.0 {
        return vec![Complex64::ZERO; n];
    }
    let coeffs: Vec<f64> = gains.iter().map(|a| a * lam).collect();
    monic_roots(&coeffs)
}

/// All eigenvalues of the closed-loop matrix, as the union of mode roots
/// over the Laplacian (or grounded Laplacian) spectrum. For the leaderless
/// loop the numerically-zero Fiedler companion `lambda_1` is snapped to an
/// exact zero first, so the consensus modes land exactly at the origin.
pub fn closed_loop_eigenvalues(sys: &ConsensusSystem) -> Result<Vec<Complex64>> {
    let lap = sys.laplacian();
    let snap_tol = 1e-9 * (1.0 + lap.norm_inf());
    let mut lams = eigenvalues(&lap)?;
    if sys.leader().is_none() {
        for lam in lams.iter_mut() {
            if lam.abs() <= snap_tol {
                *lam = 0.0;
            }
        }
    }
    let gains = sys.gains().coefficients();
    let mut roots = Vec::with_capacity(sys.state_dim());
    for lam in lams {
        roots.extend(mode_polynomial_roots(gains, lam));
    }
    Ok(roots)
}

/// Classify the closed loop. Leaderless: stable iff exactly n modes sit at
/// the origin and every other mode has negative real part. Grounded: stable
/// iff every mode has negative real part.
pub fn stability_report(sys: &ConsensusSystem) -> Result<StabilityReport> {
    let roots = closed_loop_eigenvalues(sys)?;
    let n_zero_modes = roots.iter().filter(|r| r.norm() == 0.0).count();
    let max_real_part = roots
        .iter()
        .filter(|r| r.norm() != 0.0)
        .map(|r| r.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let is_stable = match sys.leader() {
        None => n_zero_modes == sys.order() && max_real_part < 0.0,
        Some(_) => n_zero_modes == 0 && max_real_part < 0.0,
    };
    Ok(StabilityReport {
        is_stable,
        max_real_part,
        n_zero_modes,
    })
}

/// The high-order necessary stability condition: true iff
/// `lam > a_{n-3} / (a_{n-1} a_{n-2})` strictly. Necessary, not sufficient:
/// a `true` result does not certify stability, but `false` guarantees
/// instability. Defined only for n >= 3.
pub fn necessary_condition_high_order(gains: &crate::dynamics::ConsensusGains, lam: f64) -> Result<bool> {
    let n = gains.order();
    if n < 3 {
        return Err(Error::WrongOrder {
            expected: "n >= 3".into(),
            actual: n,
        });
    }
    let a = gains.coefficients();
    let threshold = a[n - 3] / (a[n - 1] * a[n - 2]);
    Ok(lam > threshold)
}
