//! Small dense complex kernels used by the frequency-response sweep:
//! LU factorization with partial pivoting and a power iteration for the
//! largest singular value.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::ZERO; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = Complex64::ZERO;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// Conjugate-transpose product `A^H x`.
    pub fn matvec_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![Complex64::ZERO; self.cols];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let xi = x[i];
            for (j, a) in row.iter().enumerate() {
                y[j] += a.conj() * xi;
            }
        }
        y
    }

    /// LU factorization with partial pivoting, in place. Returns the pivot
    /// permutation. Fails on exact singularity.
    pub fn lu_factor(&mut self) -> Result<Vec<usize>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut best = col;
            let mut best_mag = self.get(col, col).norm_sqr();
            for r in (col + 1)..n {
                let mag = self.get(r, col).norm_sqr();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if best_mag == 0.0 {
                return Err(Error::InvalidInput(
                    "singular matrix in LU factorization".into(),
                ));
            }
            if best != col {
                for j in 0..n {
                    self.data.swap(col * n + j, best * n + j);
                }
                piv.swap(col, best);
            }
            let pivot = self.get(col, col);
            for r in (col + 1)..n {
                let factor = self.get(r, col) / pivot;
                self.set(r, col, factor);
                for j in (col + 1)..n {
                    let v = self.get(r, j) - factor * self.get(col, j);
                    self.set(r, j, v);
                }
            }
        }
        Ok(piv)
    }

    /// Solve `A x = b` given the factorization produced by [`lu_factor`].
    pub fn lu_solve(&self, piv: &[usize], b: &[Complex64]) -> Vec<Complex64> {
        let n = self.rows;
        let mut x: Vec<Complex64> = piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.get(i, j) * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.get(i, j) * x[j];
            }
            x[i] = acc / self.get(i, i);
        }
        x
    }

    /// Explicit inverse via LU. Consumes the matrix contents.
    pub fn inverse(mut self) -> Result<CMatrix> {
        let n = self.rows;
        let piv = self.lu_factor()?;
        let mut inv = CMatrix::zeros(n, n);
        let mut unit = vec![Complex64::ZERO; n];
        for col in 0..n {
            unit[col] = Complex64::ONE;
            let x = self.lu_solve(&piv, &unit);
            unit[col] = Complex64::ZERO;
            for (row, v) in x.into_iter().enumerate() {
                inv.set(row, col, v);
            }
        }
        Ok(inv)
    }
}

/// Largest singular value of `g` by power iteration on `G^H G`.
///
/// Runs from two fixed pseudo-random start vectors and keeps the larger
/// estimate; deterministic for a given matrix.
pub fn max_singular_value(g: &CMatrix) -> f64 {
    let mut best: f64 = 0.0;
    for salt in [0x9e3779b97f4a7c15u64, 0xd1b54a32d192ed03u64] {
        best = best.max(power_iteration(g, salt));
    }
    best
}

fn power_iteration(g: &CMatrix, salt: u64) -> f64 {
    let n = g.cols;
    if n == 0 {
        return 0.0;
    }
    // SplitMix64-style start vector: fixed, full-support.
    let mut state = salt ^ (n as u64).wrapping_mul(0xbf58476d1ce4e5b9);
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z as f64 / u64::MAX as f64) - 0.5
    };
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
    normalize(&mut v);

    let mut sigma_sq = 0.0f64;
    for _ in 0..500 {
        let gv = g.matvec(&v);
        let mut w = g.matvec_adjoint(&gv);
        let new_sigma_sq: f64 = gv.iter().map(|c| c.norm_sqr()).sum();
        let norm = normalize(&mut w);
        if norm == 0.0 {
            return 0.0;
        }
        v = w;
        if (new_sigma_sq - sigma_sq).abs() <= 1e-13 * new_sigma_sq.max(f64::MIN_POSITIVE) {
            sigma_sq = new_sigma_sq;
            break;
        }
        sigma_sq = new_sigma_sq;
    }
    sigma_sq.sqrt()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in v.iter_mut() {
            *c /= norm;
        }
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        // (2+i) x + y = 1 ; x + (1-i) y = i
        let mut a = CMatrix::zeros(2, 2);
        a.set(0, 0, Complex64::new(2.0, 1.0));
        a.set(0, 1, Complex64::ONE);
        a.set(1, 0, Complex64::ONE);
        a.set(1, 1, Complex64::new(1.0, -1.0));
        let b = vec![Complex64::ONE, Complex64::new(0.0, 1.0)];
        let orig = a.clone();
        let piv = a.lu_factor().unwrap();
        let x = a.lu_solve(&piv, &b);
        let back = orig.matvec(&x);
        for (r, e) in back.iter().zip(&b) {
            assert!((r - e).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut a = CMatrix::zeros(2, 2);
        a.set(0, 0, Complex64::ONE);
        a.set(0, 1, Complex64::ONE);
        a.set(1, 0, Complex64::ONE);
        a.set(1, 1, Complex64::ONE);
        assert!(a.lu_factor().is_err());
    }

    #[test]
    fn sigma_max_of_diagonal_is_largest_modulus() {
        let mut g = CMatrix::zeros(3, 3);
        g.set(0, 0, Complex64::new(0.3, 0.4)); // |.| = 0.5
        g.set(1, 1, Complex64::new(0.0, 2.0)); // |.| = 2
        g.set(2, 2, Complex64::new(-1.5, 0.0)); // |.| = 1.5
        let s = max_singular_value(&g);
        assert!((s - 2.0).abs() < 1e-10, "sigma = {s}");
    }

    #[test]
    fn inverse_of_identity_scaling() {
        let n = 4;
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, Complex64::new(2.0, 0.0));
        }
        let inv = a.inverse().unwrap();
        for i in 0..n {
            assert!((inv.get(i, i) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        }
    }
}
