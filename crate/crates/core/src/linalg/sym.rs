/// Dense real symmetric matrix with mirrored storage.
///
/// Entries are kept bit-identical across the diagonal: `set` writes both
/// `(i, j)` and `(j, i)`, so symmetry cannot drift.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, delta: f64) {
        self.set(i, j, self.get(i, j) + delta);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// Maximum absolute row sum (induced infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// `y += scale * M x`, reusing the output buffer.
    pub fn matvec_add(&self, x: &[f64], scale: f64, y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] += scale * acc;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mx = self.matvec(x);
        x.iter().zip(&mx).map(|(a, b)| a * b).sum()
    }

    /// Principal submatrix with the rows/columns in `removed` deleted.
    /// `removed` must be sorted ascending and in range.
    pub fn principal_submatrix(&self, removed: &[usize]) -> SymMatrix {
        let keep: Vec<usize> = (0..self.dim)
            .filter(|i| removed.binary_search(i).is_err())
            .collect();
        let mut out = SymMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a) {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_mirrors_exactly() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 0.1 + 0.2);
        assert_eq!(m.get(0, 2).to_bits(), m.get(2, 0).to_bits());
    }

    #[test]
    fn submatrix_removes_row_and_column() {
        let mut m = SymMatrix::zeros(3);
        for i in 0..3 {
            for j in i..3 {
                m.set(i, j, (i * 3 + j) as f64);
            }
        }
        let s = m.principal_submatrix(&[1]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.get(0, 0), m.get(0, 0));
        assert_eq!(s.get(0, 1), m.get(0, 2));
        assert_eq!(s.get(1, 1), m.get(2, 2));
    }

    #[test]
    fn matvec_matches_quadratic_form() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, 2.0);
        m.set(0, 1, -1.0);
        m.set(1, 1, 3.0);
        let x = [1.0, 2.0];
        // x^T M x = 2 - 2*2 + 3*4 = 10
        assert!((m.quadratic_form(&x) - 10.0).abs() < 1e-12);
    }
}
