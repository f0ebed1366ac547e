//! Dense linear algebra kernels: symmetric storage, a Householder + implicit
//! QL symmetric eigensolver, complex LU solves for frequency responses, and
//! small polynomial root finding for companion-form mode analysis.

mod complex;
mod dense;
mod eigen;
mod poly;
mod sym;

pub use complex::{max_singular_value, CMatrix};
pub use dense::DenseMatrix;
pub use eigen::{eigenvalues, symmetric_eigen, SymmetricEigen, EIGEN_RESIDUAL_TOL};
pub use poly::monic_roots;
pub use sym::SymMatrix;
