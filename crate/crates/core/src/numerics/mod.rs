//! Dense complex linear algebra and polynomial machinery.

mod eigen;
mod linsolve;
mod matrix;
mod poly;
mod svd;

pub use eigen::{eigenpairs, eigenvalues, hermitian_eigenvalues, inverse_iteration, sort_spectrum, EigenPairs};
pub use linsolve::{condition_one, inverse, solve_linear, Lu};
pub use matrix::{vec_dot, vec_norm, DenseMatrix};
pub use poly::{certify_real_roots, char_poly, cluster_roots, poly_roots, Polynomial, RootCluster, MAX_CHAR_POLY_DIM};
pub use svd::{min_singular_value, svd, Svd};

/// Complex scalar used throughout the crate.
pub type Scalar = num_complex::Complex64;

/// Shorthand for a real scalar.
#[inline]
pub fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}
