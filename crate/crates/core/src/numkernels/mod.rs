//! Dense complex linear algebra used by the estimator.
//!
//! Storage is `nalgebra::DMatrix<Complex64>`; the factorizations are
//! implemented here so that their contracts (residuals, iteration caps,
//! error reporting) are explicit.

mod eigen;
mod gsvd;
mod householder;
mod lstsq;
mod svd;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use eigen::{companion_matrix, eigenvalues};
pub use gsvd::{gsvd, GsvdFactors};
pub use householder::{complete_unitary, HouseholderQr};
pub use lstsq::{lstsq, LstsqSolution};
pub use svd::{numerical_rank, singular_values, svd, Svd};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Iteration cap shared by the iterative kernels: `100 * dimension`.
pub(crate) fn iteration_cap(dim: usize) -> usize {
    100 * dim.max(1)
}

/// `‖A‖_F`.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖Q* Q - I‖_F`.
pub fn unitarity_defect(q: &CMatrix) -> f64 {
    let gram = q.adjoint() * q;
    let eye = CMatrix::identity(q.ncols(), q.ncols());
    frobenius(&(gram - eye))
}
