//! Dense linear algebra and quadrature kernels.
//!
//! Everything here is deterministic: each reduction is summed in a fixed
//! order, so results do not depend on how many worker threads are running.

mod eigen;
mod matrix;
mod quadrature;

pub use eigen::{spd_sqrt, sym_eig, sym_eigenvalues, SymEigen};
pub use matrix::{dot, Cholesky, DenseMatrix, SpdMatrix, SymMatrix};
pub use quadrature::{make_quadrature, QuadratureKind, Quadrature1D};
