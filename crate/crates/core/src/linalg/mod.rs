//! Dense and ELLPACK matrices, conjugate gradients, the discrete L2 error and
//! MatrixMarket / CSV export.

mod cg;
mod dense;
mod ell;
mod io;
mod norm;

use thiserror::Error;

pub use cg::{cg_solve, CgReport};
pub use dense::DenseMatrix;
pub use ell::{EllMatrix, SparsityPattern};
pub use io::{
    read_matrix_market, read_vector, write_csv, write_matrix_market, write_vector, ExportFormat, Exportable,
    MarketMatrix,
};
pub use norm::{interpolate, l2_error, norm2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value at iteration {iteration}; the matrix is probably not positive definite")]
    Breakdown { iteration: usize },
    #[error("invalid sparsity pattern: {0}")]
    InvalidPattern(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Symbolic(#[from] crate::symbolic::SymbolicError),
}

impl From<std::io::Error> for LinalgError {
    fn from(e: std::io::Error) -> Self {
        LinalgError::Io(e.to_string())
    }
}

/// Square matrix acting on vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = A x`; both slices have length [`LinearOperator::dim`].
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        Ok(y)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
