//! Eigensolvers: a dense Hermitian decomposition for small dimensions (the
//! oracle) and a matrix-free Lanczos top-eigenpair for large periodic Jacobi
//! matrices (the workhorse).

mod dense;
mod jacobi;
mod lanczos;
pub(crate) mod tridiag;

pub use dense::{
    dense_eigen, dense_eigen_with_limit, dense_limit, dense_spectrum, dense_spectrum_with_limit,
    operator_norm, DENSE_LIMIT,
};
pub use jacobi::PeriodicJacobiMatrix;
pub use lanczos::{nonnegativity_defect, top_eigenpair, top_eigenpair_with, EigenResult, LanczosOptions};

use thiserror::Error;

use crate::rotrep::ShapeError;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone)]
pub enum SpectralError<T: Scalar> {
    #[error("matrix is not Hermitian: defect {defect}")]
    NotHermitian { defect: T },
    #[error("dimension {n} exceeds the dense limit {limit}; use the matrix-free path")]
    DenseLimit { n: usize, limit: usize },
    #[error("QL iteration stalled at dimension {n}")]
    QlStalled { n: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("zero vector")]
    ZeroVector,
    #[error(
        "no convergence to tolerance {tol} within {iterations} matvecs (best residual {residual})"
    )]
    NoConvergence { tol: T, iterations: usize, residual: T, best: Box<EigenResult<T>> },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}
