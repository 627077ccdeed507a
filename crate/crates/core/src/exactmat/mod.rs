//! Exact field arithmetic and dense matrices over `Q` and `F_p` (p odd).
//!
//! Rank, inverse and null spaces use Gauss-Jordan elimination with
//! first-nonzero pivoting. Determinants, including the pencil determinant
//! `det(A + tB)`, use fraction-free Bareiss elimination so that the polynomial
//! version works over fields too small for interpolation.

mod matrix;
mod poly;
mod scalar;

pub use matrix::{det_poly, Echelon, Matrix};
pub use poly::Poly;
pub use scalar::{Field, Scalar, MAX_MODULUS};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division left a remainder")]
    InexactDivision,
}
