//! Exact integer linear algebra: determinants, Smith normal form with
//! transforms, and invariant factors of finitely presented abelian groups.

mod abelian;
mod det;
mod matrix;
mod snf;

pub use abelian::{invariant_factors, AbelianStructure};
pub use det::determinant;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("relation matrix has {found} columns, expected {expected}")]
    ColumnMismatch { expected: usize, found: usize },
}
