//! Finite-dimensional linear algebra over the smooth complex ring.

mod basis;
mod complex;
mod eigen;
mod json;
mod vector;

use thiserror::Error;

use crate::scalar::{Backend, Scalar};
use crate::weil::WeilError;

pub use basis::{gram_matrix, gram_schmidt, is_orthonormal, linearly_independent, normalize};
pub use complex::{complex_apart, complex_eq, SmoothComplex};
pub use eigen::{eigen_hermitian, eigen_hermitian_with_basis, EigenPair};
pub use json::{entry_from_json, entry_to_json, EntryJson, MatrixJson, PartJson, ScalarJson, VectorJson};
pub use vector::{
    finite_sum, inner_product, is_hermitian, is_hermitian_within, matrix_eq, matrix_of, pauli, tensor, CardinalIndex,
    JetMatrix, JetVector, Kronecker, LinearProgram,
};

/// Coefficient tolerance used by verdicts and residual checks: zero on the
/// exact backend, `1e-9` on the approximate one.
pub fn tolerance<S: Scalar>() -> f64 {
    match S::BACKEND {
        Backend::Exact => 0.0,
        Backend::Approx => APPROX_TOL,
    }
}

pub const APPROX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("empty family")]
    EmptyFamily,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("norm squared is not apart from zero")]
    NotInvertibleNorm,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("standard part has a repeated eigenvalue; supply an eigenbasis")]
    DegenerateStandardPart,
    #[error("matrix is singular")]
    Singular,
    #[error("map failed a linearity probe")]
    NotLinear,
    #[error("{0}")]
    UnsupportedExact(String),
    #[error("{0}")]
    MalformedInput(String),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

impl LinalgError {
    pub fn name(&self) -> &'static str {
        match self {
            LinalgError::EmptyFamily => "EmptyFamily",
            LinalgError::MixedDimensions { .. } => "MixedDimensions",
            LinalgError::NotSquare { .. } => "NotSquare",
            LinalgError::NotInvertibleNorm => "NotInvertibleNorm",
            LinalgError::NotHermitian => "NotHermitian",
            LinalgError::DegenerateStandardPart => "DegenerateStandardPart",
            LinalgError::Singular => "Singular",
            LinalgError::NotLinear => "NotLinear",
            LinalgError::UnsupportedExact(_) => "UnsupportedExact",
            LinalgError::MalformedInput(_) => "MalformedInput",
            LinalgError::Weil(e) => e.name(),
        }
    }
}
