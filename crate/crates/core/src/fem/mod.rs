//! Meshes, P1 Lagrange elements, the reference element, quadrature and the
//! instantiation of symbolic weak forms into per-entry element integrands.

mod algebra;
mod form;
mod instantiate;
mod mesh;
pub mod reference;

use thiserror::Error;

use crate::symbolic::SymbolicError;

pub use algebra::{dot, grad, SymMatrix, SymVector};
pub use form::{Field, FunctionSpace, HelmholtzProblem, WeakForm};
pub use instantiate::{instantiate, instantiate_with, InstantiatedForm};
pub use mesh::{doubled_signed_area, Mesh, MeshError};
pub use reference::{affine_map, reference_shape_functions, AffineMap, QuadratureRule};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FemError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported element family '{family}' of degree {degree}")]
    UnsupportedElement { family: String, degree: u32 },
    #[error("coordinates must be two distinct symbols")]
    InvalidCoordinates,
    #[error("{integrand} integrand references '{symbol}', which is not a reserved symbol")]
    UnexpectedSymbol { integrand: &'static str, symbol: String },
    #[error("invalid quadrature rule: {0}")]
    InvalidQuadrature(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
