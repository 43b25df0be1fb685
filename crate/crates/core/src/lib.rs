//! Symbolic finite element assembly: weak forms written as expressions are
//! differentiated and instantiated on the reference triangle, compiled to
//! register programs at runtime and assembled on a simulated accelerator.

pub mod bench;
pub mod codegen;
pub mod device;
pub mod fem;
pub mod linalg;
pub mod meshgen;
pub mod symbolic;

use thiserror::Error;

/// Any error the pipeline can produce.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Symbolic(#[from] symbolic::SymbolicError),
    #[error(transparent)]
    Fem(#[from] fem::FemError),
    #[error(transparent)]
    Mesh(#[from] fem::MeshError),
    #[error(transparent)]
    Codegen(#[from] codegen::CodegenError),
    #[error(transparent)]
    Device(#[from] device::DeviceError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/symbolic.md")]
    mod symbolic {}
    #[doc = include_str!("../../../book/src/weak_forms.md")]
    mod weak_forms {}
    #[doc = include_str!("../../../book/src/codegen.md")]
    mod codegen {}
    #[doc = include_str!("../../../book/src/device.md")]
    mod device {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
