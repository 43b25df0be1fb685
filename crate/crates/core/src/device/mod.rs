//! A software model of the accelerator assembly kernel: blocks of
//! `(quadrature point, local entry, element)` threads, per-block shared
//! memory, barriers and atomic additions into global memory.

mod arrays;
mod assemble;
mod evaluator;
mod sim;

use thiserror::Error;

pub use arrays::{build_sparsity, flatten_mesh, DeviceArrays};
pub use assemble::{
    assemble_dense, assemble_dense_with, assemble_sparse, assemble_sparse_with, reference_assemble, GlobalSystem,
    LaunchConfig, DEGENERATE_DET,
};
pub use evaluator::LocalEvaluator;
pub use sim::{launch, AtomicF64Array, BlockKernel, ExecMode, Step, ThreadIdx, MAX_THREADS_PER_BLOCK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("invalid launch: {0}")]
    Launch(String),
    #[error("barrier deadlock in block {block}, phase {phase}: {waiting} threads wait while {exited} exited")]
    BarrierDeadlock {
        block: usize,
        phase: usize,
        waiting: usize,
        exited: usize,
    },
    #[error("element {element} is degenerate (det J = {det:e})")]
    DegenerateElement { element: usize, det: f64 },
    #[error("column {col} is not in the sparsity pattern of row {row}")]
    PatternMismatch { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}
