//! Runtime compilation of instantiated integrands into flat SSA register
//! programs, and emission of accelerator kernel source from a template.

mod form;
mod lower;
mod program;
mod template;

use thiserror::Error;

pub use form::{compile_form, CompiledForm};
pub use lower::lower;
pub use program::{KernelProgram, Op};
pub use template::{emit_compiled_source, emit_source, KernelTemplate, SourceConfig, PLACEHOLDERS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodegenError {
    #[error("unbound symbol '{0}'")]
    UnboundSymbol(String),
    #[error("program takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("no value supplied for placeholder {0}")]
    MissingPlaceholder(&'static str),
    #[error("template error: {0}")]
    Template(String),
    #[error("form has n_local {n_local} but {bilinear} bilinear and {linear} linear programs")]
    ShapeMismatch {
        n_local: usize,
        bilinear: usize,
        linear: usize,
    },
}
