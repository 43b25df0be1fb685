use crate::fem::{InstantiatedForm, QuadratureRule};

use super::{lower, CodegenError, KernelProgram};

/// Lowered integrands of one weak form plus what a launch needs to know.
#[derive(Clone, Debug)]
pub struct CompiledForm {
    /// Row-major `n_local × n_local`, test index first.
    pub bilinear: Vec<KernelProgram>,
    pub linear: Vec<KernelProgram>,
    pub n_local: usize,
    pub rule: QuadratureRule,
}

impl CompiledForm {
    pub fn n_quad(&self) -> usize {
        self.rule.len()
    }

    pub fn programs(&self) -> impl Iterator<Item = &KernelProgram> {
        self.bilinear.iter().chain(&self.linear)
    }
}

pub fn compile_form(f: &InstantiatedForm) -> Result<CompiledForm, CodegenError> {
    let lower_all = |es: &[crate::symbolic::Expr]| es.iter().map(|e| lower(e, &f.args)).collect::<Result<Vec<_>, _>>();
    let bilinear = lower_all(&f.bilinear)?;
    let linear = lower_all(&f.linear)?;
    if bilinear.len() != f.n_local * f.n_local || linear.len() != f.n_local {
        return Err(CodegenError::ShapeMismatch {
            n_local: f.n_local,
            bilinear: bilinear.len(),
            linear: linear.len(),
        });
    }
    Ok(CompiledForm {
        bilinear,
        linear,
        n_local: f.n_local,
        rule: f.rule.clone(),
    })
}
