use crate::codegen::CompiledForm;
use crate::fem::{InstantiatedForm, QuadratureRule};

use super::DeviceError;

/// Evaluates one local integrand entry at a kernel argument vector
/// `(ξ, η, x0, y0, x1, y1, x2, y2)`, without the quadrature weight.
pub trait LocalEvaluator: Sync {
    /// Per-thread working storage.
    type Scratch: Send;

    fn scratch(&self) -> Self::Scratch;
    fn n_local(&self) -> usize;
    fn rule(&self) -> &QuadratureRule;
    fn bilinear(&self, entry: usize, args: &[f64; 8], s: &mut Self::Scratch) -> Result<f64, DeviceError>;
    fn linear(&self, entry: usize, args: &[f64; 8], s: &mut Self::Scratch) -> Result<f64, DeviceError>;
}

/// Runs the lowered register programs.
impl LocalEvaluator for CompiledForm {
    type Scratch = Vec<f64>;

    fn scratch(&self) -> Vec<f64> {
        Vec::with_capacity(self.programs().map(|p| p.len()).max().unwrap_or(0))
    }

    fn n_local(&self) -> usize {
        self.n_local
    }

    fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    #[inline]
    fn bilinear(&self, entry: usize, args: &[f64; 8], s: &mut Vec<f64>) -> Result<f64, DeviceError> {
        Ok(self.bilinear[entry].run_with(args, s))
    }

    #[inline]
    fn linear(&self, entry: usize, args: &[f64; 8], s: &mut Vec<f64>) -> Result<f64, DeviceError> {
        Ok(self.linear[entry].run_with(args, s))
    }
}

/// Walks the expression trees.
impl LocalEvaluator for InstantiatedForm {
    type Scratch = ();

    fn scratch(&self) {}

    fn n_local(&self) -> usize {
        self.n_local
    }

    fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    fn bilinear(&self, entry: usize, args: &[f64; 8], _: &mut ()) -> Result<f64, DeviceError> {
        self.bilinear[entry]
            .eval_with(&self.args.binder(args))
            .map_err(|e| DeviceError::Evaluation(e.to_string()))
    }

    fn linear(&self, entry: usize, args: &[f64; 8], _: &mut ()) -> Result<f64, DeviceError> {
        self.linear[entry]
            .eval_with(&self.args.binder(args))
            .map_err(|e| DeviceError::Evaluation(e.to_string()))
    }
}
