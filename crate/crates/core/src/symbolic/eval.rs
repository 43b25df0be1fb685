use std::collections::HashMap;

use super::expr::{Expr, Kind};
use super::SymbolicError;

impl Expr {
    /// Reference IEEE-double evaluation with a fixed left-to-right child
    /// order. Division by zero yields an infinity, not an error.
    pub fn eval(&self, values: &HashMap<String, f64>) -> Result<f64, SymbolicError> {
        self.eval_with(&|s: &Expr| values.get(s.symbol_name()?).copied())
    }

    /// Evaluation with a caller-supplied symbol lookup.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<f64, SymbolicError>
    where
        F: Fn(&Expr) -> Option<f64>,
    {
        let mut unbound = None;
        let v = walk(self, lookup, &mut unbound);
        match unbound {
            None => Ok(v),
            Some(e) => Err(SymbolicError::UnboundSymbol(
                e.symbol_name().unwrap_or_default().to_string(),
            )),
        }
    }
}

/// Returns a plain `f64` so the recursion stays in registers; the first
/// unbound symbol is recorded in `unbound`.
fn walk<F>(e: &Expr, lookup: &F, unbound: &mut Option<Expr>) -> f64
where
    F: Fn(&Expr) -> Option<f64>,
{
    match e.kind() {
        Kind::Num(_) => e.const_value(),
        Kind::Sym(_) => lookup(e).unwrap_or_else(|| {
            unbound.get_or_insert_with(|| e.clone());
            f64::NAN
        }),
        Kind::Add(terms) => {
            let mut acc = walk(&terms[0], lookup, unbound);
            for t in &terms[1..] {
                acc += walk(t, lookup, unbound);
            }
            acc
        }
        Kind::Mul(factors) => {
            let mut acc = walk(&factors[0], lookup, unbound);
            for f in &factors[1..] {
                acc *= walk(f, lookup, unbound);
            }
            acc
        }
        Kind::Pow(base, n) => powi(walk(base, lookup, unbound), *n),
        Kind::Func(f, arg) => f.apply(walk(arg, lookup, unbound)),
    }
}

fn powi(base: f64, n: i64) -> f64 {
    match i32::try_from(n) {
        Ok(n) => base.powi(n),
        Err(_) => base.powf(n as f64),
    }
}
