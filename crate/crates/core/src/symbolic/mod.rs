//! A small computer-algebra engine: canonical hash-consed expressions,
//! differentiation, substitution, evaluation and a text parser.
//!
//! Every constructor returns a canonical form. Sums and products are
//! flattened, sorted by a structural total order and have their numeric parts
//! folded; `x + 0`, `x * 1`, `x^1` and `x^0` collapse, and `x * 0` is `0`.
//! Like terms and like factors are merged (`x + x` is `2*x`, `x*x` is `x^2`).
//! Integer constants are exact rationals until they meet a float.

mod diff;
mod eval;
mod expr;
mod number;
mod parse;
mod subst;

use std::collections::HashMap;

use thiserror::Error;

pub use expr::{add_all, canonical_cmp, mul_all, sym, Expr, Func, Kind};
pub use number::Number;
pub use parse::parse;
pub use subst::Bindings;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("invalid identifier '{0}'")]
    InvalidIdentifier(String),
    #[error("division by the constant zero")]
    DivisionByZero,
    #[error("unbound symbol '{0}'")]
    UnboundSymbol(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function '{name}' at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("exponent at offset {offset} is not an integer constant")]
    NonIntegerExponent { offset: usize },
    #[error("'{0}' is not a symbol")]
    NotASymbol(String),
    #[error("symbol '{0}' appears twice in the table")]
    DuplicateSymbol(String),
}

/// Dense argument-slot assignment for a fixed list of symbols.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    symbols: Vec<Expr>,
    slots: HashMap<Expr, usize>,
}

impl SymbolTable {
    pub fn new(symbols: &[Expr]) -> Result<Self, SymbolicError> {
        let mut slots = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            let name = s
                .symbol_name()
                .ok_or_else(|| SymbolicError::NotASymbol(s.to_string()))?;
            if slots.insert(s.clone(), i).is_some() {
                return Err(SymbolicError::DuplicateSymbol(name.to_string()));
            }
        }
        Ok(SymbolTable {
            symbols: symbols.to_vec(),
            slots,
        })
    }

    /// Builds a table from symbol names, in slot order.
    pub fn from_names(names: &[&str]) -> Result<Self, SymbolicError> {
        let symbols = names.iter().map(|n| sym(n)).collect::<Result<Vec<_>, _>>()?;
        Self::new(&symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn slot(&self, s: &Expr) -> Option<usize> {
        self.slots.get(s).copied()
    }

    pub fn symbols(&self) -> &[Expr] {
        &self.symbols
    }

    /// Lookup closure for [`Expr::eval_with`] reading values from `args` by
    /// slot. A linear scan over the handles beats hashing for the handful of
    /// kernel arguments.
    pub fn binder<'a>(&'a self, args: &'a [f64]) -> impl Fn(&Expr) -> Option<f64> + 'a {
        move |s: &Expr| {
            self.symbols
                .iter()
                .position(|t| t == s)
                .and_then(|i| args.get(i).copied())
        }
    }
}

#[cfg(test)]
mod tests;
