use std::collections::HashMap;

use crate::symbolic::{Expr, Func, Kind, SymbolTable};

use super::program::{KernelProgram, Op};
use super::CodegenError;

/// Largest positive exponent expanded into a multiplication chain.
const UNROLL_POW: i64 = 4;

/// Lowers an expression to an SSA register program with constant folding and
/// common-subexpression elimination.
///
/// Sums and products are evaluated left to right in canonical child order,
/// like [`Expr::eval`]. Negative coefficients in sums become `sub`, a `-1`
/// coefficient becomes `neg`, negative powers become `div`, and `2*r` is
/// emitted as `r + r`.
pub fn lower(e: &Expr, args: &SymbolTable) -> Result<KernelProgram, CodegenError> {
    let mut l = Lowerer {
        args,
        code: Vec::new(),
        constants: Vec::new(),
        const_slots: HashMap::new(),
        cse: HashMap::new(),
        memo: HashMap::new(),
    };
    let v = l.lower(e)?;
    let result = l.reg(v);
    Ok(l.finish(result))
}

#[derive(Clone, Copy, Debug)]
enum Val {
    Const(f64),
    /// Argument slot, loaded on first use.
    Arg(u32),
    Reg(u32),
}

struct Lowerer<'a> {
    args: &'a SymbolTable,
    code: Vec<Op>,
    constants: Vec<f64>,
    const_slots: HashMap<u64, u32>,
    cse: HashMap<Op, u32>,
    memo: HashMap<Expr, Val>,
}

impl Lowerer<'_> {
    fn emit(&mut self, op: Op) -> u32 {
        let key = op.cse_key();
        if let Some(&r) = self.cse.get(&key) {
            return r;
        }
        let r = self.code.len() as u32;
        self.code.push(op);
        self.cse.insert(key, r);
        r
    }

    fn reg(&mut self, v: Val) -> u32 {
        match v {
            Val::Reg(r) => r,
            Val::Arg(s) => self.emit(Op::LoadArg(s)),
            Val::Const(c) => {
                let next = self.constants.len() as u32;
                let slot = *self.const_slots.entry(c.to_bits()).or_insert(next);
                if slot == next {
                    self.constants.push(c);
                }
                self.emit(Op::LoadConst(slot))
            }
        }
    }

    fn add(&mut self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x + y),
            _ => {
                let (ra, rb) = (self.reg(a), self.reg(b));
                Val::Reg(self.emit(Op::Add(ra, rb)))
            }
        }
    }

    fn sub(&mut self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x - y),
            _ => {
                let (ra, rb) = (self.reg(a), self.reg(b));
                Val::Reg(self.emit(Op::Sub(ra, rb)))
            }
        }
    }

    fn mul(&mut self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x * y),
            // 2*r and r+r are bitwise identical.
            (Val::Const(two), v) | (v, Val::Const(two)) if two == 2.0 => {
                let r = self.reg(v);
                Val::Reg(self.emit(Op::Add(r, r)))
            }
            _ => {
                let (ra, rb) = (self.reg(a), self.reg(b));
                Val::Reg(self.emit(Op::Mul(ra, rb)))
            }
        }
    }

    fn div(&mut self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x / y),
            _ => {
                let (ra, rb) = (self.reg(a), self.reg(b));
                Val::Reg(self.emit(Op::Div(ra, rb)))
            }
        }
    }

    fn unary(&mut self, a: Val, fold: fn(f64) -> f64, op: fn(u32) -> Op) -> Val {
        match a {
            Val::Const(x) => Val::Const(fold(x)),
            v => {
                let r = self.reg(v);
                Val::Reg(self.emit(op(r)))
            }
        }
    }

    fn neg(&mut self, a: Val) -> Val {
        self.unary(a, |x| -x, Op::Neg)
    }

    fn pow(&mut self, base: Val, n: i64) -> Val {
        debug_assert!(n > 0);
        if let Val::Const(b) = base {
            return Val::Const(match i32::try_from(n) {
                Ok(n) => b.powi(n),
                Err(_) => b.powf(n as f64),
            });
        }
        match n {
            1 => base,
            2 => self.mul(base, base),
            3 => {
                let sq = self.mul(base, base);
                self.mul(sq, base)
            }
            4 => {
                let sq = self.mul(base, base);
                self.mul(sq, sq)
            }
            _ => {
                debug_assert!(n > UNROLL_POW);
                let r = self.reg(base);
                let n = i32::try_from(n).unwrap_or(i32::MAX);
                Val::Reg(self.emit(Op::PowInt(r, n)))
            }
        }
    }

    fn lower(&mut self, e: &Expr) -> Result<Val, CodegenError> {
        if let Some(&v) = self.memo.get(e) {
            return Ok(v);
        }
        let v = match e.kind() {
            Kind::Num(_) => Val::Const(e.as_f64().expect("constant")),
            Kind::Sym(name) => {
                let slot = self
                    .args
                    .slot(e)
                    .ok_or_else(|| CodegenError::UnboundSymbol(name.to_string()))?;
                Val::Arg(slot as u32)
            }
            Kind::Add(terms) => {
                let mut acc = self.lower(&terms[0])?;
                for t in &terms[1..] {
                    if negative_coefficient(t) {
                        let magnitude = self.lower(&t.neg())?;
                        acc = self.sub(acc, magnitude);
                    } else {
                        let v = self.lower(t)?;
                        acc = self.add(acc, v);
                    }
                }
                acc
            }
            Kind::Mul(factors) => self.lower_product(factors)?,
            Kind::Pow(base, n) => {
                let b = self.lower(base)?;
                if *n > 0 {
                    self.pow(b, *n)
                } else {
                    let p = self.pow(b, n.saturating_neg());
                    self.div(Val::Const(1.0), p)
                }
            }
            Kind::Func(f, arg) => {
                let a = self.lower(arg)?;
                match f {
                    Func::Sin => self.unary(a, f64::sin, Op::Sin),
                    Func::Cos => self.unary(a, f64::cos, Op::Cos),
                    Func::Sqrt => self.unary(a, f64::sqrt, Op::Sqrt),
                }
            }
        };
        self.memo.insert(e.clone(), v);
        Ok(v)
    }

    fn lower_product(&mut self, factors: &[Expr]) -> Result<Val, CodegenError> {
        let (coeff, rest) = match factors[0].as_f64() {
            Some(c) => (c, &factors[1..]),
            None => (1.0, factors),
        };
        let mut numerator: Option<Val> = None;
        let mut denominator: Option<Val> = None;
        let negate = coeff == -1.0;
        if coeff != 1.0 && !negate {
            numerator = Some(Val::Const(coeff));
        }
        for f in rest {
            match f.kind() {
                Kind::Pow(base, n) if *n < 0 => {
                    let b = self.lower(base)?;
                    let p = self.pow(b, n.saturating_neg());
                    denominator = Some(match denominator {
                        None => p,
                        Some(d) => self.mul(d, p),
                    });
                }
                _ => {
                    let v = self.lower(f)?;
                    numerator = Some(match numerator {
                        None => v,
                        Some(acc) => self.mul(acc, v),
                    });
                }
            }
        }
        let mut out = match (numerator, denominator) {
            (Some(n), None) => n,
            (Some(n), Some(d)) => self.div(n, d),
            (None, Some(d)) => self.div(Val::Const(if negate { -1.0 } else { 1.0 }), d),
            (None, None) => Val::Const(coeff),
        };
        if negate && numerator.is_some() {
            out = self.neg(out);
        }
        Ok(out)
    }

    /// Drops instructions the result does not depend on and renumbers.
    fn finish(self, result: u32) -> KernelProgram {
        let mut live = vec![false; self.code.len()];
        live[result as usize] = true;
        for i in (0..self.code.len()).rev() {
            if live[i] {
                for o in self.code[i].operands() {
                    live[o as usize] = true;
                }
            }
        }
        let mut remap = vec![u32::MAX; self.code.len()];
        let mut code = Vec::with_capacity(self.code.len());
        let mut used_consts = Vec::new();
        let mut const_remap = vec![u32::MAX; self.constants.len()];
        for (i, op) in self.code.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let op = match *op {
                Op::LoadConst(c) => {
                    if const_remap[c as usize] == u32::MAX {
                        const_remap[c as usize] = used_consts.len() as u32;
                        used_consts.push(self.constants[c as usize]);
                    }
                    Op::LoadConst(const_remap[c as usize])
                }
                other => other.map_operands(|o| remap[o as usize]),
            };
            remap[i] = code.len() as u32;
            code.push(op);
        }
        KernelProgram {
            code,
            constants: used_consts,
            arity: self.args.len(),
            result: remap[result as usize],
        }
    }
}

fn negative_coefficient(t: &Expr) -> bool {
    match t.kind() {
        Kind::Mul(f) => f[0].as_f64().is_some_and(|c| c < 0.0),
        _ => false,
    }
}
