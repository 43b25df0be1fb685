use std::collections::HashSet;
use std::fmt;

use super::CodegenError;

/// One SSA instruction. Instruction `i` writes register `i`; operands name
/// earlier registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    LoadArg(u32),
    /// Index into the constant pool.
    LoadConst(u32),
    Add(u32, u32),
    Sub(u32, u32),
    Mul(u32, u32),
    Div(u32, u32),
    Neg(u32),
    PowInt(u32, i32),
    Sin(u32),
    Cos(u32),
    Sqrt(u32),
}

impl Op {
    pub fn operands(&self) -> impl Iterator<Item = u32> {
        let (a, b) = match *self {
            Op::LoadArg(_) | Op::LoadConst(_) => (None, None),
            Op::Add(a, b) | Op::Sub(a, b) | Op::Mul(a, b) | Op::Div(a, b) => (Some(a), Some(b)),
            Op::Neg(a) | Op::PowInt(a, _) | Op::Sin(a) | Op::Cos(a) | Op::Sqrt(a) => (Some(a), None),
        };
        a.into_iter().chain(b)
    }

    pub(crate) fn map_operands(self, f: impl Fn(u32) -> u32) -> Op {
        match self {
            Op::LoadArg(_) | Op::LoadConst(_) => self,
            Op::Add(a, b) => Op::Add(f(a), f(b)),
            Op::Sub(a, b) => Op::Sub(f(a), f(b)),
            Op::Mul(a, b) => Op::Mul(f(a), f(b)),
            Op::Div(a, b) => Op::Div(f(a), f(b)),
            Op::Neg(a) => Op::Neg(f(a)),
            Op::PowInt(a, n) => Op::PowInt(f(a), n),
            Op::Sin(a) => Op::Sin(f(a)),
            Op::Cos(a) => Op::Cos(f(a)),
            Op::Sqrt(a) => Op::Sqrt(f(a)),
        }
    }

    /// Key under which two instructions compute the same value: commutative
    /// operands are ordered.
    pub(crate) fn cse_key(self) -> Op {
        match self {
            Op::Add(a, b) if b < a => Op::Add(b, a),
            Op::Mul(a, b) if b < a => Op::Mul(b, a),
            _ => self,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Op::LoadArg(_) => "load_arg",
            Op::LoadConst(_) => "load_const",
            Op::Add(..) => "add",
            Op::Sub(..) => "sub",
            Op::Mul(..) => "mul",
            Op::Div(..) => "div",
            Op::Neg(_) => "neg",
            Op::PowInt(..) => "powi",
            Op::Sin(_) => "sin",
            Op::Cos(_) => "cos",
            Op::Sqrt(_) => "sqrt",
        }
    }
}

/// Flat register program compiled from one expression.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelProgram {
    pub(crate) code: Vec<Op>,
    pub(crate) constants: Vec<f64>,
    pub(crate) arity: usize,
    pub(crate) result: u32,
}

impl KernelProgram {
    pub fn instructions(&self) -> &[Op] {
        &self.code
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn result(&self) -> u32 {
        self.result
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// The folded value when the whole program is a single constant load.
    pub fn as_constant(&self) -> Option<f64> {
        match self.code.as_slice() {
            [Op::LoadConst(c)] => Some(self.constants[*c as usize]),
            _ => None,
        }
    }

    pub fn run(&self, args: &[f64]) -> Result<f64, CodegenError> {
        if args.len() != self.arity {
            return Err(CodegenError::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let mut regs = Vec::with_capacity(self.code.len());
        Ok(self.run_with(args, &mut regs))
    }

    /// Hot-path entry: `regs` is caller-owned scratch, `args` must hold at
    /// least `arity` values.
    #[inline]
    pub fn run_with(&self, args: &[f64], regs: &mut Vec<f64>) -> f64 {
        regs.resize(self.code.len(), 0.0);
        let args = &args[..self.arity];
        for (i, op) in self.code.iter().enumerate() {
            let r = |k: u32| regs[k as usize];
            regs[i] = match *op {
                Op::LoadArg(s) => args[s as usize],
                Op::LoadConst(c) => self.constants[c as usize],
                Op::Add(a, b) => r(a) + r(b),
                Op::Sub(a, b) => r(a) - r(b),
                Op::Mul(a, b) => r(a) * r(b),
                Op::Div(a, b) => r(a) / r(b),
                Op::Neg(a) => -r(a),
                Op::PowInt(a, n) => r(a).powi(n),
                Op::Sin(a) => r(a).sin(),
                Op::Cos(a) => r(a).cos(),
                Op::Sqrt(a) => r(a).sqrt(),
            };
        }
        regs[self.result as usize]
    }

    /// Checks single assignment, operand ordering and the absence of
    /// duplicate instructions.
    pub fn verify(&self) -> Result<(), String> {
        let mut seen = HashSet::new();
        for (i, op) in self.code.iter().enumerate() {
            if let Some(bad) = op.operands().find(|&o| o as usize >= i) {
                return Err(format!("r{i} reads r{bad} before it is written"));
            }
            match *op {
                Op::LoadArg(s) if s as usize >= self.arity => {
                    return Err(format!("r{i} loads argument {s} of {}", self.arity))
                }
                Op::LoadConst(c) if c as usize >= self.constants.len() => {
                    return Err(format!("r{i} loads missing constant {c}"))
                }
                _ => {}
            }
            if !seen.insert(op.cse_key()) {
                return Err(format!("r{i} duplicates an earlier instruction"));
            }
        }
        if self.result as usize >= self.code.len() {
            return Err("result register out of range".into());
        }
        Ok(())
    }
}

impl fmt::Display for KernelProgram {
    /// One instruction per line, e.g. `r3 = mul r1 r2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.code.iter().enumerate() {
            write!(f, "r{i} = {}", op.mnemonic())?;
            match *op {
                Op::LoadArg(s) => write!(f, " {s}")?,
                Op::LoadConst(c) => write!(f, " {:?}", self.constants[c as usize])?,
                Op::PowInt(a, n) => write!(f, " r{a} {n}")?,
                _ => {
                    for o in op.operands() {
                        write!(f, " r{o}")?;
                    }
                }
            }
            writeln!(f)?;
        }
        writeln!(f, "ret r{}", self.result)
    }
}
