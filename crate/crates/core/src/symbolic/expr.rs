use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use super::number::Number;
use super::SymbolicError;

/// Unary functions understood by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

/// The shape of one canonical node.
///
/// Subtraction, negation and division have no node of their own: `a - b` is
/// `a + (-1)*b` and `a / b` is `a * b^(-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Num(Number),
    Sym(Arc<str>),
    Add(Box<[Expr]>),
    Mul(Box<[Expr]>),
    Pow(Expr, i64),
    Func(Func, Expr),
}

pub(crate) struct Node {
    kind: Kind,
    /// Cached `f64` value of constant nodes.
    value: f64,
}

/// Immutable, hash-consed symbolic expression.
///
/// Two `Expr`s are equal exactly when they are the same interned node, so
/// `==` is a pointer comparison. Every constructor returns the canonical form.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state);
    }
}

// Nodes are never evicted. Expressions in this crate are built once per form
// and reused for every element, so the table stays small.
static INTERNER: LazyLock<Mutex<HashMap<Kind, Expr>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn intern(kind: Kind) -> Expr {
    let mut table = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(e) = table.get(&kind) {
        return e.clone();
    }
    let value = match &kind {
        Kind::Num(n) => n.to_f64(),
        _ => f64::NAN,
    };
    let e = Expr(Arc::new(Node {
        kind: kind.clone(),
        value,
    }));
    table.insert(kind, e.clone());
    e
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Symbol constructor; `name` must match `[A-Za-z_][A-Za-z0-9_]*`.
pub fn sym(name: &str) -> Result<Expr, SymbolicError> {
    if !is_identifier(name) {
        return Err(SymbolicError::InvalidIdentifier(name.to_string()));
    }
    Ok(intern(Kind::Sym(Arc::from(name))))
}

impl Expr {
    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn num(n: Number) -> Expr {
        intern(Kind::Num(n))
    }

    pub fn int(v: i64) -> Expr {
        Expr::num(Number::int(v))
    }

    pub fn float(v: f64) -> Expr {
        Expr::num(Number::float(v))
    }

    /// Exact fraction `num/den`.
    pub fn rational(num: i64, den: i64) -> Result<Expr, SymbolicError> {
        Number::rational(num as i128, den as i128)
            .map(Expr::num)
            .ok_or(SymbolicError::DivisionByZero)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn as_number(&self) -> Option<&Number> {
        match self.kind() {
            Kind::Num(n) => Some(n),
            _ => None,
        }
    }

    /// The constant's value; `None` for anything but a constant.
    pub fn as_f64(&self) -> Option<f64> {
        match self.kind() {
            Kind::Num(_) => Some(self.0.value),
            _ => None,
        }
    }

    pub(crate) fn const_value(&self) -> f64 {
        self.0.value
    }

    pub fn symbol_name(&self) -> Option<&str> {
        match self.kind() {
            Kind::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self.kind(), Kind::Sym(_))
    }

    pub fn is_zero(&self) -> bool {
        self.as_number().is_some_and(Number::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_number().is_some_and(Number::is_one)
    }

    /// Children in canonical order.
    pub fn children(&self) -> Vec<Expr> {
        match self.kind() {
            Kind::Num(_) | Kind::Sym(_) => Vec::new(),
            Kind::Add(c) | Kind::Mul(c) => c.to_vec(),
            Kind::Pow(b, _) => vec![b.clone()],
            Kind::Func(_, a) => vec![a.clone()],
        }
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn tree_size(&self) -> usize {
        1 + match self.kind() {
            Kind::Num(_) | Kind::Sym(_) => 0,
            Kind::Add(c) | Kind::Mul(c) => c.iter().map(Expr::tree_size).sum(),
            Kind::Pow(b, _) => b.tree_size(),
            Kind::Func(_, a) => a.tree_size(),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        add_all(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        add_all(vec![self.clone(), other.neg()])
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        mul_all(vec![self.clone(), other.clone()])
    }

    pub fn neg(&self) -> Expr {
        mul_all(vec![Expr::int(-1), self.clone()])
    }

    /// `self / other`; fails only when `other` is the constant zero.
    pub fn div(&self, other: &Expr) -> Result<Expr, SymbolicError> {
        Ok(self.mul(&other.powi(-1)?))
    }

    /// Integer power; fails for a negative power of the constant zero.
    pub fn powi(&self, exp: i64) -> Result<Expr, SymbolicError> {
        pow(self, exp)
    }

    pub fn sin(&self) -> Expr {
        func(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        func(Func::Cos, self)
    }

    pub fn sqrt(&self) -> Expr {
        func(Func::Sqrt, self)
    }

    /// Rebuilds a node of the same kind around new children, canonicalising.
    pub(crate) fn rebuild(&self, children: Vec<Expr>) -> Expr {
        match self.kind() {
            Kind::Num(_) | Kind::Sym(_) => self.clone(),
            Kind::Add(_) => add_all(children),
            Kind::Mul(_) => mul_all(children),
            // A zero substituted into a negative power stays unevaluated; it
            // evaluates to an IEEE infinity.
            Kind::Pow(_, n) => pow(&children[0], *n).unwrap_or_else(|_| intern(Kind::Pow(children[0].clone(), *n))),
            Kind::Func(f, _) => func(*f, &children[0]),
        }
    }
}

/// Sum of arbitrarily many terms, in canonical form.
pub fn add_all(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t.kind() {
            Kind::Add(c) => flat.extend(c.iter().cloned()),
            _ => flat.push(t),
        }
    }

    let mut constant = Number::zero();
    let mut order: Vec<Expr> = Vec::new();
    let mut coeffs: HashMap<Expr, Number> = HashMap::new();
    for t in flat {
        if let Kind::Num(n) = t.kind() {
            constant = constant.add(n);
            continue;
        }
        let (c, rest) = split_coefficient(&t);
        match coeffs.get_mut(&rest) {
            Some(acc) => *acc = acc.add(&c),
            None => {
                order.push(rest.clone());
                coeffs.insert(rest, c);
            }
        }
    }

    let mut out: Vec<Expr> = order
        .into_iter()
        .filter_map(|rest| {
            let c = &coeffs[&rest];
            if c.is_zero() {
                None
            } else {
                Some(with_coefficient(c, &rest))
            }
        })
        .collect();
    out.sort_by(canonical_cmp);
    if !constant.is_zero() {
        out.insert(0, Expr::num(constant));
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => intern(Kind::Add(out.into_boxed_slice())),
    }
}

/// Splits a term into numeric coefficient and the remaining monomial.
fn split_coefficient(t: &Expr) -> (Number, Expr) {
    if let Kind::Mul(c) = t.kind() {
        if let Kind::Num(n) = c[0].kind() {
            let rest = if c.len() == 2 {
                c[1].clone()
            } else {
                intern(Kind::Mul(c[1..].to_vec().into_boxed_slice()))
            };
            return (n.clone(), rest);
        }
    }
    (Number::one(), t.clone())
}

/// Inverse of [`split_coefficient`]; `rest` carries no coefficient.
fn with_coefficient(c: &Number, rest: &Expr) -> Expr {
    if c.is_one() {
        return rest.clone();
    }
    let mut factors = vec![Expr::num(c.clone())];
    match rest.kind() {
        Kind::Mul(f) => factors.extend(f.iter().cloned()),
        _ => factors.push(rest.clone()),
    }
    intern(Kind::Mul(factors.into_boxed_slice()))
}

/// Product of arbitrarily many factors, in canonical form.
pub fn mul_all(factors: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(factors.len());
    for f in factors {
        match f.kind() {
            Kind::Mul(c) => flat.extend(c.iter().cloned()),
            _ => flat.push(f),
        }
    }

    let mut coeff = Number::one();
    let mut order: Vec<Expr> = Vec::new();
    let mut exps: HashMap<Expr, i64> = HashMap::new();
    for f in flat {
        let (base, e) = match f.kind() {
            Kind::Num(n) => {
                coeff = coeff.mul(n);
                continue;
            }
            Kind::Pow(b, e) => (b.clone(), *e),
            _ => (f.clone(), 1),
        };
        match exps.get_mut(&base) {
            Some(acc) => *acc = acc.saturating_add(e),
            None => {
                order.push(base.clone());
                exps.insert(base, e);
            }
        }
    }
    if coeff.is_zero() {
        return Expr::zero();
    }

    // Bases are never constants or products here, so no power refolds.
    let mut flat_out: Vec<Expr> = order
        .into_iter()
        .filter_map(|b| {
            let e = exps[&b];
            (e != 0).then(|| pow_of_base(&b, e))
        })
        .collect();
    flat_out.sort_by(canonical_cmp);
    if flat_out.is_empty() {
        return Expr::num(coeff);
    }
    if coeff.is_one() && flat_out.len() == 1 {
        return flat_out.pop().unwrap();
    }
    if !coeff.is_one() {
        flat_out.insert(0, Expr::num(coeff));
    }
    intern(Kind::Mul(flat_out.into_boxed_slice()))
}

fn pow_of_base(base: &Expr, exp: i64) -> Expr {
    if exp == 1 {
        base.clone()
    } else {
        intern(Kind::Pow(base.clone(), exp))
    }
}

fn pow(base: &Expr, exp: i64) -> Result<Expr, SymbolicError> {
    if exp == 0 {
        return Ok(Expr::one());
    }
    if exp == 1 {
        return Ok(base.clone());
    }
    match base.kind() {
        Kind::Num(n) => n.powi(exp).map(Expr::num).ok_or(SymbolicError::DivisionByZero),
        Kind::Pow(b, m) => pow(b, m.saturating_mul(exp)),
        Kind::Mul(c) => {
            let parts = c.iter().map(|f| pow(f, exp)).collect::<Result<Vec<_>, _>>()?;
            Ok(mul_all(parts))
        }
        _ => Ok(intern(Kind::Pow(base.clone(), exp))),
    }
}

fn func(f: Func, arg: &Expr) -> Expr {
    if let Kind::Num(n) = arg.kind() {
        match f {
            Func::Sin if n.is_zero() => return Expr::zero(),
            Func::Cos if n.is_zero() => return Expr::one(),
            Func::Sqrt => {
                if let Some(r) = n.exact_sqrt() {
                    return Expr::num(r);
                }
                // Square roots of negative constants stay symbolic rather than
                // introducing a NaN constant.
                if !n.is_negative() {
                    return Expr::float(n.to_f64().sqrt());
                }
            }
            _ => return Expr::float(f.apply(n.to_f64())),
        }
    }
    intern(Kind::Func(f, arg.clone()))
}

fn kind_rank(k: &Kind) -> u8 {
    match k {
        Kind::Num(_) => 0,
        Kind::Sym(_) => 1,
        Kind::Pow(..) => 2,
        Kind::Mul(_) => 3,
        Kind::Add(_) => 4,
        Kind::Func(..) => 5,
    }
}

/// Structural total order on canonical expressions. Independent of
/// construction history, so canonical forms (and everything printed from
/// them) are reproducible across runs.
pub fn canonical_cmp(a: &Expr, b: &Expr) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (ka, kb) = (a.kind(), b.kind());
    kind_rank(ka).cmp(&kind_rank(kb)).then_with(|| match (ka, kb) {
        (Kind::Num(x), Kind::Num(y)) => x.total_cmp(y),
        (Kind::Sym(x), Kind::Sym(y)) => x.cmp(y),
        (Kind::Add(x), Kind::Add(y)) | (Kind::Mul(x), Kind::Mul(y)) => cmp_slices(x, y),
        (Kind::Pow(bx, ex), Kind::Pow(by, ey)) => canonical_cmp(bx, by).then(ex.cmp(ey)),
        (Kind::Func(fx, ax), Kind::Func(fy, ay)) => fx.cmp(fy).then_with(|| canonical_cmp(ax, ay)),
        _ => unreachable!("ranks differ for distinct kinds"),
    })
}

fn cmp_slices(x: &[Expr], y: &[Expr]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        let o = canonical_cmp(a, b);
        if o != Ordering::Equal {
            return o;
        }
    }
    x.len().cmp(&y.len())
}

impl fmt::Display for Expr {
    /// Fully parenthesised infix; constants in shortest round-trip decimal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Num(n) => write!(f, "{n}"),
            Kind::Sym(s) => f.write_str(s),
            Kind::Add(c) => write_joined(f, c, " + "),
            Kind::Mul(c) => write_joined(f, c, "*"),
            Kind::Pow(b, e) => {
                if *e < 0 {
                    write!(f, "({b}^({e}))")
                } else {
                    write!(f, "({b}^{e})")
                }
            }
            Kind::Func(func, a) => {
                // Compound arguments already print their own parentheses.
                match a.kind() {
                    Kind::Add(_) | Kind::Mul(_) | Kind::Pow(..) => write!(f, "{}{a}", func.name()),
                    _ => write!(f, "{}({a})", func.name()),
                }
            }
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, items: &[Expr], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{it}")?;
    }
    f.write_str(")")
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<i32> for Expr {
    fn from(v: i32) -> Self {
        Expr::int(v as i64)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::float(v)
    }
}

impl From<&Expr> for Expr {
    fn from(v: &Expr) -> Self {
        v.clone()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl<T: Into<Expr>> std::ops::$trait<T> for Expr {
            type Output = Expr;
            fn $method(self, rhs: T) -> Expr {
                Expr::$impl(&self, &rhs.into())
            }
        }

        impl<T: Into<Expr>> std::ops::$trait<T> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: T) -> Expr {
                Expr::$impl(self, &rhs.into())
            }
        }

        impl std::ops::$trait<Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$impl(&Expr::int(self), &rhs)
            }
        }

        impl std::ops::$trait<&Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::$impl(&Expr::int(self), rhs)
            }
        }

        impl std::ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$impl(&Expr::float(self), &rhs)
            }
        }

        impl std::ops::$trait<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::$impl(&Expr::float(self), rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl<T: Into<Expr>> std::ops::Div<T> for Expr {
    type Output = Expr;
    /// # Panics
    /// On division by the constant zero; use [`Expr::div`] to handle it.
    fn div(self, rhs: T) -> Expr {
        Expr::div(&self, &rhs.into()).expect("division by the constant zero")
    }
}

impl<T: Into<Expr>> std::ops::Div<T> for &Expr {
    type Output = Expr;
    fn div(self, rhs: T) -> Expr {
        Expr::div(self, &rhs.into()).expect("division by the constant zero")
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        add_all(iter.collect())
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        mul_all(iter.collect())
    }
}
