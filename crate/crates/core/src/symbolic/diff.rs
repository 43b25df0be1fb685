use std::collections::HashMap;

use super::expr::{add_all, mul_all, Expr, Func, Kind};

impl Expr {
    /// Exact partial derivative with respect to the symbol `var`.
    ///
    /// # Panics
    /// If `var` is not a symbol.
    pub fn diff(&self, var: &Expr) -> Expr {
        assert!(var.is_symbol(), "diff variable must be a symbol, got {var}");
        let mut memo = HashMap::new();
        diff_rec(self, var, &mut memo)
    }
}

fn diff_rec(e: &Expr, var: &Expr, memo: &mut HashMap<Expr, Expr>) -> Expr {
    if let Some(d) = memo.get(e) {
        return d.clone();
    }
    let d = match e.kind() {
        Kind::Num(_) => Expr::zero(),
        Kind::Sym(_) => {
            if e == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Kind::Add(terms) => add_all(terms.iter().map(|t| diff_rec(t, var, memo)).collect()),
        Kind::Mul(factors) => {
            let mut terms = Vec::with_capacity(factors.len());
            for (k, f) in factors.iter().enumerate() {
                let df = diff_rec(f, var, memo);
                if df.is_zero() {
                    continue;
                }
                let mut prod: Vec<Expr> = factors
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, g)| g.clone())
                    .collect();
                prod.push(df);
                terms.push(mul_all(prod));
            }
            add_all(terms)
        }
        Kind::Pow(base, n) => {
            let db = diff_rec(base, var, memo);
            if db.is_zero() {
                Expr::zero()
            } else {
                // base^(n-1) exists: the base is never the constant zero here
                // because constant bases have zero derivative.
                let lowered = base.powi(n - 1).expect("non-constant base");
                mul_all(vec![Expr::int(*n), lowered, db])
            }
        }
        Kind::Func(f, arg) => {
            let da = diff_rec(arg, var, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                let outer = match f {
                    Func::Sin => arg.cos(),
                    Func::Cos => arg.sin().neg(),
                    Func::Sqrt => {
                        let half = Expr::rational(1, 2).expect("nonzero denominator");
                        half.mul(&e.powi(-1).expect("sqrt of a non-constant"))
                    }
                };
                outer.mul(&da)
            }
        }
    };
    memo.insert(e.clone(), d.clone());
    d
}
