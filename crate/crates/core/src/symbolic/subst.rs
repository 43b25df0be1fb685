use std::collections::{BTreeSet, HashMap};

use super::expr::{add_all, mul_all, Expr, Kind};

/// Symbol → replacement map used by [`Expr::substitute`].
pub type Bindings = HashMap<Expr, Expr>;

impl Expr {
    /// Simultaneous substitution of symbols, followed by canonicalisation.
    ///
    /// Replacements are not themselves searched for further substitutions, so
    /// `{x → y, y → x}` swaps the two symbols.
    pub fn substitute(&self, bindings: &Bindings) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut memo = HashMap::new();
        subst_rec(self, bindings, &mut memo)
    }

    /// Names of all symbols occurring in the expression.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        collect_symbols(self, &mut out, &mut seen);
        out
    }

    /// Distributes products over sums and expands positive integer powers of
    /// sums.
    pub fn expand(&self) -> Expr {
        let mut memo = HashMap::new();
        expand_rec(self, &mut memo)
    }
}

fn subst_rec(e: &Expr, bindings: &Bindings, memo: &mut HashMap<Expr, Expr>) -> Expr {
    if let Some(r) = memo.get(e) {
        return r.clone();
    }
    let r = match e.kind() {
        Kind::Num(_) => e.clone(),
        Kind::Sym(_) => bindings.get(e).cloned().unwrap_or_else(|| e.clone()),
        _ => {
            let children = e.children();
            let new: Vec<Expr> = children.iter().map(|c| subst_rec(c, bindings, memo)).collect();
            if new == children {
                e.clone()
            } else {
                e.rebuild(new)
            }
        }
    };
    memo.insert(e.clone(), r.clone());
    r
}

fn collect_symbols(e: &Expr, out: &mut BTreeSet<String>, seen: &mut std::collections::HashSet<Expr>) {
    if !seen.insert(e.clone()) {
        return;
    }
    match e.kind() {
        Kind::Sym(s) => {
            out.insert(s.to_string());
        }
        _ => {
            for c in e.children() {
                collect_symbols(&c, out, seen);
            }
        }
    }
}

fn expand_rec(e: &Expr, memo: &mut HashMap<Expr, Expr>) -> Expr {
    if let Some(r) = memo.get(e) {
        return r.clone();
    }
    let r = match e.kind() {
        Kind::Num(_) | Kind::Sym(_) => e.clone(),
        Kind::Add(terms) => add_all(terms.iter().map(|t| expand_rec(t, memo)).collect()),
        Kind::Mul(factors) => {
            let parts: Vec<Expr> = factors.iter().map(|f| expand_rec(f, memo)).collect();
            parts.into_iter().fold(Expr::one(), |acc, f| distribute(&acc, &f))
        }
        Kind::Pow(base, n) if *n > 1 => {
            let b = expand_rec(base, memo);
            if matches!(b.kind(), Kind::Add(_)) {
                let mut acc = b.clone();
                for _ in 1..*n {
                    acc = distribute(&acc, &b);
                }
                acc
            } else {
                e.rebuild(vec![b])
            }
        }
        Kind::Pow(base, _) | Kind::Func(_, base) => e.rebuild(vec![expand_rec(base, memo)]),
    };
    memo.insert(e.clone(), r.clone());
    r
}

fn terms_of(e: &Expr) -> Vec<Expr> {
    match e.kind() {
        Kind::Add(t) => t.to_vec(),
        _ => vec![e.clone()],
    }
}

fn distribute(a: &Expr, b: &Expr) -> Expr {
    let (ta, tb) = (terms_of(a), terms_of(b));
    let mut out = Vec::with_capacity(ta.len() * tb.len());
    for x in &ta {
        for y in &tb {
            out.push(mul_all(vec![x.clone(), y.clone()]));
        }
    }
    add_all(out)
}
