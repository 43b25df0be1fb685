use std::collections::HashMap;

use proptest::prelude::*;

use super::*;

fn x() -> Expr {
    sym("x").unwrap()
}

fn y() -> Expr {
    sym("y").unwrap()
}

fn at(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn demo_f() -> Expr {
    let (x, y) = (x(), y());
    -2 * (&x * &x + &y * &y) + 36
}

#[test]
fn symbols_are_interned() {
    assert_eq!(sym("x").unwrap(), sym("x").unwrap());
    assert_ne!(sym("x").unwrap(), sym("y").unwrap());
    assert_eq!(sym("x").unwrap().to_string(), "x");
}

#[test]
fn symbol_grammar() {
    assert!(matches!(sym("2x"), Err(SymbolicError::InvalidIdentifier(_))));
    assert!(sym("").is_err());
    assert!(sym("a-b").is_err());
    assert!(sym("_u_x1").is_ok());
}

#[test]
#[allow(clippy::erasing_op)]
fn identities_and_folding() {
    let x = x();
    assert!((&x * 0).is_zero());
    assert_eq!(Expr::int(2) + Expr::int(3), Expr::int(5));
    assert_eq!(&x + 0, x);
    assert_eq!(&x * 1, x);
    assert_eq!(x.powi(1).unwrap(), x);
    assert_eq!(x.powi(0).unwrap(), Expr::one());
    assert_eq!(&x + &x, 2 * &x);
    assert_eq!(&x * &x, x.powi(2).unwrap());
    assert_eq!(&x - &x, Expr::zero());
    assert_eq!((&x / &x), Expr::one());
}

#[test]
fn division_by_constant_zero_fails() {
    assert_eq!(x().div(&Expr::zero()), Err(SymbolicError::DivisionByZero));
    assert_eq!(Expr::zero().powi(-2), Err(SymbolicError::DivisionByZero));
    assert!(Expr::rational(1, 0).is_err());
}

#[test]
fn rational_constants_stay_exact() {
    let third = Expr::rational(1, 3).unwrap();
    assert_eq!(&third + &third + &third, Expr::one());
    assert!(Expr::float(0.5).mul(&Expr::int(2)).as_number().unwrap() == &Number::float(1.0));
}

/// Term-by-term product of two polynomials given as coefficient maps over
/// monomial exponents, computed without the CAS.
fn poly_mul(a: &[((u32, u32), i64)], b: &[((u32, u32), i64)]) -> HashMap<(u32, u32), i64> {
    let mut out = HashMap::new();
    for ((ax, ay), ca) in a {
        for ((bx, by), cb) in b {
            *out.entry((ax + bx, ay + by)).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn poly_to_expr(p: &HashMap<(u32, u32), i64>) -> Expr {
    p.iter()
        .map(|(&(ex, ey), &c)| Expr::int(c) * x().powi(ex as i64).unwrap() * y().powi(ey as i64).unwrap())
        .sum()
}

#[test]
fn binomial_expansion_matches_term_by_term_oracle() {
    let sum = &x() + &y();
    let expanded = sum.powi(2).unwrap().expand();
    let lin = [((1, 0), 1), ((0, 1), 1)];
    assert_eq!(expanded, poly_to_expr(&poly_mul(&lin, &lin)));
    assert_eq!(expanded, x().powi(2).unwrap() + 2 * x() * y() + y().powi(2).unwrap());

    let cubed = (&x() - 2 * y() + 1).powi(3).unwrap().expand();
    let tri = [((1, 0), 1), ((0, 1), -2), ((0, 0), 1)];
    let sq = poly_mul(&tri, &tri);
    let sq: Vec<_> = sq.into_iter().collect();
    assert_eq!(cubed, poly_to_expr(&poly_mul(&sq, &tri)));
}

#[test]
fn derivatives() {
    let (x, y) = (x(), y());
    assert_eq!((x.powi(2).unwrap() + &y).diff(&x), 2 * &x);
    assert_eq!((&x * &y).sin().diff(&x), &y * (&x * &y).cos());
    assert_eq!(y.diff(&x), Expr::zero());
    assert_eq!(Expr::int(7).diff(&x), Expr::zero());
    assert_eq!(x.cos().diff(&x), -x.sin());
}

#[test]
fn sqrt_derivative() {
    let x = x();
    let d = x.sqrt().diff(&x);
    let v = d.eval(&at(&[("x", 4.0)])).unwrap();
    assert_eq!(v, 0.25);
}

#[test]
fn substitution() {
    let (x, y) = (x(), y());
    let mut b = Bindings::new();
    b.insert(x.clone(), y.clone());
    assert_eq!((&x + &y).substitute(&b), 2 * &y);
    assert_eq!(x.substitute(&Bindings::new()), x);

    let mut swap = Bindings::new();
    swap.insert(x.clone(), y.clone());
    swap.insert(y.clone(), x.clone());
    assert_eq!((&x * &y).substitute(&swap), &x * &y);
    assert_eq!((&x - &y).substitute(&swap), &y - &x);
}

#[test]
fn substituting_zero_into_a_pole_evaluates_to_infinity() {
    let x = x();
    let mut b = Bindings::new();
    b.insert(x.clone(), Expr::zero());
    let e = x.powi(-1).unwrap().substitute(&b);
    assert_eq!(e.eval(&HashMap::new()).unwrap(), f64::INFINITY);
}

#[test]
fn evaluation() {
    assert_eq!(demo_f().eval(&at(&[("x", 0.0), ("y", 0.0)])).unwrap(), 36.0);
    assert_eq!((x() / y()).eval(&at(&[("x", 1.0), ("y", 0.0)])).unwrap(), f64::INFINITY);
    assert_eq!(x().sin().eval(&at(&[("x", 0.0)])).unwrap(), 0.0);
    assert_eq!(
        (x() + y()).eval(&at(&[("x", 1.0)])),
        Err(SymbolicError::UnboundSymbol("y".into()))
    );
}

#[test]
fn free_symbols() {
    let names = |e: &Expr| e.free_symbols().into_iter().collect::<Vec<_>>();
    assert_eq!(names(&(x() * y() + 1)), vec!["x", "y"]);
    assert!(Expr::int(5).free_symbols().is_empty());
    let mut b = Bindings::new();
    b.insert(x(), y());
    assert_eq!(names(&x().substitute(&b)), vec!["y"]);
}

#[test]
fn parsing() {
    assert_eq!(parse("-2*(x^2+y^2)+36").unwrap(), demo_f());
    assert_eq!(parse("-2*(x*x + y*y) + 36").unwrap(), demo_f());
    assert_eq!(parse("2+3*4").unwrap().eval(&HashMap::new()).unwrap(), 14.0);
    assert_eq!(parse("-x^2").unwrap(), -x().powi(2).unwrap());
    assert_eq!(parse("2^3^2").unwrap(), Expr::int(512));
    assert_eq!(parse("x^-1").unwrap(), x().powi(-1).unwrap());
    assert_eq!(parse("sqrt(4)").unwrap(), Expr::int(2));
    assert_eq!(parse("1.5e1").unwrap(), Expr::float(15.0));
    assert_eq!(parse("  x  ").unwrap(), x());
}

#[test]
fn parse_errors_carry_offsets() {
    assert_eq!(
        parse("sin(x"),
        Err(SymbolicError::Syntax {
            offset: 5,
            message: "expected ')'".into()
        })
    );
    assert!(matches!(
        parse("tan(x)"),
        Err(SymbolicError::UnknownFunction { offset: 0, .. })
    ));
    assert!(matches!(
        parse("x^y"),
        Err(SymbolicError::NonIntegerExponent { offset: 2 })
    ));
    assert!(matches!(parse("x^0.5"), Err(SymbolicError::NonIntegerExponent { .. })));
    assert!(matches!(parse("1/0"), Err(SymbolicError::Syntax { offset: 1, .. })));
    assert!(matches!(parse("x +"), Err(SymbolicError::Syntax { offset: 3, .. })));
    assert!(matches!(parse("x y"), Err(SymbolicError::Syntax { offset: 2, .. })));
    assert!(matches!(parse(""), Err(SymbolicError::Syntax { offset: 0, .. })));
}

#[test]
fn printing_is_fully_parenthesised() {
    assert_eq!(demo_f().to_string(), "(36 + ((-2)*((x^2) + (y^2))))");
    assert_eq!(x().powi(-2).unwrap().to_string(), "(x^(-2))");
    assert_eq!((x() * 0.5).to_string(), "(0.5*x)");
    assert_eq!((x() + Expr::rational(-1, 3).unwrap()).to_string(), "((-1/3) + x)");
    assert_eq!((x() + y()).sin().to_string(), "sin(x + y)");
}

#[test]
fn symbol_table() {
    let t = SymbolTable::from_names(&["xi", "eta"]).unwrap();
    assert_eq!(t.slot(&sym("eta").unwrap()), Some(1));
    assert_eq!(t.slot(&x()), None);
    assert!(matches!(
        SymbolTable::from_names(&["a", "a"]),
        Err(SymbolicError::DuplicateSymbol(_))
    ));
    assert!(SymbolTable::new(&[Expr::int(1)]).is_err());
    let args = [0.25, 0.5];
    let e = sym("xi").unwrap() + sym("eta").unwrap();
    assert_eq!(e.eval_with(&t.binder(&args)).unwrap(), 0.75);
}

#[test]
fn concurrent_construction_is_sound() {
    let handles: Vec<_> = (0..8)
        .map(|k| {
            std::thread::spawn(move || {
                let x = sym("x").unwrap();
                let y = sym("y").unwrap();
                let mut acc = Expr::zero();
                for i in 0..200 {
                    acc = acc + (&x + (i % 7)) * (&y - k % 3);
                }
                acc
            })
        })
        .collect();
    let results: Vec<Expr> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for (k, r) in results.iter().enumerate() {
        for (j, s) in results.iter().enumerate() {
            assert_eq!(k % 3 == j % 3, r == s);
        }
    }
}

/// Plain tree used to drive property tests through the public constructors.
#[derive(Clone, Debug)]
enum Raw {
    X,
    Y,
    Int(i64),
    Float(f64),
    Add(Box<Raw>, Box<Raw>),
    Sub(Box<Raw>, Box<Raw>),
    Mul(Box<Raw>, Box<Raw>),
    Div(Box<Raw>, Box<Raw>),
    Pow(Box<Raw>, i64),
    Sin(Box<Raw>),
    Cos(Box<Raw>),
    Sqrt(Box<Raw>),
}

impl Raw {
    fn build(&self) -> Option<Expr> {
        Some(match self {
            Raw::X => x(),
            Raw::Y => y(),
            Raw::Int(v) => Expr::int(*v),
            Raw::Float(v) => Expr::float(*v),
            Raw::Add(a, b) => a.build()? + b.build()?,
            Raw::Sub(a, b) => a.build()? - b.build()?,
            Raw::Mul(a, b) => a.build()? * b.build()?,
            Raw::Div(a, b) => a.build()?.div(&b.build()?).ok()?,
            Raw::Pow(a, n) => a.build()?.powi(*n).ok()?,
            Raw::Sin(a) => a.build()?.sin(),
            Raw::Cos(a) => a.build()?.cos(),
            Raw::Sqrt(a) => a.build()?.sqrt(),
        })
    }
}

fn raw_strategy() -> impl Strategy<Value = Raw> {
    let leaf = prop_oneof![
        Just(Raw::X),
        Just(Raw::Y),
        (-3i64..=3).prop_map(Raw::Int),
        (-2.0f64..2.0).prop_map(|v| Raw::Float((v * 8.0).round() / 8.0)),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Add(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Sub(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Mul(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Div(a.into(), b.into())),
            (inner.clone(), -2i64..=3).prop_map(|(a, n)| Raw::Pow(a.into(), n)),
            inner.clone().prop_map(|a| Raw::Sin(a.into())),
            inner.clone().prop_map(|a| Raw::Cos(a.into())),
            inner.prop_map(|a| Raw::Sqrt(a.into())),
        ]
    })
}

/// Smallest |denominator| and smallest sqrt argument reachable in `e` at the
/// point, used to stay away from poles and branch points.
fn singular_margin(e: &Expr, v: &HashMap<String, f64>) -> f64 {
    let own = match e.kind() {
        Kind::Pow(b, n) if *n < 0 => b.eval(v).map(f64::abs).unwrap_or(0.0),
        // Central differences lose accuracy quickly near the sqrt branch
        // point, so demand a wider berth there.
        Kind::Func(Func::Sqrt, a) => a.eval(v).unwrap_or(0.0) / 50.0,
        _ => f64::INFINITY,
    };
    e.children().iter().map(|c| singular_margin(c, v)).fold(own, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_matches_central_differences(
        raw in raw_strategy(),
        points in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 50),
    ) {
        let Some(e) = raw.build() else { return Ok(()) };
        let xs = x();
        let d = e.diff(&xs);
        let h = 1e-5;
        for (px, py) in points {
            let v = at(&[("x", px), ("y", py)]);
            let probe = at(&[("x", px + h), ("y", py)]);
            let probe_m = at(&[("x", px - h), ("y", py)]);
            if singular_margin(&e, &v).min(singular_margin(&e, &probe)).min(singular_margin(&e, &probe_m)) < 1e-3 {
                continue;
            }
            let exact = d.eval(&v).unwrap();
            let fd = (e.eval(&probe).unwrap() - e.eval(&probe_m).unwrap()) / (2.0 * h);
            if !exact.is_finite() || !fd.is_finite() || exact.abs() > 1e6 {
                continue;
            }
            // The truncation error of the step-h estimate is about a third of
            // its gap to the step-2h estimate; skip points where the oracle
            // itself cannot resolve 1e-6.
            let wide = at(&[("x", px + 2.0 * h), ("y", py)]);
            let wide_m = at(&[("x", px - 2.0 * h), ("y", py)]);
            if singular_margin(&e, &wide).min(singular_margin(&e, &wide_m)) < 1e-3 {
                continue;
            }
            let fd2 = (e.eval(&wide).unwrap() - e.eval(&wide_m).unwrap()) / (4.0 * h);
            if (fd - fd2).abs() / 3.0 > 0.25e-6 * exact.abs().max(1.0) {
                continue;
            }
            prop_assert!(
                (exact - fd).abs() <= 1e-6 * exact.abs().max(1.0),
                "{e}: d/dx = {exact}, fd = {fd} at ({px}, {py})"
            );
        }
    }

    #[test]
    fn canonicalisation_is_idempotent(raw in raw_strategy()) {
        let Some(e) = raw.build() else { return Ok(()) };
        prop_assert_eq!(e.rebuild(e.children()), e.clone());
        prop_assert_eq!(e.expand().expand(), e.expand());
    }

    #[test]
    fn print_parse_round_trip(raw in raw_strategy(), px in -1.0f64..1.0, py in -1.0f64..1.0) {
        let Some(e) = raw.build() else { return Ok(()) };
        let back = parse(&e.to_string()).unwrap();
        let v = at(&[("x", px), ("y", py)]);
        let (a, b) = (e.eval(&v).unwrap(), back.eval(&v).unwrap());
        prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()), "{e}: {a} vs {b}");
    }

    #[test]
    fn self_substitution_is_identity(raw in raw_strategy()) {
        let Some(e) = raw.build() else { return Ok(()) };
        let mut b = Bindings::new();
        b.insert(x(), x());
        b.insert(y(), y());
        prop_assert_eq!(e.substitute(&b), e);
    }

    #[test]
    fn handles_equal_iff_printed_forms_equal(a in raw_strategy(), b in raw_strategy()) {
        let (Some(ea), Some(eb)) = (a.build(), b.build()) else { return Ok(()) };
        prop_assert_eq!(ea == eb, ea.to_string() == eb.to_string());
    }
}
