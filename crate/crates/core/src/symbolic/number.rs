use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};

/// Numeric constant inside an expression.
///
/// Constants built from integers stay exact rationals. Any arithmetic that
/// mixes in a float, or that overflows the 128-bit rational range, degrades
/// to `f64`.
#[derive(Clone, Debug)]
pub enum Number {
    Rational(Ratio<i128>),
    Float(f64),
}

impl Number {
    pub fn int(v: i64) -> Self {
        Number::Rational(Ratio::from_integer(v as i128))
    }

    /// Floats are normalised so that `-0.0` and `0.0` intern to the same node.
    pub fn float(v: f64) -> Self {
        Number::Float(if v == 0.0 { 0.0 } else { v })
    }

    pub fn rational(num: i128, den: i128) -> Option<Self> {
        if den == 0 {
            None
        } else {
            Some(Number::Rational(Ratio::new(num, den)))
        }
    }

    pub fn zero() -> Self {
        Number::int(0)
    }

    pub fn one() -> Self {
        Number::int(1)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(r) => {
                if r.is_integer() {
                    *r.numer() as f64
                } else {
                    // Exact for the small operands expressions carry; the
                    // division itself is correctly rounded.
                    *r.numer() as f64 / *r.denom() as f64
                }
            }
            Number::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Rational(r) => r.is_zero(),
            Number::Float(f) => *f == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Number::Rational(r) => r.is_one(),
            Number::Float(f) => *f == 1.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Number::Rational(r) => r.is_negative(),
            Number::Float(f) => *f < 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Rational(_))
    }

    /// The value as an integer, if it is an exact integer that fits `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Number::Rational(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => match a.checked_add(b) {
                Some(r) => Number::Rational(r),
                None => Number::float(self.to_f64() + other.to_f64()),
            },
            _ => Number::float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => match a.checked_mul(b) {
                Some(r) => Number::Rational(r),
                None => Number::float(self.to_f64() * other.to_f64()),
            },
            _ => Number::float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Rational(r) => Number::Rational(-r),
            Number::Float(f) => Number::float(-f),
        }
    }

    /// `None` when `self` is zero.
    pub fn recip(&self) -> Option<Number> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Number::Rational(r) => Number::Rational(r.recip()),
            Number::Float(f) => Number::float(1.0 / f),
        })
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn powi(&self, exp: i64) -> Option<Number> {
        if exp < 0 {
            return self.recip()?.powi(exp.checked_neg()?);
        }
        let mut acc = Number::one();
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Some(acc)
    }

    /// Exact square root for non-negative perfect-square rationals.
    pub fn exact_sqrt(&self) -> Option<Number> {
        match self {
            Number::Rational(r) if !r.is_negative() => {
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if n * n == *r.numer() && d * d == *r.denom() {
                    Some(Number::Rational(Ratio::new(n, d)))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Total order used for canonical sorting: by value, then exact before
    /// float.
    pub(crate) fn total_cmp(&self, other: &Number) -> Ordering {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => a.cmp(b),
            (Number::Float(a), Number::Float(b)) => a.total_cmp(b),
            (Number::Rational(_), Number::Float(_)) => self.to_f64().total_cmp(&other.to_f64()).then(Ordering::Less),
            (Number::Float(_), Number::Rational(_)) => self.to_f64().total_cmp(&other.to_f64()).then(Ordering::Greater),
        }
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => a == b,
            (Number::Float(a), Number::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Number {}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Number::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Number::Float(f) => {
                1u8.hash(state);
                f.to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for Number {
    /// Parenthesised when negative or fractional so that the text re-parses to
    /// the same constant in any operator position.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(r) if r.is_integer() => {
                if r.is_negative() {
                    write!(f, "({})", r.numer())
                } else {
                    write!(f, "{}", r.numer())
                }
            }
            Number::Rational(r) => write!(f, "({}/{})", r.numer(), r.denom()),
            Number::Float(v) => {
                if *v < 0.0 {
                    write!(f, "({:?})", v)
                } else {
                    write!(f, "{:?}", v)
                }
            }
        }
    }
}
