//! Recursive-descent parser for the expression text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          // right-associative
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`, and its exponent
//! must fold to an integer constant.

use super::expr::{sym, Expr, Func};
use super::number::Number;
use super::SymbolicError;

/// Parses `src` into a canonical expression.
pub fn parse(src: &str) -> Result<Expr, SymbolicError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> SymbolicError {
        SymbolicError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SymbolicError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymbolicError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|_| SymbolicError::Syntax {
                    offset: at,
                    message: "division by the constant zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymbolicError> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SymbolicError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let exp = self.unary()?;
        let n = exp
            .as_number()
            .and_then(Number::as_integer)
            .ok_or(SymbolicError::NonIntegerExponent { offset: at })?;
        base.powi(n).map_err(|_| SymbolicError::Syntax {
            offset: at,
            message: "negative power of the constant zero".into(),
        })
    }

    fn atom(&mut self) -> Result<Expr, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.syntax("expected a number, identifier or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, SymbolicError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        end = digits(end);
        let mut is_float = false;
        if end < bytes.len() && bytes[end] == b'.' {
            is_float = true;
            end = digits(end + 1);
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                is_float = true;
                end = digits(k);
            }
        }
        let text = &self.src[start..end];
        self.pos = end;
        if !is_float {
            if let Ok(v) = text.parse::<i128>() {
                return Ok(Expr::num(Number::rational(v, 1).expect("unit denominator")));
            }
        }
        text.parse::<f64>().map(Expr::float).map_err(|_| SymbolicError::Syntax {
            offset: start,
            message: format!("malformed number '{text}'"),
        })
    }

    fn ident(&mut self) -> Result<Expr, SymbolicError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
            end += 1;
        }
        let name = &self.src[start..end];
        self.pos = end;
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name).ok_or_else(|| SymbolicError::UnknownFunction {
                name: name.to_string(),
                offset: start,
            })?;
            self.pos += 1;
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.syntax("expected ')'"));
            }
            return Ok(match func {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Sqrt => arg.sqrt(),
            });
        }
        sym(name)
    }
}
