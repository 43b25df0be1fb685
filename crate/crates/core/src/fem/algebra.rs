use std::ops::Index;

use crate::symbolic::Expr;

use super::FemError;

/// Small symbolic column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SymVector(Vec<Expr>);

/// Small dense symbolic matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Expr>,
}

impl SymVector {
    pub fn new(entries: Vec<Expr>) -> Self {
        SymVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Expr] {
        &self.0
    }

    pub fn scale(&self, s: &Expr) -> SymVector {
        SymVector(self.0.iter().map(|e| e * s).collect())
    }
}

impl Index<usize> for SymVector {
    type Output = Expr;
    fn index(&self, i: usize) -> &Expr {
        &self.0[i]
    }
}

impl<const N: usize> From<[Expr; N]> for SymVector {
    fn from(v: [Expr; N]) -> Self {
        SymVector(v.to_vec())
    }
}

impl SymMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Expr>) -> Result<Self, FemError> {
        if entries.len() != rows * cols {
            return Err(FemError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(SymMatrix { rows, cols, entries })
    }

    pub fn from_rows<const R: usize, const C: usize>(rows: [[Expr; C]; R]) -> Self {
        SymMatrix {
            rows: R,
            cols: C,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { Expr::one() } else { Expr::zero() })
            .collect();
        SymMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Expr {
        &self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> SymMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        SymMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn matvec(&self, v: &SymVector) -> Result<SymVector, FemError> {
        if v.len() != self.cols {
            return Err(FemError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(SymVector(
            (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
                .collect(),
        ))
    }
}

/// `(∂e/∂x, ∂e/∂y)` for the coordinate symbols `coords`.
pub fn grad(e: &Expr, coords: &[Expr; 2]) -> SymVector {
    SymVector(coords.iter().map(|c| e.diff(c)).collect())
}

pub fn dot(a: &SymVector, b: &SymVector) -> Result<Expr, FemError> {
    if a.len() != b.len() {
        return Err(FemError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).map(|(p, q)| p * q).sum())
}
