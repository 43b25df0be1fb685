use std::sync::Arc;

use super::{DenseMatrix, LinalgError, LinearOperator};

/// Column layout of an ELLPACK matrix: `max_nz` slots per row, populated
/// slots sorted ascending, the rest `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    n: usize,
    max_nz: usize,
    row_len: Vec<usize>,
    col_idx: Vec<i64>,
}

impl SparsityPattern {
    /// Builds a pattern from per-row column sets. Columns are sorted and
    /// deduplicated; `max_nz` is the longest row.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut rows = rows;
        for (r, cols) in rows.iter_mut().enumerate() {
            cols.sort_unstable();
            cols.dedup();
            if let Some(&c) = cols.last().filter(|&&c| c >= n) {
                return Err(LinalgError::InvalidPattern(format!("row {r} has column {c} >= {n}")));
            }
        }
        let max_nz = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut col_idx = vec![-1; n * max_nz];
        let mut row_len = Vec::with_capacity(n);
        for (r, cols) in rows.iter().enumerate() {
            row_len.push(cols.len());
            for (k, &c) in cols.iter().enumerate() {
                col_idx[r * max_nz + k] = c as i64;
            }
        }
        Ok(SparsityPattern {
            n,
            max_nz,
            row_len,
            col_idx,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_nz(&self) -> usize {
        self.max_nz
    }

    /// `gNbrNodeLen`.
    pub fn row_lengths(&self) -> &[usize] {
        &self.row_len
    }

    /// `gNbrNodeIdx`, row-major `n × max_nz`.
    pub fn column_indices(&self) -> &[i64] {
        &self.col_idx
    }

    /// Populated columns of row `r`.
    pub fn row(&self, r: usize) -> &[i64] {
        let start = r * self.max_nz;
        &self.col_idx[start..start + self.row_len[r]]
    }

    /// Slot of column `c` in row `r`, by binary search.
    #[inline]
    pub fn find(&self, r: usize, c: usize) -> Option<usize> {
        self.row(r).binary_search(&(c as i64)).ok()
    }

    pub fn nnz(&self) -> usize {
        self.row_len.iter().sum()
    }
}

/// `n × max_nz` values aligned with a shared [`SparsityPattern`]; padded
/// slots hold `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllMatrix {
    pattern: Arc<SparsityPattern>,
    values: Vec<f64>,
}

impl EllMatrix {
    pub fn zeros(pattern: Arc<SparsityPattern>) -> Self {
        let values = vec![0.0; pattern.n * pattern.max_nz];
        EllMatrix { pattern, values }
    }

    pub fn from_values(pattern: Arc<SparsityPattern>, values: Vec<f64>) -> Result<Self, LinalgError> {
        let expected = pattern.n * pattern.max_nz;
        if values.len() != expected {
            return Err(LinalgError::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        for r in 0..pattern.n {
            let pad = &values[r * pattern.max_nz + pattern.row_len[r]..(r + 1) * pattern.max_nz];
            if pad.iter().any(|&v| v != 0.0) {
                return Err(LinalgError::InvalidPattern(format!(
                    "padded slot of row {r} is nonzero"
                )));
            }
        }
        Ok(EllMatrix { pattern, values })
    }

    /// Builds a matrix whose pattern is exactly the given positions; repeated
    /// positions are summed.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, LinalgError> {
        let mut rows = vec![Vec::new(); n];
        for &(r, c, _) in entries {
            if r >= n {
                return Err(LinalgError::InvalidPattern(format!("row {r} >= {n}")));
            }
            rows[r].push(c);
        }
        let mut m = EllMatrix::zeros(Arc::new(SparsityPattern::from_rows(rows)?));
        for &(r, c, v) in entries {
            let slot = m.pattern.find(r, c).expect("position is in the pattern");
            m.values[r * m.pattern.max_nz + slot] += v;
        }
        Ok(m)
    }

    pub fn pattern(&self) -> &Arc<SparsityPattern> {
        &self.pattern
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `(r, c)`; zero outside the pattern.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pattern
            .find(r, c)
            .map_or(0.0, |k| self.values[r * self.pattern.max_nz + k])
    }

    /// Populated `(column, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let start = r * self.pattern.max_nz;
        self.pattern
            .row(r)
            .iter()
            .zip(&self.values[start..])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n());
        for r in 0..self.n() {
            for (c, v) in self.row(r) {
                d.add_to(r, c, v);
            }
        }
        d
    }
}

impl LinearOperator for EllMatrix {
    fn dim(&self) -> usize {
        self.pattern.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let w = self.pattern.max_nz;
        for (r, out) in y.iter_mut().enumerate() {
            let cols = &self.pattern.col_idx[r * w..(r + 1) * w];
            let vals = &self.values[r * w..(r + 1) * w];
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                if c >= 0 {
                    acc += v * x[c as usize];
                }
            }
            *out = acc;
        }
    }
}
