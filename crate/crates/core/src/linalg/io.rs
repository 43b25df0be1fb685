use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{DenseMatrix, EllMatrix, LinalgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    MatrixMarket,
    Csv,
}

/// Matrix read back from a MatrixMarket file.
#[derive(Clone, Debug, PartialEq)]
pub enum MarketMatrix {
    Dense(DenseMatrix),
    /// `(row, column, value)`, zero-based, in file order.
    Coordinate {
        n: usize,
        entries: Vec<(usize, usize, f64)>,
    },
    /// An `n × 1` array.
    Column(Vec<f64>),
}

/// Anything with a MatrixMarket rendering.
pub trait Exportable {
    fn matrix_market(&self) -> String;
    fn csv(&self) -> String;
}

/// 17 significant digits; parses back to the same double.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Exportable for DenseMatrix {
    /// Array format, column-major.
    fn matrix_market(&self) -> String {
        let n = self.n();
        let mut s = format!("%%MatrixMarket matrix array real general\n{n} {n}\n");
        for c in 0..n {
            for r in 0..n {
                s += &num(self.get(r, c));
                s.push('\n');
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.n() {
            let row: Vec<String> = self.row(r).iter().map(|&v| num(v)).collect();
            s += &row.join(",");
            s.push('\n');
        }
        s
    }
}

impl Exportable for EllMatrix {
    /// Coordinate format listing every populated pattern slot, zeros
    /// included.
    fn matrix_market(&self) -> String {
        let n = self.n();
        let mut s = format!(
            "%%MatrixMarket matrix coordinate real general\n{n} {n} {}\n",
            self.pattern().nnz()
        );
        for r in 0..n {
            for (c, v) in self.row(r) {
                writeln!(s, "{} {} {}", r + 1, c + 1, num(v)).unwrap();
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("row,col,value\n");
        for r in 0..self.n() {
            for (c, v) in self.row(r) {
                writeln!(s, "{r},{c},{}", num(v)).unwrap();
            }
        }
        s
    }
}

pub fn write_matrix_market(m: &impl Exportable, path: impl AsRef<Path>) -> Result<(), LinalgError> {
    Ok(fs::write(path, m.matrix_market())?)
}

pub fn write_csv(m: &impl Exportable, path: impl AsRef<Path>) -> Result<(), LinalgError> {
    Ok(fs::write(path, m.csv())?)
}

/// Writes a vector as an `n × 1` MatrixMarket array, or one value per line
/// for CSV.
pub fn write_vector(v: &[f64], path: impl AsRef<Path>, format: ExportFormat) -> Result<(), LinalgError> {
    let mut s = match format {
        ExportFormat::MatrixMarket => format!("%%MatrixMarket matrix array real general\n{} 1\n", v.len()),
        ExportFormat::Csv => String::new(),
    };
    for &x in v {
        s += &num(x);
        s.push('\n');
    }
    Ok(fs::write(path, s)?)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>, LinalgError> {
    match read_matrix_market(path)? {
        MarketMatrix::Column(v) => Ok(v),
        _ => Err(LinalgError::Parse {
            line: 1,
            message: "expected an n × 1 array".into(),
        }),
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MarketMatrix, LinalgError> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub(crate) fn parse_matrix_market(text: &str) -> Result<MarketMatrix, LinalgError> {
    let bad = |line: usize, message: &str| LinalgError::Parse {
        line,
        message: message.into(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    let h: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if h.len() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" || h[3] != "real" || h[4] != "general" {
        return Err(bad(1, "unsupported MatrixMarket header"));
    }
    let coordinate = match h[2].as_str() {
        "coordinate" => true,
        "array" => false,
        _ => return Err(bad(1, "unknown storage format")),
    };
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| bad(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(size_line, "invalid size")))
        .collect::<Result<_, _>>()?;
    let parse_f = |line: usize, t: &str| t.parse::<f64>().map_err(|_| bad(line, "invalid value"));

    if coordinate {
        let [rows, cols, nnz] = dims[..] else {
            return Err(bad(size_line, "expected 'rows cols entries'"));
        };
        if rows != cols {
            return Err(bad(size_line, "matrix is not square"));
        }
        let mut entries = Vec::with_capacity(nnz);
        for (line, l) in body {
            let t: Vec<&str> = l.split_whitespace().collect();
            let [r, c, v] = t[..] else {
                return Err(bad(line, "expected 'row col value'"));
            };
            let idx = |s: &str| match s.parse::<usize>() {
                Ok(i) if (1..=rows).contains(&i) => Ok(i - 1),
                _ => Err(bad(line, "index out of range")),
            };
            entries.push((idx(r)?, idx(c)?, parse_f(line, v)?));
        }
        if entries.len() != nnz {
            return Err(bad(size_line, "entry count does not match the size line"));
        }
        Ok(MarketMatrix::Coordinate { n: rows, entries })
    } else {
        let [rows, cols] = dims[..] else {
            return Err(bad(size_line, "expected 'rows cols'"));
        };
        let mut column_major = Vec::with_capacity(rows * cols);
        for (line, l) in body {
            column_major.push(parse_f(line, l)?);
        }
        if column_major.len() != rows * cols {
            return Err(bad(size_line, "value count does not match the size line"));
        }
        if cols == 1 && rows != 1 {
            return Ok(MarketMatrix::Column(column_major));
        }
        if rows != cols {
            return Err(bad(size_line, "matrix is not square"));
        }
        let mut m = DenseMatrix::zeros(rows);
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, column_major[c * rows + r]);
            }
        }
        Ok(MarketMatrix::Dense(m))
    }
}
