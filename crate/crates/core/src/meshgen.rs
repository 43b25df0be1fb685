//! Structured meshes of the unit square and the plain-text mesh format.
//!
//! ```text
//! # comment
//! nodes 4
//! 0.0 0.0
//! 1.0 0.0
//! 1.0 1.0
//! 0.0 1.0
//! elements 2
//! 0 1 2
//! 0 2 3
//! ```

use std::fs;
use std::path::Path;

use crate::fem::{Mesh, MeshError};

/// `n × n` cells on `[0,1]²`, each split along the diagonal from its lower
/// left to its upper right corner.
///
/// Node `(i, j)` sits at `(i/n, j/n)` with index `j·(n+1) + i`. Cell `(i, j)`
/// with corners `a b c d` (counter-clockwise from lower left) yields the
/// triangles `a b c` and `a c d`.
pub fn unit_square_mesh(n: usize) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::EmptyGrid);
    }
    let side = n + 1;
    let mut nodes = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            nodes.push([i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    let mut elements = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let a = j * side + i;
            let (b, c, d) = (a + 1, a + side + 1, a + side);
            elements.push([a, b, c]);
            elements.push([a, c, d]);
        }
    }
    Mesh::new(nodes, elements)
}

pub fn format_mesh(m: &Mesh) -> String {
    let mut s = format!("nodes {}\n", m.n_nodes());
    for [x, y] in m.nodes() {
        s += &format!("{x:?} {y:?}\n");
    }
    s += &format!("elements {}\n", m.n_elements());
    for [a, b, c] in m.elements() {
        s += &format!("{a} {b} {c}\n");
    }
    s
}

pub fn write_mesh(m: &Mesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    fs::write(path, format_mesh(m)).map_err(|e| MeshError::Io(e.to_string()))
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let text = fs::read_to_string(path).map_err(|e| MeshError::Io(e.to_string()))?;
    parse_mesh(&text)
}

/// Parses the text format. Clockwise elements are reoriented; see
/// [`Mesh::reoriented`].
pub fn parse_mesh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| MeshError::Malformed {
            line: text.lines().count(),
            message: format!("unexpected end of input, expected {what}"),
        })
    };

    let n_nodes = header(next("node count")?, "nodes")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for _ in 0..n_nodes {
        let (line, l) = next("a node")?;
        let v: [f64; 2] = fields(line, l)?;
        nodes.push(v);
    }
    let n_elements = header(next("element count")?, "elements")?;
    let mut elements = Vec::with_capacity(n_elements);
    for _ in 0..n_elements {
        let (line, l) = next("an element")?;
        let el: [usize; 3] = fields(line, l)?;
        if let Some(&index) = el.iter().find(|&&i| i >= n_nodes) {
            return Err(MeshError::LineIndexOutOfRange { line, index, n_nodes });
        }
        elements.push(el);
    }
    if let Ok((line, _)) = next("") {
        return Err(MeshError::Malformed {
            line,
            message: "trailing content after the last element".into(),
        });
    }
    Mesh::new(nodes, elements)
}

fn header((line, l): (usize, &str), keyword: &str) -> Result<usize, MeshError> {
    let mut it = l.split_whitespace();
    match (it.next(), it.next().map(str::parse::<usize>), it.next()) {
        (Some(k), Some(Ok(n)), None) if k == keyword => Ok(n),
        _ => Err(MeshError::Malformed {
            line,
            message: format!("expected '{keyword} <count>'"),
        }),
    }
}

fn fields<T: std::str::FromStr, const N: usize>(line: usize, l: &str) -> Result<[T; N], MeshError> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    let bad = |message: String| MeshError::Malformed { line, message };
    if parts.len() != N {
        return Err(bad(format!("expected {N} fields, found {}", parts.len())));
    }
    let parsed = parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|_| bad(format!("cannot parse '{p}'"))))
        .collect::<Result<Vec<T>, _>>()?;
    Ok(parsed.try_into().unwrap_or_else(|_| unreachable!("length checked")))
}
