use std::collections::BTreeSet;

use crate::fem::Mesh;
use crate::linalg::SparsityPattern;

/// Per-element copies of node coordinates and global indices; the three
/// nodes of element `e` occupy slots `3e..3e+3`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceArrays {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub g_idx: Vec<usize>,
    pub n_nodes: usize,
}

impl DeviceArrays {
    pub fn n_elements(&self) -> usize {
        self.g_idx.len() / 3
    }
}

pub fn flatten_mesh(m: &Mesh) -> DeviceArrays {
    let n = 3 * m.n_elements();
    let (mut x, mut y, mut g_idx) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for el in m.elements() {
        for &g in el {
            let [px, py] = m.nodes()[g];
            x.push(px);
            y.push(py);
            g_idx.push(g);
        }
    }
    DeviceArrays {
        x,
        y,
        g_idx,
        n_nodes: m.n_nodes(),
    }
}

/// Row `r` holds `r` and every node sharing an element with it.
pub fn build_sparsity(m: &Mesh) -> SparsityPattern {
    let mut rows: Vec<BTreeSet<usize>> = (0..m.n_nodes()).map(|r| BTreeSet::from([r])).collect();
    for el in m.elements() {
        for &a in el {
            rows[a].extend(el.iter().copied());
        }
    }
    SparsityPattern::from_rows(rows.into_iter().map(|s| s.into_iter().collect()).collect())
        .expect("mesh connectivity is validated")
}
