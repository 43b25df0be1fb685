use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("element {element} references node {index} but the mesh has {n_nodes} nodes")]
    IndexOutOfRange {
        element: usize,
        index: usize,
        n_nodes: usize,
    },
    #[error("element {element} repeats a node index")]
    DuplicateNode { element: usize },
    #[error("element {element} has zero area")]
    ZeroArea { element: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: node index {index} out of range for {n_nodes} nodes")]
    LineIndexOutOfRange { line: usize, index: usize, n_nodes: usize },
    #[error("mesh needs at least one subdivision per side")]
    EmptyGrid,
    #[error("I/O error: {0}")]
    Io(String),
}

/// Triangular mesh with counter-clockwise elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
    reoriented: usize,
}

/// Twice the signed area of the triangle `a b c`.
pub fn doubled_signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

impl Mesh {
    /// Validates connectivity and orients every element counter-clockwise.
    /// Clockwise elements are fixed by swapping their last two nodes; the
    /// number fixed is available from [`Mesh::reoriented`].
    pub fn new(nodes: Vec<[f64; 2]>, mut elements: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let n_nodes = nodes.len();
        let mut reoriented = 0;
        for (k, el) in elements.iter_mut().enumerate() {
            if let Some(&index) = el.iter().find(|&&i| i >= n_nodes) {
                return Err(MeshError::IndexOutOfRange {
                    element: k,
                    index,
                    n_nodes,
                });
            }
            if el[0] == el[1] || el[1] == el[2] || el[0] == el[2] {
                return Err(MeshError::DuplicateNode { element: k });
            }
            let area = doubled_signed_area(nodes[el[0]], nodes[el[1]], nodes[el[2]]);
            if area == 0.0 {
                return Err(MeshError::ZeroArea { element: k });
            }
            if area < 0.0 {
                el.swap(1, 2);
                reoriented += 1;
            }
        }
        Ok(Mesh {
            nodes,
            elements,
            reoriented,
        })
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Number of clockwise input elements that were flipped on construction.
    pub fn reoriented(&self) -> usize {
        self.reoriented
    }

    pub fn element_coords(&self, k: usize) -> [[f64; 2]; 3] {
        self.elements[k].map(|i| self.nodes[i])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_elements())
            .map(|k| {
                let [a, b, c] = self.element_coords(k);
                doubled_signed_area(a, b, c).abs() / 2.0
            })
            .sum()
    }
}
