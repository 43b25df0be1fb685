//! Reference triangle `(0,0) (1,0) (0,1)`: P1 shape functions, the affine map
//! onto a physical element, and quadrature.

use crate::symbolic::{sym, Expr};

use super::FemError;

/// Names of the kernel argument symbols, in slot order.
pub const ARGUMENT_NAMES: [&str; 8] = ["xi", "eta", "x0", "y0", "x1", "y1", "x2", "y2"];

pub fn reference_coords() -> [Expr; 2] {
    [sym("xi").unwrap(), sym("eta").unwrap()]
}

/// The eight kernel argument symbols `(ξ, η, x0, y0, x1, y1, x2, y2)`.
pub fn argument_symbols() -> [Expr; 8] {
    ARGUMENT_NAMES.map(|n| sym(n).unwrap())
}

/// `φ0 = 1 − ξ − η`, `φ1 = ξ`, `φ2 = η`.
pub fn reference_shape_functions() -> [Expr; 3] {
    let [xi, eta] = reference_coords();
    [1 - &xi - &eta, xi, eta]
}

/// Reference-to-physical affine map of a triangle with symbolic vertices.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub x: Expr,
    pub y: Expr,
    /// `jacobian[r][c] = ∂(x, y)_r / ∂(ξ, η)_c`.
    pub jacobian: [[Expr; 2]; 2],
    pub det: Expr,
}

pub fn affine_map() -> AffineMap {
    let [_, _, x0, y0, x1, y1, x2, y2] = argument_symbols();
    let jacobian = [[&x1 - &x0, &x2 - &x0], [&y1 - &y0, &y2 - &y0]];
    // Nodal form of x0 + (x1 − x0)ξ + (x2 − x0)η; it reproduces the vertices
    // exactly in floating point, the difference form does not.
    let [p0, p1, p2] = reference_shape_functions();
    let x = &p0 * &x0 + &p1 * &x1 + &p2 * &x2;
    let y = &p0 * &y0 + &p1 * &y1 + &p2 * &y2;
    let det = &jacobian[0][0] * &jacobian[1][1] - &jacobian[0][1] * &jacobian[1][0];
    AffineMap { x, y, jacobian, det }
}

impl AffineMap {
    /// `J^{-T} g`, the physical gradient of a function whose reference
    /// gradient is `g`.
    pub fn physical_gradient(&self, g: &[Expr; 2]) -> [Expr; 2] {
        let inv_det = self.det.powi(-1).expect("symbolic determinant");
        let j = &self.jacobian;
        [
            &inv_det * (&j[1][1] * &g[0] - &j[1][0] * &g[1]),
            &inv_det * (&j[0][0] * &g[1] - &j[0][1] * &g[0]),
        ]
    }

    /// `|det J|`, written `sqrt(det^2)`: IEEE square root of a square is the
    /// exact absolute value, and it keeps the function set closed.
    pub fn abs_det(&self) -> Expr {
        self.det.powi(2).expect("symbolic determinant").sqrt()
    }
}

/// Quadrature rule on the reference triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(points: Vec<[f64; 2]>, weights: Vec<f64>) -> Result<Self, FemError> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(FemError::InvalidQuadrature(
                "points and weights differ in length".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 0.5).abs() > 1e-14 {
            return Err(FemError::InvalidQuadrature(format!(
                "weights sum to {total}, not the reference area 1/2"
            )));
        }
        if let Some(p) = points.iter().find(|p| p[0] < 0.0 || p[1] < 0.0 || p[0] + p[1] > 1.0) {
            return Err(FemError::InvalidQuadrature(format!(
                "point {p:?} lies outside the reference triangle"
            )));
        }
        Ok(QuadratureRule { points, weights })
    }

    /// Three interior points, exact for total degree 2.
    pub fn three_point() -> Self {
        let (a, b) = (1.0 / 6.0, 2.0 / 3.0);
        QuadratureRule {
            points: vec![[a, a], [b, a], [a, b]],
            weights: vec![1.0 / 6.0; 3],
        }
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[0], p[1]))
            .sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::three_point()
    }
}
