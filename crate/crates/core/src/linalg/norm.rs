use crate::fem::{doubled_signed_area, Mesh, QuadratureRule};
use crate::symbolic::{Expr, SymbolicError};

use super::{dot, LinalgError};

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn point_function(u: &Expr) -> Result<impl Fn(f64, f64) -> Result<f64, SymbolicError> + '_, LinalgError> {
    if let Some(s) = u.free_symbols().into_iter().find(|s| s != "x" && s != "y") {
        return Err(SymbolicError::UnboundSymbol(s).into());
    }
    Ok(move |px: f64, py: f64| {
        u.eval_with(&|s: &Expr| match s.symbol_name() {
            Some("x") => Some(px),
            Some("y") => Some(py),
            _ => None,
        })
    })
}

/// Nodal interpolant of `u(x, y)`.
pub fn interpolate(u: &Expr, mesh: &Mesh) -> Result<Vec<f64>, LinalgError> {
    let f = point_function(u)?;
    mesh.nodes()
        .iter()
        .map(|&[x, y]| f(x, y).map_err(LinalgError::from))
        .collect()
}

/// `‖u_h − u‖_{L2}` for the P1 function with nodal values `x`, by the
/// three-point rule on every element.
pub fn l2_error(x: &[f64], u_exact: &Expr, mesh: &Mesh) -> Result<f64, LinalgError> {
    if x.len() != mesh.n_nodes() {
        return Err(LinalgError::DimensionMismatch {
            expected: mesh.n_nodes(),
            found: x.len(),
        });
    }
    let f = point_function(u_exact)?;
    let rule = QuadratureRule::three_point();
    let mut total = 0.0;
    for (k, el) in mesh.elements().iter().enumerate() {
        let c = mesh.element_coords(k);
        let det = doubled_signed_area(c[0], c[1], c[2]).abs();
        for (&[xi, eta], &w) in rule.points().iter().zip(rule.weights()) {
            let phi = [1.0 - xi - eta, xi, eta];
            let (mut px, mut py, mut uh) = (0.0, 0.0, 0.0);
            for i in 0..3 {
                px += phi[i] * c[i][0];
                py += phi[i] * c[i][1];
                uh += phi[i] * x[el[i]];
            }
            let d = uh - f(px, py)?;
            total += w * det * d * d;
        }
    }
    Ok(total.sqrt())
}
