use crate::symbolic::{Bindings, Expr, SymbolTable};

use super::reference::{affine_map, argument_symbols, reference_coords, reference_shape_functions};
use super::{grad, FemError, QuadratureRule, WeakForm};

/// Per-entry integrands of a weak form on a generic element.
///
/// Each entry is an expression over the eight kernel arguments
/// `(ξ, η, x0, y0, x1, y1, x2, y2)` and already carries the `|det J|` factor;
/// the quadrature weight is applied when it is evaluated.
#[derive(Clone, Debug)]
pub struct InstantiatedForm {
    /// Row-major `n_local × n_local`; row `i` tests with `φ_i`, column `j`
    /// is the trial `φ_j`.
    pub bilinear: Vec<Expr>,
    pub linear: Vec<Expr>,
    pub n_local: usize,
    pub args: SymbolTable,
    pub rule: QuadratureRule,
}

pub fn instantiate(wf: &WeakForm) -> Result<InstantiatedForm, FemError> {
    instantiate_with(wf, QuadratureRule::three_point())
}

pub fn instantiate_with(wf: &WeakForm, rule: QuadratureRule) -> Result<InstantiatedForm, FemError> {
    let s = |n: &str| crate::symbolic::sym(n).expect("reserved names are identifiers");
    let [cx, cy] = wf.space().coords().clone();
    let map = affine_map();
    let abs_det = map.abs_det();
    let phi = reference_shape_functions();
    let xi_eta = reference_coords();
    let phys_grads: Vec<[Expr; 2]> = phi
        .iter()
        .map(|p| {
            let g = grad(p, &xi_eta);
            map.physical_gradient(&[g[0].clone(), g[1].clone()])
        })
        .collect();

    let n_local = wf.space().n_local();
    let mut bilinear = Vec::with_capacity(n_local * n_local);
    for i in 0..n_local {
        for j in 0..n_local {
            let b: Bindings = [
                (s("u"), phi[j].clone()),
                (s("u_x"), phys_grads[j][0].clone()),
                (s("u_y"), phys_grads[j][1].clone()),
                (s("v"), phi[i].clone()),
                (s("v_x"), phys_grads[i][0].clone()),
                (s("v_y"), phys_grads[i][1].clone()),
                (cx.clone(), map.x.clone()),
                (cy.clone(), map.y.clone()),
            ]
            .into_iter()
            .collect();
            bilinear.push(wf.bilinear().substitute(&b) * &abs_det);
        }
    }
    let linear = (0..n_local)
        .map(|i| {
            let b: Bindings = [
                (s("v"), phi[i].clone()),
                (cx.clone(), map.x.clone()),
                (cy.clone(), map.y.clone()),
            ]
            .into_iter()
            .collect();
            wf.linear().substitute(&b) * &abs_det
        })
        .collect();

    let args = SymbolTable::new(&argument_symbols())?;
    let form = InstantiatedForm {
        bilinear,
        linear,
        n_local,
        args,
        rule,
    };
    for e in form.bilinear.iter().chain(&form.linear) {
        if let Some(extra) = e.free_symbols().into_iter().find(|n| form.args.slot(&s(n)).is_none()) {
            return Err(FemError::UnexpectedSymbol {
                integrand: "instantiated",
                symbol: extra,
            });
        }
    }
    Ok(form)
}

impl InstantiatedForm {
    /// Kernel argument vector for quadrature point `q` on a triangle.
    pub fn arguments(&self, q: usize, coords: &[[f64; 2]; 3]) -> [f64; 8] {
        let [xi, eta] = self.rule.points()[q];
        [
            xi,
            eta,
            coords[0][0],
            coords[0][1],
            coords[1][0],
            coords[1][1],
            coords[2][0],
            coords[2][1],
        ]
    }

    /// Local matrix and load vector on one triangle by tree evaluation,
    /// summing quadrature points in order.
    pub fn local_system(&self, coords: &[[f64; 2]; 3]) -> Result<(Vec<f64>, Vec<f64>), FemError> {
        let mut k = vec![0.0; self.bilinear.len()];
        let mut b = vec![0.0; self.linear.len()];
        for (q, w) in self.rule.weights().iter().enumerate() {
            let args = self.arguments(q, coords);
            let lookup = self.args.binder(&args);
            for (acc, e) in k.iter_mut().zip(&self.bilinear) {
                *acc += w * e.eval_with(&lookup)?;
            }
            for (acc, e) in b.iter_mut().zip(&self.linear) {
                *acc += w * e.eval_with(&lookup)?;
            }
        }
        Ok((k, b))
    }
}
