use super::{dot, LinalgError, LinearOperator};

#[derive(Clone, Debug, PartialEq)]
pub struct CgReport {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖b − A x‖₂ / ‖b‖₂`, recomputed from the returned `x`.
    pub residual: f64,
    pub converged: bool,
    /// Relative residual after each iteration, starting with the initial
    /// guess.
    pub history: Vec<f64>,
}

/// Unpreconditioned conjugate gradients for symmetric positive definite
/// systems, from `x = 0`.
///
/// Directions are conjugated in the `A²` inner product (the conjugate
/// residual variant), so each step minimises `‖b − A x‖₂` over the Krylov
/// space and the residual history never grows. Convergence is declared on
/// the true residual; when the recurrence has drifted from it the iteration
/// restarts from the true residual.
pub fn cg_solve<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CgReport, LinalgError> {
    let n = a.dim();
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(CgReport {
            x,
            iterations: 0,
            residual: 0.0,
            converged: true,
            history: vec![0.0],
        });
    }
    let mut r = b.to_vec();
    let mut ar = vec![0.0; n];
    a.apply(&r, &mut ar);
    let mut p = r.clone();
    let mut ap = ar.clone();
    let mut rar = dot(&r, &ar);
    let mut history = vec![1.0];
    let mut iterations = 0;
    let mut scratch = vec![0.0; n];

    // Recomputes r = b − A x; returns its relative norm.
    let true_residual = |x: &[f64], r: &mut [f64], scratch: &mut [f64]| {
        a.apply(x, scratch);
        for i in 0..n {
            r[i] = b[i] - scratch[i];
        }
        dot(r, r).sqrt() / b_norm
    };

    while iterations < max_iter {
        let apap = dot(&ap, &ap);
        let alpha = rar / apap;
        if !(alpha.is_finite() && rar > 0.0) {
            return Err(LinalgError::Breakdown { iteration: iterations });
        }
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        let mut rel = dot(&r, &r).sqrt() / b_norm;
        if !rel.is_finite() {
            return Err(LinalgError::Breakdown { iteration: iterations });
        }
        let mut restart = false;
        if rel <= tol {
            let actual = true_residual(&x, &mut r, &mut scratch);
            if actual <= tol {
                history.push(actual.min(*history.last().unwrap()));
                return Ok(CgReport {
                    x,
                    iterations,
                    residual: actual,
                    converged: true,
                    history,
                });
            }
            rel = actual;
            restart = true;
        }
        history.push(rel);
        a.apply(&r, &mut ar);
        let rar_next = dot(&r, &ar);
        if restart {
            p.copy_from_slice(&r);
            ap.copy_from_slice(&ar);
        } else {
            let beta = rar_next / rar;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
                ap[i] = ar[i] + beta * ap[i];
            }
        }
        rar = rar_next;
    }
    let residual = true_residual(&x, &mut r, &mut scratch);
    Ok(CgReport {
        x,
        iterations,
        converged: residual <= tol,
        residual,
        history,
    })
}
