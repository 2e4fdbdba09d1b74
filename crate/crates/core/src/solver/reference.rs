//! High-accuracy surrogate for `x⋆` when the optimum is not known in closed form.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_traits::Float;

use crate::error::{check_dim, Result};
use crate::linalg::inf_norm;
use crate::problem::{CompositeProblem, SmoothFn};

pub const REFERENCE_MAX_ITERS: usize = 100_000;
pub const REFERENCE_ABSTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub x: DVector<f64>,
    pub f: f64,
}

/// Exact FISTA with `s = 1/L` from `x0`, followed by a support-restricted
/// Newton polish when `g` is quadratic and the polished point passes the KKT check.
pub fn reference_solution<G: SmoothFn>(problem: &CompositeProblem<G>, x0: &DVector<f64>) -> Result<Reference> {
    check_dim(problem.dim(), x0.len())?;
    if let Some(opt) = &problem.optimum {
        return Ok(Reference { x: opt.x.clone(), f: opt.f });
    }
    let s = 1.0 / problem.lipschitz();
    let mut x = x0.clone();
    let mut x_prev = x0.clone();
    let mut t_prev = 1.0f64;
    for k in 0..REFERENCE_MAX_ITERS {
        let t = 0.5 * (1.0 + Float::sqrt(1.0 + 4.0 * t_prev * t_prev));
        let b = if k == 0 { 0.0 } else { (t_prev - 1.0) / t };
        let y = &x + (&x - &x_prev) * b;
        let next = problem.h.prox(s, &(&y - problem.g.grad(&y) * s))?;
        let change = (&next - &x).norm();
        x_prev = core::mem::replace(&mut x, next);
        t_prev = t;
        if change <= REFERENCE_ABSTOL {
            break;
        }
    }
    let f = problem.f_value(&x);
    let best = match polish(problem, &x) {
        Some(p) => {
            let fp = problem.f_value(&p);
            if fp <= f {
                Reference { x: p, f: fp }
            } else {
                Reference { x, f }
            }
        }
        None => Reference { x, f },
    };
    Ok(best)
}

fn polish<G: SmoothFn>(problem: &CompositeProblem<G>, x: &DVector<f64>) -> Option<DVector<f64>> {
    let (h, b) = problem.g.normal_equations()?;
    let lam = problem.h.lambda;
    let thresh = 1e-10 * inf_norm(x).max(1e-300);
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j].abs() > thresh).collect();
    let mut out = DVector::zeros(x.len());
    if !support.is_empty() {
        let m = support.len();
        let hs = DMatrix::from_fn(m, m, |i, j| h[(support[i], support[j])]);
        let rhs = DVector::from_fn(m, |i, _| b[support[i]] - lam * x[support[i]].signum());
        let sol = hs.cholesky()?.solve(&rhs);
        for (i, &j) in support.iter().enumerate() {
            if sol[i].signum() != x[j].signum() || sol[i] == 0.0 {
                return None;
            }
            out[j] = sol[i];
        }
    }
    let grad = &h * &out - &b;
    let tol = 1e-9 * lam.max(1.0);
    let kkt = (0..x.len()).all(|j| {
        if out[j] == 0.0 {
            grad[j].abs() <= lam + tol
        } else {
            (grad[j] + lam * out[j].signum()).abs() <= tol * (1.0 + b.amax())
        }
    });
    kkt.then_some(out)
}
