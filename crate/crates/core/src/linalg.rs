//! Dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::Float;

use crate::error::{failure, input, Result};

pub const POWER_MAX_ITERS: usize = 200;
pub const POWER_REL_TOL: f64 = 1e-10;
pub const EIG_FLOOR: f64 = 1e-12;

/// Largest eigenvalue of a symmetric PSD operator by power iteration.
///
/// Stops after `POWER_MAX_ITERS` steps or when the Rayleigh quotient changes by
/// less than `POWER_REL_TOL` relative.
pub fn power_iteration<F>(n: usize, apply: F) -> f64
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    if n == 0 {
        return 0.0;
    }
    // deterministic, not orthogonal to any coordinate axis
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.01 * ((i % 7) as f64));
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = apply(&v);
        let next = v.dot(&w);
        let nw = w.norm();
        if nw == 0.0 || !nw.is_finite() {
            return next.max(0.0);
        }
        v = w / nw;
        let done = (next - lambda).abs() <= POWER_REL_TOL * next.abs();
        lambda = next;
        if done {
            break;
        }
    }
    lambda
}

/// σ_max(M)², from a dense eigensolve of the smaller Gram matrix.
///
/// Power iteration stalls when the top two singular values are close, and an
/// underestimate would break the `s ≤ 1/L` premise; the result is never below
/// the power-iteration estimate.
pub fn sigma_max_sq(m: &DMatrix<f64>) -> f64 {
    let gram = if m.nrows() < m.ncols() { m * m.transpose() } else { m.tr_mul(m) };
    let power = power_iteration(m.ncols(), |x| m.tr_mul(&(m * x)));
    lambda_max_dense(&gram).max(power)
}

/// Largest eigenvalue of a symmetric PSD matrix.
pub fn lambda_max_sym(h: &DMatrix<f64>) -> f64 {
    let power = power_iteration(h.ncols(), |x| h * x);
    lambda_max_dense(h).max(power)
}

fn lambda_max_dense(h: &DMatrix<f64>) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    let sym = (h + h.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().fold(0.0f64, f64::max)
}

/// Symmetric square root and inverse square root of a PSD matrix.
///
/// Eigenvalues below `EIG_FLOOR * λ_max` are clamped to that floor. Clearly
/// negative eigenvalues are rejected.
pub fn sym_sqrt_pair(h: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !h.is_square() {
        return input("matrix square root needs a square matrix");
    }
    let n = h.nrows();
    let sym = (h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if !(lmax > 0.0) || !lmax.is_finite() {
        return failure("matrix is not positive definite");
    }
    let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if lmin < -1e-9 * lmax {
        return failure("matrix is indefinite");
    }
    let floor = EIG_FLOOR * lmax;
    let mut root = DMatrix::zeros(n, n);
    let mut inv_root = DMatrix::zeros(n, n);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let l = l.max(floor);
        let q = eig.eigenvectors.column(k);
        let outer = &q * q.transpose();
        root += &outer * Float::sqrt(l);
        inv_root += outer / Float::sqrt(l);
    }
    Ok((root, inv_root))
}

pub fn inf_norm(x: &DVector<f64>) -> f64 {
    x.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

pub fn all_finite(x: &DVector<f64>) -> bool {
    x.iter().all(|v| v.is_finite())
}
