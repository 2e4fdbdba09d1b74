//! Synthetic LASSO instances `½‖Ax − y‖² + λ‖x‖₁`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::Rng as _;

use crate::error::Result;
use crate::error_models::truncnorm::standard_normal;
use crate::linalg::inf_norm;
use crate::problem::{CompositeProblem, L1Term, QuadraticSmooth, Scale};
use crate::rng::stream_rng;

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_M: usize = 500;
pub const DEFAULT_NOISE: f64 = 0.01;
/// λ as a fraction of `‖Aᵀy‖_∞` (the smallest λ giving the zero solution).
pub const DEFAULT_LAMBDA_RATIO: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct LassoInstance {
    pub a: DMatrix<f64>,
    pub y: DVector<f64>,
    /// Planted sparse signal.
    pub x_true: DVector<f64>,
    pub lambda: f64,
    pub seed: u64,
}

impl LassoInstance {
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn problem(&self) -> Result<CompositeProblem<QuadraticSmooth>> {
        let g = QuadraticSmooth::new(self.a.clone(), self.y.clone(), Scale::Half)?;
        Ok(CompositeProblem::new(g, L1Term::new(self.lambda)?))
    }
}

/// Gaussian design, `sparsity` random-sign unit entries, Gaussian noise of std `noise`.
pub fn gen_lasso(n: usize, m: usize, sparsity: usize, noise: f64, seed: u64) -> LassoInstance {
    let mut rng = stream_rng(seed, 0);
    let a = DMatrix::from_fn(m, n, |_, _| standard_normal(&mut rng));
    let mut idx: Vec<usize> = (0..n).collect();
    let k = sparsity.min(n);
    for i in 0..k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut x_true = DVector::zeros(n);
    for &j in &idx[..k] {
        x_true[j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    let e = DVector::from_fn(m, |_, _| noise * standard_normal(&mut rng));
    let y = &a * &x_true + e;
    let lambda = DEFAULT_LAMBDA_RATIO * inf_norm(&a.tr_mul(&y));
    LassoInstance { a, y, x_true, lambda, seed }
}
