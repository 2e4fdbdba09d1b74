//! Convergence-bound evaluators.
//!
//! Indexing: a bound "at k" covers the iterates up to `x^{k+1}`, i.e. the first
//! `k+1` recorded iterations. Ergodic bounds refer to the mean of `x^1..x^{k+1}`.

mod baseline;
mod deterministic;
mod random;
mod sweep;

pub use baseline::{schmidt_acc_series, schmidt_basic_series, bound_schmidt_acc, bound_schmidt_basic};
pub use deterministic::{
    acc_det_corollary_series, acc_det_series, basic_det_corollary_series, basic_det_series, bound_acc_det,
    bound_acc_det_corollary, bound_basic_det, bound_basic_det_corollary, CorollaryVariant,
};
pub use random::{
    acc_random_closed_series, acc_random_running_series, basic_random_series, basic_stationary_series,
    bound_acc_random_closed, bound_acc_random_running, bound_basic_random, bound_basic_stationary, sum_i2, sum_i4,
    RandomVariant,
};
pub use sweep::{
    alpha_weight_excess, check_bound_validity, observed_gaps, BoundName, BoundSeries, BoundSweep, SweepRow, ValidityReport,
};

use alloc::vec::Vec;
use nalgebra::DVector;
use num_traits::Float;

use crate::error::{check_dim, input, Result};
use crate::error_models::ErrorScale;
use crate::problem::{CompositeProblem, SmoothFn};
use crate::solver::{MomentumRule, Reference, RunTrace, SolverConfig, Variant};

/// Safety factor on the realized sup of `‖∇g‖_∞`.
pub const GRAD_SUP_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundParams {
    /// Effective constant step.
    pub s: f64,
    pub lipschitz: f64,
    /// Lipschitz constant used by the baseline bounds; the step they assume is its inverse.
    pub baseline_lipschitz: f64,
    pub delta: f64,
    pub eps0: f64,
    pub gamma: f64,
    /// Probability that the distance to `x⋆` does not grow.
    pub p: f64,
    pub n: usize,
    pub m_grad: f64,
    /// `sup ‖u^i‖ / ‖x⋆ − x⁰‖`, needed by the closed accelerated random bound.
    pub m_u: Option<f64>,
    /// Mean of a stationary ε₂ sequence.
    pub mean_eps2: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub rho: f64,
    pub k0: usize,
    /// `‖x⋆ − x⁰‖₂`
    pub dist0: f64,
    pub momentum: MomentumRule,
}

impl BoundParams {
    /// Error-free parameters for step `s` and initial distance `dist0`.
    pub fn basic(s: f64, lipschitz: f64, n: usize, dist0: f64) -> Self {
        BoundParams {
            s,
            lipschitz,
            baseline_lipschitz: 1.0 / s,
            delta: 0.0,
            eps0: 0.0,
            gamma: 3.0,
            p: 1.0,
            n,
            m_grad: 1.0,
            m_u: None,
            mean_eps2: None,
            c1: lipschitz,
            c2: 1.0,
            rho: 0.0,
            k0: 0,
            dist0,
            momentum: MomentumRule::FistaExact,
        }
    }

    /// Parameters derived from a finished run and its reference solution.
    pub fn from_trace<G: SmoothFn>(
        problem: &CompositeProblem<G>,
        config: &SolverConfig,
        trace: &RunTrace,
        reference: &Reference,
    ) -> Result<Self> {
        check_dim(problem.dim(), reference.x.len())?;
        let s = trace.min_step().unwrap_or_else(|| config.stepsize.initial());
        let l = problem.lipschitz();
        let dist0 = (&reference.x - &trace.x0).norm();
        let m_grad = match config.grad_errors.scale {
            ErrorScale::Absolute => 1.0,
            ErrorScale::Relative => {
                GRAD_SUP_FACTOR * trace.records.iter().fold(0.0f64, |a, r| a.max(r.grad_inf))
            }
        };
        let realized_eps2 = trace.records.iter().fold(0.0f64, |a, r| a.max(r.eps2));
        let terms = TraceTerms::new(trace, reference, s)?;
        let u_sup = terms.u_norm.iter().fold(0.0f64, |a, v| a.max(*v));
        let mut p = BoundParams::basic(s, l, problem.dim(), dist0);
        p.delta = config.grad_errors.delta().unwrap_or(0.0);
        p.eps0 = config.prox_errors.eps0().max(realized_eps2);
        p.m_grad = m_grad;
        p.m_u = if dist0 > 0.0 { Some(u_sup / dist0) } else { None };
        p.mean_eps2 = config.prox_errors.stationary_mean();
        p.rho = trace.records.last().map(|r| r.step_norm).unwrap_or(0.0);
        p.momentum = match trace.variant {
            Variant::Basic => MomentumRule::Zero,
            Variant::Accelerated => config.momentum,
        };
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            self.s,
            self.lipschitz,
            self.baseline_lipschitz,
            self.delta,
            self.eps0,
            self.m_grad,
            self.c1,
            self.c2,
            self.rho,
            self.dist0,
        ];
        if nonneg.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return input("bound parameters must be finite and nonnegative");
        }
        if !(self.s > 0.0) {
            return input("step must be positive");
        }
        if !(self.gamma > 0.0) {
            return input("γ must be positive");
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return input("p must lie in (0, 1]");
        }
        Ok(())
    }

    /// `C_ρ = √(2c₂ρ/s) + s·c₁·L·ρ`.
    pub fn c_rho(&self) -> f64 {
        Float::sqrt(2.0 * self.c2 * self.rho / self.s) + self.s * self.c1 * self.lipschitz * self.rho
    }
}

/// Per-iteration scalars that the running bounds consume.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTerms {
    pub s: f64,
    pub dist0: f64,
    pub eps2: Vec<f64>,
    pub eps1_norm: Vec<f64>,
    /// `‖r^{i+1}‖`
    pub res_norm: Vec<f64>,
    /// `(ε₁^i − r^{i+1}/s)ᵀ(x⋆ − x^{i+1})`
    pub inner_basic: Vec<f64>,
    /// `‖x⋆ − x^{i+1}‖²`
    pub dist_next_sq: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `‖u^{i+1}‖`
    pub u_norm: Vec<f64>,
    /// `(ε₁^i − r^{i+1}/s)ᵀ u^{i+1}`
    pub inner_acc: Vec<f64>,
}

impl TraceTerms {
    /// `s` is the constant step the bounds assume.
    pub fn new(trace: &RunTrace, reference: &Reference, s: f64) -> Result<Self> {
        check_dim(trace.x0.len(), reference.x.len())?;
        if !(s > 0.0) {
            return input("step must be positive");
        }
        let xs = &reference.x;
        let k = trace.records.len();
        let mut t = TraceTerms {
            s,
            dist0: (xs - &trace.x0).norm(),
            eps2: Vec::with_capacity(k),
            eps1_norm: Vec::with_capacity(k),
            res_norm: Vec::with_capacity(k),
            inner_basic: Vec::with_capacity(k),
            dist_next_sq: Vec::with_capacity(k),
            alpha: Vec::with_capacity(k),
            u_norm: Vec::with_capacity(k),
            inner_acc: Vec::with_capacity(k),
        };
        let mut x_prev: &DVector<f64> = &trace.x0;
        for r in &trace.records {
            let nu = &r.eps1 - &r.residual / s;
            let e = xs - &r.x_next;
            let u = &e + (&r.x_next - x_prev) * (1.0 - r.alpha);
            t.eps2.push(r.eps2);
            t.eps1_norm.push(r.eps1.norm());
            t.res_norm.push(r.residual.norm());
            t.inner_basic.push(nu.dot(&e));
            t.dist_next_sq.push(e.norm_squared());
            t.alpha.push(r.alpha);
            t.u_norm.push(u.norm());
            t.inner_acc.push(nu.dot(&u));
            x_prev = &r.x_next;
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.eps2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps2.is_empty()
    }

    /// First `len` iterations only.
    pub fn truncated(&self, len: usize) -> Self {
        let cut = |v: &Vec<f64>| v[..len.min(v.len())].to_vec();
        TraceTerms {
            s: self.s,
            dist0: self.dist0,
            eps2: cut(&self.eps2),
            eps1_norm: cut(&self.eps1_norm),
            res_norm: cut(&self.res_norm),
            inner_basic: cut(&self.inner_basic),
            dist_next_sq: cut(&self.dist_next_sq),
            alpha: cut(&self.alpha),
            u_norm: cut(&self.u_norm),
            inner_acc: cut(&self.inner_acc),
        }
    }

    /// `c_i = ‖ε₁^i‖ + √(2ε₂^i/s)`
    pub fn c(&self, i: usize) -> f64 {
        self.eps1_norm[i] + Float::sqrt(2.0 * self.eps2[i] / self.s)
    }

    pub(crate) fn at(&self, k: usize) -> Result<Self> {
        if k >= self.len() {
            return input(alloc::format!("k={k} beyond trace of length {}", self.len()));
        }
        Ok(self.truncated(k + 1))
    }
}
