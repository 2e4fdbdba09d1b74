//! Basic and accelerated inexact proximal gradient iterations.

mod momentum;
mod reference;
mod trace;

pub use momentum::{alpha_sequence, beta, AlphaIter, MomentumRule};
pub use reference::{reference_solution, Reference, REFERENCE_ABSTOL, REFERENCE_MAX_ITERS};
pub use trace::{ergodic_average, IterRecord, RunStatus, RunTrace, Variant};

use alloc::boxed::Box;
use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::error_models::{ErrorScale, GradientErrorSpec, ProxErrorSpec};
use crate::linalg::{all_finite, inf_norm};
use crate::problem::{CompositeProblem, SmoothFn};
use crate::rng::{stream_rng, STREAM_GRADIENT, STREAM_PROX};
use crate::stepsize::{backtrack_stepsize, max_constant_step, StepsizePolicy};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    pub variant: Variant,
    pub stepsize: StepsizePolicy,
    /// Iteration cap K.
    pub max_iter: usize,
    /// Stop once `‖x^{k+1} − x^k‖₂ ≤ abstol`; zero disables early stopping.
    pub abstol: f64,
    pub momentum: MomentumRule,
    pub grad_errors: GradientErrorSpec,
    pub prox_errors: ProxErrorSpec,
    pub seed: u64,
}

impl SolverConfig {
    /// Error-free run with constant step `s`.
    pub fn exact(variant: Variant, s: f64, max_iter: usize) -> Self {
        SolverConfig {
            variant,
            stepsize: StepsizePolicy::Constant { s },
            max_iter,
            abstol: 0.0,
            momentum: MomentumRule::FistaExact,
            grad_errors: GradientErrorSpec::none(),
            prox_errors: ProxErrorSpec::Exact,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::Input("iteration cap must be at least 1".into()));
        }
        if !(self.abstol >= 0.0) {
            return Err(Error::Input("abstol must be nonnegative".into()));
        }
        self.stepsize.validate()?;
        self.grad_errors.validate()?;
        self.prox_errors.validate()
    }
}

/// A failed run together with the iterations completed before the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error} (after {} iterations)", trace.records.len())]
pub struct SolveFailure {
    pub error: Error,
    pub trace: RunTrace,
}

pub type SolveResult = core::result::Result<RunTrace, Box<SolveFailure>>;

/// Runs the variant named in `config`.
pub fn run<G: SmoothFn>(problem: &CompositeProblem<G>, config: &SolverConfig, x0: &DVector<f64>) -> SolveResult {
    match config.variant {
        Variant::Basic => run_basic(problem, config, x0),
        Variant::Accelerated => run_accelerated(problem, config, x0),
    }
}

/// `x^{k+1} ∈ prox^{ε₂^k}_{s h}(x^k − s(∇g(x^k) + ε₁^k))`.
pub fn run_basic<G: SmoothFn>(problem: &CompositeProblem<G>, config: &SolverConfig, x0: &DVector<f64>) -> SolveResult {
    iterate(problem, config, x0, Variant::Basic)
}

/// Same step taken from `y^k = x^k + β_k(x^k − x^{k−1})`, with `x^{−1} = x^0`.
pub fn run_accelerated<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    config: &SolverConfig,
    x0: &DVector<f64>,
) -> SolveResult {
    iterate(problem, config, x0, Variant::Accelerated)
}

fn iterate<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    config: &SolverConfig,
    x0: &DVector<f64>,
    variant: Variant,
) -> SolveResult {
    let mut trace = RunTrace {
        variant,
        x0: x0.clone(),
        f0: f64::NAN,
        records: alloc::vec::Vec::new(),
        status: RunStatus::Failed,
        step_premise: true,
        backtrack_shrinks: 0,
    };
    let fail = |error: Error, mut trace: RunTrace| {
        trace.status = RunStatus::Failed;
        Err(Box::new(SolveFailure { error, trace }))
    };
    if let Err(e) = check_dim(problem.dim(), x0.len()).and_then(|_| config.validate()) {
        return fail(e, trace);
    }
    if !all_finite(x0) {
        return fail(Error::Input("starting point is not finite".into()), trace);
    }
    trace.f0 = problem.f_value(x0);

    let relative = match config.grad_errors.scale {
        ErrorScale::Relative => Some(config.grad_errors.delta().unwrap_or(0.0)),
        ErrorScale::Absolute => None,
    };
    let s_max = max_constant_step(problem.lipschitz(), relative);
    let mut grad_inj = config.grad_errors.injector(stream_rng(config.seed, STREAM_GRADIENT));
    let mut prox_inj = config.prox_errors.injector(stream_rng(config.seed, STREAM_PROX));
    let rule = match variant {
        Variant::Basic => MomentumRule::Zero,
        Variant::Accelerated => config.momentum,
    };
    let mut alphas = AlphaIter::new(rule);
    let mut alpha_prev = None;
    let mut s = config.stepsize.initial();
    let mut x_prev = x0.clone();
    let mut x = x0.clone();

    for k in 0..config.max_iter {
        let alpha = alphas.next().unwrap_or(1.0);
        let b = beta(alpha_prev, alpha);
        let y = if b == 0.0 { x.clone() } else { &x + (&x - &x_prev) * b };
        let step = (|| -> Result<_> {
            let true_grad = problem.grad(&y)?;
            let (noisy, eps1) = grad_inj.inject(problem, &y, &true_grad, k)?;
            let mut shrinks = 0;
            if let StepsizePolicy::Backtracking { eta, cap, .. } = config.stepsize {
                let bt = backtrack_stepsize(problem, s, eta, cap, &y, &noisy)?;
                s = bt.s;
                shrinks = bt.shrinks;
            }
            let w = &y - &noisy * s;
            let out = prox_inj.apply(&problem.h, s, &w, k)?;
            Ok((true_grad, eps1, out, shrinks))
        })();
        let (true_grad, eps1, out, shrinks) = match step {
            Ok(v) => v,
            Err(e) => return fail(e, trace),
        };
        trace.backtrack_shrinks += shrinks;
        if !all_finite(&out.x) {
            return fail(Error::Failure(alloc::format!("non-finite iterate at k={k}")), trace);
        }
        trace.step_premise &= s <= s_max * (1.0 + 1e-12);
        let step_norm = (&out.x - &x).norm();
        let f_next = problem.f_value(&out.x);
        trace.records.push(IterRecord {
            k,
            y,
            step: s,
            alpha,
            beta: b,
            eps1,
            eps2: out.gap,
            residual: out.residual,
            x_next: out.x.clone(),
            f_next,
            step_norm,
            grad_inf: inf_norm(&true_grad),
        });
        x_prev = core::mem::replace(&mut x, out.x);
        alpha_prev = Some(alpha);
        if config.abstol > 0.0 && step_norm <= config.abstol {
            trace.status = RunStatus::Converged;
            return Ok(trace);
        }
    }
    trace.status = RunStatus::MaxIterations;
    Ok(trace)
}
