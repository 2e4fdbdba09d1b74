//! Constant and backtracking stepsizes.

use nalgebra::DVector;

use crate::error::{failure, input, Result};
use crate::problem::{CompositeProblem, SmoothFn};

pub const DEFAULT_SHRINK: f64 = 0.5;
pub const DEFAULT_BACKTRACK_CAP: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "snake_case"))]
pub enum StepsizePolicy {
    Constant { s: f64 },
    /// Monotone backtracking: the step only ever shrinks by `eta`.
    Backtracking { s0: f64, eta: f64, cap: usize },
}

impl StepsizePolicy {
    pub fn backtracking(s0: f64) -> Self {
        StepsizePolicy::Backtracking { s0, eta: DEFAULT_SHRINK, cap: DEFAULT_BACKTRACK_CAP }
    }

    pub fn initial(&self) -> f64 {
        match *self {
            StepsizePolicy::Constant { s } => s,
            StepsizePolicy::Backtracking { s0, .. } => s0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StepsizePolicy::Constant { s } if s > 0.0 && s.is_finite() => Ok(()),
            StepsizePolicy::Backtracking { s0, eta, .. } if s0 > 0.0 && s0.is_finite() && eta > 0.0 && eta < 1.0 => Ok(()),
            _ => input("stepsize must be positive and η in (0,1)"),
        }
    }
}

/// Largest admissible constant step: `1/L`, or `1/((1+δ)L)` under relative errors.
pub fn max_constant_step(lipschitz: f64, relative_delta: Option<f64>) -> f64 {
    match relative_delta {
        Some(d) => 1.0 / ((1.0 + d) * lipschitz),
        None => 1.0 / lipschitz,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backtrack {
    pub s: f64,
    pub shrinks: usize,
}

/// Shrinks `s` by `eta` until the descent inequality holds at the prox-gradient step
/// taken from `probe` with `step_grad`.
///
/// The inequality itself is checked with the exact gradient of `g` at the probe.
pub fn backtrack_stepsize<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    s: f64,
    eta: f64,
    cap: usize,
    probe: &DVector<f64>,
    step_grad: &DVector<f64>,
) -> Result<Backtrack> {
    if !(s > 0.0) || !(eta > 0.0 && eta < 1.0) {
        return input("backtracking needs s > 0 and η in (0,1)");
    }
    let g_probe = problem.g.value(probe);
    let exact = problem.grad(probe)?;
    let mut trial = s;
    for j in 0..=cap {
        let next = problem.prox_exact(trial, &(probe - step_grad * trial))?;
        let delta = &next - probe;
        let lhs = problem.g.value(&next);
        let rhs = g_probe + exact.dot(&delta) + delta.norm_squared() / (2.0 * trial);
        // rounding slack on the two function evaluations only
        let slack = 16.0 * f64::EPSILON * (g_probe.abs() + lhs.abs());
        if lhs <= rhs + slack {
            return Ok(Backtrack { s: trial, shrinks: j });
        }
        trial *= eta;
    }
    failure("backtracking exceeded its shrink cap (non-finite oracle values?)")
}
