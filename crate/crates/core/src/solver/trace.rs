use alloc::vec::Vec;
use nalgebra::DVector;

use crate::error::{input, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    Basic,
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RunStatus {
    /// Iterate change fell to `abstol`.
    Converged,
    MaxIterations,
    Failed,
}

/// Iteration `k`: the step from `x^k` (through probe `y^k`) to `x^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub k: usize,
    /// Probe point `y^k` (equals `x^k` for the basic method).
    pub y: DVector<f64>,
    pub step: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eps1: DVector<f64>,
    /// Realized prox suboptimality ε₂^k.
    pub eps2: f64,
    /// `r^{k+1} = x^{k+1} − x̄^{k+1}`.
    pub residual: DVector<f64>,
    pub x_next: DVector<f64>,
    pub f_next: f64,
    /// `‖x^{k+1} − x^k‖₂`
    pub step_norm: f64,
    /// `‖∇g(y^k)‖_∞`
    pub grad_inf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub variant: Variant,
    pub x0: DVector<f64>,
    pub f0: f64,
    pub records: Vec<IterRecord>,
    pub status: RunStatus,
    /// Whether every step met `s ≤ 1/L` (or `1/((1+δ)L)` under relative errors).
    pub step_premise: bool,
    pub backtrack_shrinks: usize,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `x^i`, with `x^0` the starting point.
    pub fn iterate(&self, i: usize) -> Option<&DVector<f64>> {
        if i == 0 {
            Some(&self.x0)
        } else {
            self.records.get(i - 1).map(|r| &r.x_next)
        }
    }

    pub fn last(&self) -> &DVector<f64> {
        self.records.last().map(|r| &r.x_next).unwrap_or(&self.x0)
    }

    /// Smallest step used by the run.
    pub fn min_step(&self) -> Option<f64> {
        self.records.iter().map(|r| r.step).reduce(f64::min)
    }
}

/// Mean of `x^1 .. x^{k+1}`.
pub fn ergodic_average(trace: &RunTrace, k: usize) -> Result<DVector<f64>> {
    if trace.records.is_empty() {
        return input("ergodic average of an empty trace");
    }
    if k >= trace.records.len() {
        return Err(Error::Input(alloc::format!("k={k} beyond trace of length {}", trace.records.len())));
    }
    let mut acc = DVector::zeros(trace.x0.len());
    for r in &trace.records[..=k] {
        acc += &r.x_next;
    }
    Ok(acc / (k + 1) as f64)
}
