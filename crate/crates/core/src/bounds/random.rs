//! High-probability bounds for random error sequences.

use alloc::vec::Vec;
use num_traits::Float;

use super::{BoundParams, TraceTerms};
use crate::error::{input, Result};
use crate::solver::AlphaIter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RandomVariant {
    /// Uses the almost-sure bound ε₀ inside `√(2ε₀/s)`.
    #[default]
    Stated,
    /// Replaces ε₀ by the realized mean of ε₂ over the window.
    Sharp,
    /// Drops the `√(2ε₀/s)` term (valid approximation for `n ≫ 1/s`).
    LargeN,
}

/// `Σ_{i=1}^k i²`, exact in integers before the final rounding when `k ≤ 10⁷`.
pub fn sum_i2(k: u64) -> f64 {
    if k <= EXACT_SUM_LIMIT {
        let k = k as u128;
        return (k * (k + 1) * (2 * k + 1) / 6) as f64;
    }
    let k = k as f64;
    k * (k + 1.0) * (2.0 * k + 1.0) / 6.0
}

/// `Σ_{i=1}^k i⁴`
pub fn sum_i4(k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k <= EXACT_SUM_LIMIT {
        let k = k as u128;
        return (k * (k + 1) * (2 * k + 1) * (3 * k * k + 3 * k - 1) / 30) as f64;
    }
    let k = k as f64;
    k * (k + 1.0) * (2.0 * k + 1.0) * (3.0 * k * k + 3.0 * k - 1.0) / 30.0
}

const EXACT_SUM_LIMIT: u64 = 10_000_000;

fn check(p: &BoundParams) -> Result<()> {
    if !(p.gamma > 0.0) {
        return input("γ must be positive");
    }
    p.validate()
}

fn tail(gamma: f64, factor: f64) -> f64 {
    (1.0 - factor * Float::exp(-0.5 * gamma * gamma)).max(0.0)
}

/// Bound on the mean of `x^1..x^k` (`k ≥ 1` averaged iterates) with its probability.
///
/// `eps2_sum` is `Σ_{i=1}^k ε₂^i` over the same window.
pub fn bound_basic_random(p: &BoundParams, k: usize, eps2_sum: f64, variant: RandomVariant) -> Result<(f64, f64)> {
    check(p)?;
    if k == 0 {
        return input("need at least one averaged iterate");
    }
    let kf = k as f64;
    let d = p.dist0;
    let grad_term = Float::sqrt(p.n as f64) * p.m_grad * p.delta;
    let prox_term = match variant {
        RandomVariant::Stated => Float::sqrt(2.0 * p.eps0 / p.s),
        RandomVariant::Sharp => Float::sqrt(2.0 * eps2_sum.max(0.0) / (kf * p.s)),
        RandomVariant::LargeN => 0.0,
    };
    let value = eps2_sum / kf + p.gamma / Float::sqrt(kf) * (grad_term + prox_term) * d + d * d / (2.0 * p.s * kf);
    let prob = Float::powi(p.p, k as i32) * tail(p.gamma, 2.0);
    Ok((value, prob))
}

/// Stationary version: `E[ε₂] + (γ/√k)(ε₀/2 + √n·M·δ·D) + D²/(2sk)`.
pub fn bound_basic_stationary(p: &BoundParams, k: usize) -> Result<(f64, f64)> {
    check(p)?;
    if k == 0 {
        return input("need at least one averaged iterate");
    }
    let mean = p.mean_eps2.ok_or_else(|| crate::Error::Input("stationary bound needs E[ε₂]".into()))?;
    let kf = k as f64;
    let d = p.dist0;
    let value = mean
        + p.gamma / Float::sqrt(kf) * (0.5 * p.eps0 + Float::sqrt(p.n as f64) * p.m_grad * p.delta * d)
        + d * d / (2.0 * p.s * kf);
    let prob = Float::powi(p.p, k as i32) * tail(p.gamma, 4.0);
    Ok((value, prob))
}

/// [`bound_basic_random`] for `k = 1..=len` using the trace's realized ε₂.
pub fn basic_random_series(t: &TraceTerms, p: &BoundParams, variant: RandomVariant) -> Result<Vec<(f64, f64)>> {
    let mut sum = 0.0;
    (0..t.len())
        .map(|i| {
            sum += t.eps2[i];
            bound_basic_random(p, i + 1, sum, variant)
        })
        .collect()
}

pub fn basic_stationary_series(p: &BoundParams, len: usize) -> Result<Vec<(f64, f64)>> {
    (1..=len).map(|k| bound_basic_stationary(p, k)).collect()
}

/// Accelerated random bound on `f(x^{k+1}) − f⋆` from realized ε₂ and `‖u^i‖`.
///
/// Sums run over `i = 1..k` with weights `i`; `E[ε₂^i]` is the stationary mean
/// when known, the realized value otherwise.
pub fn acc_random_running_series(t: &TraceTerms, p: &BoundParams) -> Result<Vec<(f64, f64)>> {
    check(p)?;
    let d2 = p.dist0 * p.dist0 / (2.0 * p.s);
    let prob = tail(p.gamma, 6.0);
    let (mut mean_sum, mut q4, mut u2, mut ur) = (0.0, 0.0, 0.0, 0.0);
    let mut out = Vec::with_capacity(t.len());
    for k in 0..t.len() {
        if k >= 1 {
            let i = k as f64;
            let e2 = t.eps2[k];
            let u = t.u_norm[k - 1];
            mean_sum += i * i * p.mean_eps2.unwrap_or(e2);
            q4 += Float::powi(i, 4) * e2 * e2;
            u2 += i * i * u * u;
            ur += i * i * u * u * e2;
        }
        let s_eps2 = mean_sum + 0.5 * p.gamma * Float::sqrt(q4);
        let s_eps1 = p.gamma * p.delta * p.m_grad * Float::sqrt(p.n as f64 * u2);
        let s_r = p.gamma * Float::sqrt(2.0 / p.s * ur);
        let a = t.alpha[k];
        out.push(((s_eps2 + s_r + s_eps1 + d2) / (a * a), prob));
    }
    Ok(out)
}

/// A-priori accelerated random bound with `‖u^i‖ ≤ M_u·D` and `ε₂^i ≤ ε₀`.
pub fn bound_acc_random_closed(p: &BoundParams, k: usize, alpha_k: f64) -> Result<(f64, f64)> {
    check(p)?;
    let m_u = p.m_u.ok_or_else(|| crate::Error::Input("closed accelerated bound needs M_u".into()))?;
    let kk = k as u64;
    let (s2, s4) = (sum_i2(kk), sum_i4(kk));
    let d = p.dist0;
    let s_eps2 = p.eps0 * s2 + 0.5 * p.gamma * p.eps0 * Float::sqrt(s4);
    let s_eps1 = p.gamma * p.delta * m_u * p.m_grad * d * Float::sqrt(p.n as f64 * s2);
    // substituting ‖u‖ ≤ M_u·D and ε₂ ≤ ε₀ into √((2/s)Σi²‖u‖²ε₂)
    let s_r = p.gamma * m_u * d * Float::sqrt(2.0 * p.eps0 / p.s * s2);
    let value = (s_eps2 + s_r + s_eps1 + d * d / (2.0 * p.s)) / (alpha_k * alpha_k);
    Ok((value, tail(p.gamma, 6.0)))
}

pub fn acc_random_closed_series(p: &BoundParams, len: usize) -> Result<Vec<(f64, f64)>> {
    AlphaIter::new(p.momentum).take(len).enumerate().map(|(k, a)| bound_acc_random_closed(p, k, a)).collect()
}

pub fn bound_acc_random_running(t: &TraceTerms, p: &BoundParams, k: usize) -> Result<(f64, f64)> {
    let v = acc_random_running_series(&t.at(k)?, p)?;
    Ok(*v.last().unwrap_or(&(f64::NAN, 0.0)))
}
