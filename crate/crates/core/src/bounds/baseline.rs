//! Earlier ergodic and accelerated bounds for inexact proximal gradient, used as a baseline.
//!
//! They assume the step `1/L`, so they are evaluated with `L = params.baseline_lipschitz`.

use alloc::vec::Vec;
use num_traits::Float;

use super::{BoundParams, TraceTerms};
use crate::error::{input, Result};

/// `(L/2K)[D + 2A_K + √(2B_K)]²` for `K = 1..=len`, where
/// `A_K = Σ(‖ε₁‖/L + √(2ε₂/L))`, `B_K = Σε₂/L` over the first `K` iterations.
pub fn schmidt_basic_series(t: &TraceTerms, p: &BoundParams) -> Vec<f64> {
    let l = p.baseline_lipschitz;
    let (mut a, mut b) = (0.0, 0.0);
    (0..t.len())
        .map(|i| {
            a += t.eps1_norm[i] / l + Float::sqrt(2.0 * t.eps2[i] / l);
            b += t.eps2[i] / l;
            let kk = (i + 1) as f64;
            let inner = p.dist0 + 2.0 * a + Float::sqrt(2.0 * b);
            l / (2.0 * kk) * inner * inner
        })
        .collect()
}

/// `(2L/(K+1)²)[D + 2Ã_K + √(2B̃_K)]²` with weights `j` on iteration `j−1`.
pub fn schmidt_acc_series(t: &TraceTerms, p: &BoundParams) -> Vec<f64> {
    let l = p.baseline_lipschitz;
    let (mut a, mut b) = (0.0, 0.0);
    (0..t.len())
        .map(|i| {
            let j = (i + 1) as f64;
            a += j * (t.eps1_norm[i] / l + Float::sqrt(2.0 * t.eps2[i] / l));
            b += j * j * t.eps2[i] / l;
            let inner = p.dist0 + 2.0 * a + Float::sqrt(2.0 * b);
            2.0 * l / ((j + 1.0) * (j + 1.0)) * inner * inner
        })
        .collect()
}

/// Ergodic baseline after `k_count ≥ 1` iterations.
pub fn bound_schmidt_basic(t: &TraceTerms, p: &BoundParams, k_count: usize) -> Result<f64> {
    if k_count == 0 || k_count > t.len() {
        return input("iteration count outside the trace");
    }
    Ok(schmidt_basic_series(&t.truncated(k_count), p)[k_count - 1])
}

/// Accelerated baseline after `k_count ≥ 1` iterations.
pub fn bound_schmidt_acc(t: &TraceTerms, p: &BoundParams, k_count: usize) -> Result<f64> {
    if k_count == 0 || k_count > t.len() {
        return input("iteration count outside the trace");
    }
    Ok(schmidt_acc_series(&t.truncated(k_count), p)[k_count - 1])
}
