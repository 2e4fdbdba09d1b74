//! Running bounds for deterministic error sequences.

use alloc::vec::Vec;

use super::{BoundParams, TraceTerms};
use crate::error::{input, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CorollaryVariant {
    Full,
    /// Second-order error terms dropped.
    #[default]
    Approx,
}

/// Ergodic bound on `f(mean(x^1..x^{k+1})) − f⋆` for every `k` in the trace.
///
/// `(1/(k+1))[Σε₂^i + Σ(ε₁^i − r^{i+1}/s)ᵀ(x⋆ − x^{i+1}) + D²/(2s)]
///  − (1/(k+1))[(1/2s)Σ‖r^{i+1}‖² + (1/2s)‖x⋆ − x^{k+1}‖²]`
pub fn basic_det_series(t: &TraceTerms, p: &BoundParams) -> Vec<f64> {
    let s = p.s;
    let d2 = p.dist0 * p.dist0 / (2.0 * s);
    let (mut e2, mut inner, mut res2) = (0.0, 0.0, 0.0);
    (0..t.len())
        .map(|i| {
            e2 += t.eps2[i];
            inner += t.inner_basic[i];
            res2 += t.res_norm[i] * t.res_norm[i];
            let kk = (i + 1) as f64;
            (e2 + inner + d2) / kk - (res2 / (2.0 * s) + t.dist_next_sq[i] / (2.0 * s)) / kk
        })
        .collect()
}

/// Cauchy-Schwarz relaxation of [`basic_det_series`].
///
/// The full form bounds `‖x⋆ − x^{i+1}‖` by the quasi-Féjer recursion
/// `D + Σ_{j≤i+1} E^j + (i+1)C_ρ` with `E^j = ‖r^j‖ + s‖ε₁^{j−1}‖`; the approximate
/// form keeps only `D` and drops the negative terms. Full entries with `k < k₀` are `None`.
pub fn basic_det_corollary_series(t: &TraceTerms, p: &BoundParams, variant: CorollaryVariant) -> Vec<Option<f64>> {
    let s = p.s;
    let d = p.dist0;
    let d2 = d * d / (2.0 * s);
    let c_rho = p.c_rho();
    let (mut e2, mut lin, mut extra, mut cum_e, mut res2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    (0..t.len())
        .map(|i| {
            let c = t.c(i);
            e2 += t.eps2[i];
            lin += c * d;
            cum_e += t.res_norm[i] + s * t.eps1_norm[i];
            extra += c * (cum_e + (i + 1) as f64 * c_rho);
            res2 += t.res_norm[i] * t.res_norm[i];
            let kk = (i + 1) as f64;
            if variant == CorollaryVariant::Full && i < p.k0 {
                return None;
            }
            Some(match variant {
                CorollaryVariant::Approx => (e2 + lin + d2) / kk,
                CorollaryVariant::Full => {
                    (e2 + lin + extra + d2) / kk - (res2 / (2.0 * s) + t.dist_next_sq[i] / (2.0 * s)) / kk
                }
            })
        })
        .collect()
}

/// Last-iterate bound on `f(x^{k+1}) − f⋆` for the accelerated method.
///
/// `(1/α_k²)[Σα_i²ε₂^i + Σα_i(ε₁^i − r^{i+1}/s)ᵀu^{i+1} + D²/(2s)]`
pub fn acc_det_series(t: &TraceTerms, p: &BoundParams) -> Vec<f64> {
    let d2 = p.dist0 * p.dist0 / (2.0 * p.s);
    let (mut e2, mut inner) = (0.0, 0.0);
    (0..t.len())
        .map(|i| {
            let a = t.alpha[i];
            e2 += a * a * t.eps2[i];
            inner += a * t.inner_acc[i];
            (e2 + inner + d2) / (a * a)
        })
        .collect()
}

/// `(1/α_k²)[Σα_i²ε₂^i + Σα_i‖u^{i+1}‖c_i + D²/(2s)]`; the approximate form uses `D` for `‖u^{i+1}‖`.
pub fn acc_det_corollary_series(t: &TraceTerms, p: &BoundParams, variant: CorollaryVariant) -> Vec<f64> {
    let d2 = p.dist0 * p.dist0 / (2.0 * p.s);
    let (mut e2, mut lin) = (0.0, 0.0);
    (0..t.len())
        .map(|i| {
            let a = t.alpha[i];
            let u = match variant {
                CorollaryVariant::Full => t.u_norm[i],
                CorollaryVariant::Approx => p.dist0,
            };
            e2 += a * a * t.eps2[i];
            lin += a * u * t.c(i);
            (e2 + lin + d2) / (a * a)
        })
        .collect()
}

pub fn bound_basic_det(t: &TraceTerms, p: &BoundParams, k: usize) -> Result<f64> {
    Ok(*basic_det_series(&t.at(k)?, p).last().unwrap_or(&f64::NAN))
}

pub fn bound_basic_det_corollary(t: &TraceTerms, p: &BoundParams, k: usize, variant: CorollaryVariant) -> Result<f64> {
    if variant == CorollaryVariant::Full && k < p.k0 {
        return input("full corollary needs k ≥ k₀");
    }
    basic_det_corollary_series(&t.at(k)?, p, variant)
        .last()
        .copied()
        .flatten()
        .ok_or_else(|| crate::Error::Input("empty trace".into()))
}

pub fn bound_acc_det(t: &TraceTerms, p: &BoundParams, k: usize) -> Result<f64> {
    Ok(*acc_det_series(&t.at(k)?, p).last().unwrap_or(&f64::NAN))
}

pub fn bound_acc_det_corollary(t: &TraceTerms, p: &BoundParams, k: usize, variant: CorollaryVariant) -> Result<f64> {
    Ok(*acc_det_corollary_series(&t.at(k)?, p, variant).last().unwrap_or(&f64::NAN))
}
