//! Per-iteration evaluation of every bound against the observed gap.

use alloc::string::String;
use alloc::vec::Vec;

use super::{
    acc_det_corollary_series, acc_det_series, acc_random_running_series, basic_det_corollary_series,
    basic_det_series, basic_random_series, basic_stationary_series, schmidt_acc_series, schmidt_basic_series,
    BoundParams, CorollaryVariant, RandomVariant, TraceTerms,
};
use crate::error::{check_dim, Result};
use crate::problem::{CompositeProblem, SmoothFn};
use crate::solver::{Reference, RunTrace, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundName {
    ThmBasicDet,
    CorBasicDet,
    ThmBasicRand,
    ThmBasicStat,
    ThmAccDet,
    CorAccDet,
    ThmAccRand,
    SchmidtBasic,
    SchmidtAcc,
}

impl BoundName {
    pub const ALL: [BoundName; 9] = [
        BoundName::ThmBasicDet,
        BoundName::CorBasicDet,
        BoundName::ThmBasicRand,
        BoundName::ThmBasicStat,
        BoundName::ThmAccDet,
        BoundName::CorAccDet,
        BoundName::ThmAccRand,
        BoundName::SchmidtBasic,
        BoundName::SchmidtAcc,
    ];

    pub fn column(self) -> &'static str {
        match self {
            BoundName::ThmBasicDet => "thm_basic_det",
            BoundName::CorBasicDet => "cor_basic_det",
            BoundName::ThmBasicRand => "thm_basic_rand",
            BoundName::ThmBasicStat => "thm_basic_stat",
            BoundName::ThmAccDet => "thm_acc_det",
            BoundName::CorAccDet => "cor_acc_det",
            BoundName::ThmAccRand => "thm_acc_rand",
            BoundName::SchmidtBasic => "schmidt_basic",
            BoundName::SchmidtAcc => "schmidt_acc",
        }
    }

    /// Holds for every realization, not just with some probability.
    pub fn deterministic(self) -> bool {
        !matches!(self, BoundName::ThmBasicRand | BoundName::ThmBasicStat | BoundName::ThmAccRand)
    }

    /// Proven upper bound on every valid run (the corollary approximations and
    /// baselines are reported but not guaranteed).
    pub fn guaranteed(self) -> bool {
        matches!(self, BoundName::ThmBasicDet | BoundName::ThmAccDet)
    }
}

/// Values of one bound aligned with iteration counts `t = 1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSeries {
    pub name: BoundName,
    pub values: Vec<f64>,
    /// Probability with which each value holds (1 for deterministic bounds).
    pub probability: Vec<f64>,
    /// Computable without the realized errors.
    pub a_priori: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidityReport {
    pub name: BoundName,
    pub checked: usize,
    /// Iteration counts `t` where the observed gap exceeded the bound.
    pub violations: Vec<usize>,
    /// Largest `observed − bound` (negative when every check passed).
    pub max_excess: f64,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `observed[t−1] ≤ series.values[t−1]` exactly, no tolerance.
pub fn check_bound_validity(observed: &[f64], series: &BoundSeries) -> ValidityReport {
    let mut rep = ValidityReport { name: series.name, checked: 0, violations: Vec::new(), max_excess: f64::NEG_INFINITY };
    for (i, (o, b)) in observed.iter().zip(&series.values).enumerate() {
        rep.checked += 1;
        let excess = o - b;
        if excess > rep.max_excess || excess.is_nan() {
            rep.max_excess = excess;
        }
        if !(o <= b) {
            rep.violations.push(i + 1);
        }
    }
    rep
}

/// Observed gap for every iteration count `t`: ergodic mean of `x^1..x^t` for the
/// basic method, `x^t` for the accelerated one.
pub fn observed_gaps<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    trace: &RunTrace,
    reference: &Reference,
) -> Result<Vec<f64>> {
    check_dim(problem.dim(), reference.x.len())?;
    Ok(match trace.variant {
        Variant::Basic => {
            let mut acc = nalgebra::DVector::zeros(problem.dim());
            trace
                .records
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    acc += &r.x_next;
                    problem.f_value(&(&acc / (i + 1) as f64)) - reference.f
                })
                .collect()
        }
        Variant::Accelerated => trace.records.iter().map(|r| r.f_next - reference.f).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub iter: usize,
    pub f_gap: f64,
    pub thm_basic_det: Option<f64>,
    pub cor_basic_det: Option<f64>,
    pub thm_basic_rand: Option<f64>,
    pub thm_basic_stat: Option<f64>,
    pub thm_acc_det: Option<f64>,
    pub cor_acc_det: Option<f64>,
    pub thm_acc_rand: Option<f64>,
    pub schmidt_basic: Option<f64>,
    pub schmidt_acc: Option<f64>,
    pub p_basic_rand: Option<f64>,
    pub p_basic_stat: Option<f64>,
    pub p_acc_rand: Option<f64>,
    pub impr_basic: Option<f64>,
    pub impr_acc: Option<f64>,
}

/// Indices `i ≥ 1` with `α_i > i`.
pub fn alpha_weight_excess(alpha: &[f64]) -> Vec<usize> {
    alpha.iter().enumerate().skip(1).filter(|(i, a)| **a > *i as f64).map(|(i, _)| i).collect()
}

/// Every applicable bound for one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSweep {
    pub variant: Variant,
    pub params: BoundParams,
    pub observed: Vec<f64>,
    pub series: Vec<BoundSeries>,
    pub warnings: Vec<String>,
}

impl BoundSweep {
    pub fn evaluate<G: SmoothFn>(
        problem: &CompositeProblem<G>,
        trace: &RunTrace,
        reference: &Reference,
        params: &BoundParams,
    ) -> Result<Self> {
        params.validate()?;
        let terms = TraceTerms::new(trace, reference, params.s)?;
        let observed = observed_gaps(problem, trace, reference)?;
        let det = |name, values: Vec<f64>| BoundSeries {
            name,
            probability: alloc::vec![1.0; values.len()],
            values,
            a_priori: false,
        };
        let split = |name, v: Vec<(f64, f64)>, a_priori| BoundSeries {
            name,
            values: v.iter().map(|x| x.0).collect(),
            probability: v.iter().map(|x| x.1).collect(),
            a_priori,
        };
        let mut series = Vec::new();
        let mut warnings = Vec::new();
        match trace.variant {
            Variant::Basic => {
                series.push(det(BoundName::ThmBasicDet, basic_det_series(&terms, params)));
                let cor = basic_det_corollary_series(&terms, params, CorollaryVariant::Approx);
                series.push(det(BoundName::CorBasicDet, cor.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()));
                series.push(split(
                    BoundName::ThmBasicRand,
                    basic_random_series(&terms, params, RandomVariant::Stated)?,
                    false,
                ));
                if params.mean_eps2.is_some() {
                    series.push(split(BoundName::ThmBasicStat, basic_stationary_series(params, terms.len())?, true));
                }
                series.push(det(BoundName::SchmidtBasic, schmidt_basic_series(&terms, params)));
            }
            Variant::Accelerated => {
                series.push(det(BoundName::ThmAccDet, acc_det_series(&terms, params)));
                series.push(det(
                    BoundName::CorAccDet,
                    acc_det_corollary_series(&terms, params, CorollaryVariant::Approx),
                ));
                series.push(split(BoundName::ThmAccRand, acc_random_running_series(&terms, params)?, false));
                let over = alpha_weight_excess(&terms.alpha);
                if !over.is_empty() {
                    warnings.push(alloc::format!(
                        "thm_acc_rand weights i but α_i > i at i = {:?}; the weight substitution is not conservative there",
                        over
                    ));
                }
                series.push(det(BoundName::SchmidtAcc, schmidt_acc_series(&terms, params)));
            }
        }
        Ok(BoundSweep { variant: trace.variant, params: params.clone(), observed, series, warnings })
    }

    pub fn get(&self, name: BoundName) -> Option<&BoundSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Exact dominance check for every guaranteed series.
    pub fn validity(&self) -> Vec<ValidityReport> {
        self.series
            .iter()
            .filter(|s| s.name.guaranteed())
            .map(|s| check_bound_validity(&self.observed, s))
            .collect()
    }

    pub fn rows(&self) -> Vec<SweepRow> {
        let at = |name: BoundName, i: usize| self.get(name).and_then(|s| s.values.get(i).copied());
        let prob = |name: BoundName, i: usize| self.get(name).and_then(|s| s.probability.get(i).copied());
        (0..self.observed.len())
            .map(|i| {
                let mut r = SweepRow {
                    iter: i + 1,
                    f_gap: self.observed[i],
                    thm_basic_det: at(BoundName::ThmBasicDet, i),
                    cor_basic_det: at(BoundName::CorBasicDet, i),
                    thm_basic_rand: at(BoundName::ThmBasicRand, i),
                    thm_basic_stat: at(BoundName::ThmBasicStat, i),
                    thm_acc_det: at(BoundName::ThmAccDet, i),
                    cor_acc_det: at(BoundName::CorAccDet, i),
                    thm_acc_rand: at(BoundName::ThmAccRand, i),
                    schmidt_basic: at(BoundName::SchmidtBasic, i),
                    schmidt_acc: at(BoundName::SchmidtAcc, i),
                    p_basic_rand: prob(BoundName::ThmBasicRand, i),
                    p_basic_stat: prob(BoundName::ThmBasicStat, i),
                    p_acc_rand: prob(BoundName::ThmAccRand, i),
                    impr_basic: None,
                    impr_acc: None,
                };
                r.impr_basic = r.schmidt_basic.zip(r.cor_basic_det).map(|(a, b)| a - b);
                r.impr_acc = r.schmidt_acc.zip(r.cor_acc_det).map(|(a, b)| a - b);
                r
            })
            .collect()
    }
}
