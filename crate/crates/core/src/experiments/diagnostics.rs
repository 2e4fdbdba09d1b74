//! Monte-Carlo checks of the martingale and concentration steps behind the random bounds.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use nalgebra::DVector;
use num_traits::Float;
use rand::Rng as _;

use crate::bounds::TraceTerms;
use crate::error::{input, Result};
use crate::problem::{CompositeProblem, SmoothFn};
use crate::rng::{stream_rng, trial_seed};
use crate::solver::{run, Reference, SolverConfig, Variant};

pub const MARTINGALE_BINS: usize = 10;
/// Fewer trials per bin than this make the martingale check inconclusive.
pub const MIN_PER_BIN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DiagnosticStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticRow {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticReport {
    pub test: String,
    pub trials: usize,
    pub status: DiagnosticStatus,
    pub rows: Vec<DiagnosticRow>,
}

impl DiagnosticReport {
    fn from_rows(test: &str, trials: usize, rows: Vec<DiagnosticRow>) -> Self {
        let status = if rows.iter().all(|r| r.pass) { DiagnosticStatus::Pass } else { DiagnosticStatus::Fail };
        DiagnosticReport { test: test.into(), trials, status, rows }
    }
}

/// Increments `T_k − T_{k−1}` of one run, `k = 0..k_max`.
///
/// Basic: `(ε₁^k − r^{k+1}/s)ᵀ(x⋆ − x^{k+1})`; accelerated: `α_k(ε₁^k − r^{k+1}/s)ᵀu^{k+1}`.
pub fn martingale_increments<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    config: &SolverConfig,
    x0: &DVector<f64>,
    reference: &Reference,
    k_max: usize,
    master_seed: u64,
    trial: usize,
) -> Result<Vec<f64>> {
    let mut cfg = config.clone();
    cfg.seed = trial_seed(master_seed, trial as u64);
    cfg.max_iter = k_max;
    cfg.abstol = 0.0;
    let trace = run(problem, &cfg, x0).map_err(|f| f.error)?;
    let s = trace.min_step().unwrap_or(1.0);
    let t = TraceTerms::new(&trace, reference, s)?;
    Ok(match cfg.variant {
        Variant::Basic => t.inner_basic,
        Variant::Accelerated => t.inner_acc.iter().zip(&t.alpha).map(|(v, a)| v * a).collect(),
    })
}

/// Bins trials by `T_{k−1}` into equal-count bins and compares each bin's mean
/// increment with the increment standard deviation. Passes when every
/// `|mean|/std ≤ 4/√(trials per bin)`.
pub fn martingale_report(test: &str, increments: &[Vec<f64>]) -> DiagnosticReport {
    let trials = increments.len();
    let per_bin = trials / MARTINGALE_BINS;
    if per_bin < MIN_PER_BIN {
        return DiagnosticReport {
            test: test.into(),
            trials,
            status: DiagnosticStatus::Inconclusive,
            rows: vec![DiagnosticRow {
                label: format!("trials per bin {per_bin} < {MIN_PER_BIN}"),
                value: f64::NAN,
                threshold: f64::NAN,
                pass: false,
            }],
        };
    }
    let k_max = increments.iter().map(|v| v.len()).min().unwrap_or(0);
    let threshold = 4.0 / Float::sqrt(per_bin as f64);
    let mut prefix = vec![0.0; trials];
    let mut rows = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let inc: Vec<f64> = increments.iter().map(|v| v[k]).collect();
        let mean_all = inc.iter().sum::<f64>() / trials as f64;
        let var = inc.iter().map(|v| (v - mean_all) * (v - mean_all)).sum::<f64>() / (trials as f64 - 1.0);
        let sd = Float::sqrt(var);
        let mut order: Vec<usize> = (0..trials).collect();
        order.sort_by(|&a, &b| prefix[a].partial_cmp(&prefix[b]).unwrap_or(core::cmp::Ordering::Equal));
        let mut worst = 0.0f64;
        for b in 0..MARTINGALE_BINS {
            let lo = b * trials / MARTINGALE_BINS;
            let hi = (b + 1) * trials / MARTINGALE_BINS;
            let m = order[lo..hi].iter().map(|&i| inc[i]).sum::<f64>() / (hi - lo) as f64;
            let z = if sd > 0.0 {
                m.abs() / sd
            } else if m == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(z);
        }
        rows.push(DiagnosticRow { label: format!("k={k}"), value: worst, threshold, pass: worst <= threshold });
        for (p, v) in prefix.iter_mut().zip(&inc) {
            *p += v;
        }
    }
    DiagnosticReport::from_rows(test, trials, rows)
}

/// Sequential driver for [`martingale_increments`] + [`martingale_report`].
pub fn martingale_diagnostic<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    config: &SolverConfig,
    x0: &DVector<f64>,
    reference: &Reference,
    trials: usize,
    k_max: usize,
    seed: u64,
) -> Result<DiagnosticReport> {
    let inc = (0..trials)
        .map(|t| martingale_increments(problem, config, x0, reference, k_max, seed, t))
        .collect::<Result<Vec<_>>>()?;
    let name = match config.variant {
        Variant::Basic => "martingale-basic",
        Variant::Accelerated => "martingale-accelerated",
    };
    Ok(martingale_report(name, &inc))
}

/// Binomial tolerance used by the coverage checks.
fn coverage_row(label: String, exceed: usize, trials: usize, theory: f64) -> DiagnosticRow {
    let p = theory.min(1.0);
    let sigma = Float::sqrt(p * (1.0 - p) / trials as f64);
    let freq = exceed as f64 / trials as f64;
    let threshold = theory + 3.0 * sigma;
    DiagnosticRow { label, value: freq, threshold, pass: freq <= threshold }
}

/// Rademacher-signed martingale with increments `±c_i`; exceedance of
/// `γ√(Σc²)` against `2e^{−γ²/2}`.
pub fn azuma_coverage(c: &[f64], gammas: &[f64], trials: usize, seed: u64) -> Result<DiagnosticReport> {
    if c.iter().any(|v| !(*v >= 0.0)) {
        return input("increment bounds must be nonnegative");
    }
    if trials == 0 {
        return input("need at least one trial");
    }
    let scale = Float::sqrt(c.iter().map(|v| v * v).sum::<f64>());
    let mut exceed = vec![0usize; gammas.len()];
    let mut rng = stream_rng(seed, 0);
    for _ in 0..trials {
        let e: f64 = c.iter().map(|ci| if rng.random::<bool>() { *ci } else { -*ci }).sum();
        for (g, cnt) in gammas.iter().zip(exceed.iter_mut()) {
            if e.abs() > g * scale {
                *cnt += 1;
            }
        }
    }
    let rows = gammas
        .iter()
        .zip(&exceed)
        .map(|(g, &cnt)| coverage_row(format!("gamma={g}"), cnt, trials, 2.0 * Float::exp(-0.5 * g * g)))
        .collect();
    Ok(DiagnosticReport::from_rows("azuma", trials, rows))
}

/// Sums of `k` i.i.d. uniform `[a, b]` draws; exceedance of `t = γ√k(b−a)/2`
/// against `2exp(−2t²/(k(b−a)²))`.
pub fn hoeffding_coverage(a: f64, b: f64, k: usize, gammas: &[f64], trials: usize, seed: u64) -> Result<DiagnosticReport> {
    if !(a <= b) || k == 0 || trials == 0 {
        return input("need a ≤ b, k ≥ 1 and at least one trial");
    }
    let w = b - a;
    let kf = k as f64;
    let mean = kf * 0.5 * (a + b);
    let mut exceed = vec![0usize; gammas.len()];
    let mut rng = stream_rng(seed, 0);
    for _ in 0..trials {
        let s: f64 = (0..k).map(|_| a + w * rng.random::<f64>()).sum();
        for (g, cnt) in gammas.iter().zip(exceed.iter_mut()) {
            if (s - mean).abs() >= g * Float::sqrt(kf) * w / 2.0 {
                *cnt += 1;
            }
        }
    }
    let rows = gammas
        .iter()
        .zip(&exceed)
        .map(|(g, &cnt)| {
            let t = g * Float::sqrt(kf) * w / 2.0;
            let theory = if w > 0.0 { 2.0 * Float::exp(-2.0 * t * t / (kf * w * w)) } else { 2.0 };
            coverage_row(format!("gamma={g}"), cnt, trials, theory)
        })
        .collect();
    Ok(DiagnosticReport::from_rows("hoeffding", trials, rows))
}
