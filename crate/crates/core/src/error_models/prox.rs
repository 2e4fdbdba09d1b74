//! ε₂-suboptimal proximal points for `h = λ‖·‖₁`.
//!
//! A point `x` is ε₂-suboptimal for `prox_{sh}(w)` when
//! `G(x) − G(x̄) ≤ ε₂` with `G(z) = h(z) + ‖z − w‖²/(2s)` and `x̄` the exact prox.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DVector;
use num_traits::Float;
use rand::Rng as _;

use crate::error::{check_dim, failure, input, Result};
use crate::error_models::truncnorm::{standard_normal, TruncatedNormal};
use crate::problem::L1Term;
use crate::rng::Rng;

pub const BISECTION_MAX_STEPS: usize = 200;
/// Target-gap mode accepts any gap in `[GAP_LOWER·ε₂, ε₂]`.
pub const GAP_LOWER: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ResidualDirection {
    /// Uniform unit direction `d`; the sign is drawn so that the residual has zero conditional mean.
    #[default]
    RandomSymmetric,
    /// Fixed direction; defaults to the normalized all-ones vector.
    Fixed { direction: Option<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Eps2Schedule {
    Constant { value: f64 },
    Sequence { values: Vec<f64> },
    /// `c / (k+1)^power`
    Decay { c: f64, power: f64 },
    /// Standard normal truncated to `[0, ε₀]`.
    Random { eps0: f64 },
}

impl Eps2Schedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Eps2Schedule::Constant { value } => *value >= 0.0,
            Eps2Schedule::Sequence { values } => values.iter().all(|v| *v >= 0.0),
            Eps2Schedule::Decay { c, power } => *c >= 0.0 && power.is_finite(),
            Eps2Schedule::Random { eps0 } => *eps0 >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            input("ε₂ schedule values must be nonnegative")
        }
    }

    pub fn target(&self, k: usize, rng: &mut Rng) -> Result<f64> {
        match self {
            Eps2Schedule::Constant { value } => Ok(*value),
            Eps2Schedule::Sequence { values } => values
                .get(k)
                .copied()
                .ok_or_else(|| crate::Error::Input(format!("ε₂ schedule exhausted at k={k}"))),
            Eps2Schedule::Decay { c, power } => Ok(c / Float::powf((k + 1) as f64, *power)),
            Eps2Schedule::Random { eps0 } => {
                if *eps0 == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(TruncatedNormal::new(0.0, *eps0)?.sample(rng))
                }
            }
        }
    }

    /// Almost-sure upper bound ε₀.
    pub fn bound(&self) -> f64 {
        match self {
            Eps2Schedule::Constant { value } => *value,
            Eps2Schedule::Sequence { values } => values.iter().fold(0.0f64, |a, v| a.max(*v)),
            Eps2Schedule::Decay { c, .. } => *c,
            Eps2Schedule::Random { eps0 } => *eps0,
        }
    }

    /// Mean of a stationary schedule.
    pub fn stationary_mean(&self) -> Option<f64> {
        match self {
            Eps2Schedule::Constant { value } => Some(*value),
            Eps2Schedule::Random { eps0 } if *eps0 == 0.0 => Some(0.0),
            Eps2Schedule::Random { eps0 } => TruncatedNormal::new(0.0, *eps0).ok().map(|t| t.mean()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "snake_case"))]
pub enum ProxErrorSpec {
    #[default]
    Exact,
    /// Move from the exact prox along a direction until the gap hits the target.
    TargetGap { schedule: Eps2Schedule, direction: ResidualDirection },
    /// Dual projected-gradient iterations on the prox subproblem, stopped at gap ≤ `tol`.
    InnerSolver { tol: f64, max_iter: usize },
}

impl ProxErrorSpec {
    pub fn target_gap(schedule: Eps2Schedule) -> Self {
        ProxErrorSpec::TargetGap { schedule, direction: ResidualDirection::RandomSymmetric }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProxErrorSpec::Exact => Ok(()),
            ProxErrorSpec::TargetGap { schedule, direction } => {
                schedule.validate()?;
                if let ResidualDirection::Fixed { direction: Some(d) } = direction {
                    if !(d.iter().map(|a| a * a).sum::<f64>() > 0.0) {
                        return input("fixed residual direction must be nonzero");
                    }
                }
                Ok(())
            }
            ProxErrorSpec::InnerSolver { tol, .. } if *tol >= 0.0 => Ok(()),
            ProxErrorSpec::InnerSolver { .. } => input("inner-solver tolerance must be nonnegative"),
        }
    }

    /// Almost-sure bound ε₀ on the realized gap.
    pub fn eps0(&self) -> f64 {
        match self {
            ProxErrorSpec::Exact => 0.0,
            ProxErrorSpec::TargetGap { schedule, .. } => schedule.bound(),
            ProxErrorSpec::InnerSolver { tol, .. } => *tol,
        }
    }

    pub fn stationary_mean(&self) -> Option<f64> {
        match self {
            ProxErrorSpec::Exact => Some(0.0),
            ProxErrorSpec::TargetGap { schedule, .. } => schedule.stationary_mean(),
            ProxErrorSpec::InnerSolver { .. } => None,
        }
    }

    pub fn injector(&self, rng: Rng) -> ProxInjector {
        ProxInjector { spec: self.clone(), rng }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProxOutcome {
    pub x: DVector<f64>,
    pub exact: DVector<f64>,
    /// Realized `G(x) − G(x̄)`.
    pub gap: f64,
    /// `x − x̄`.
    pub residual: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct ProxInjector {
    spec: ProxErrorSpec,
    rng: Rng,
}

impl ProxInjector {
    pub fn spec(&self) -> &ProxErrorSpec {
        &self.spec
    }

    pub fn apply(&mut self, h: &L1Term, s: f64, w: &DVector<f64>, k: usize) -> Result<ProxOutcome> {
        match &self.spec {
            ProxErrorSpec::Exact => approx_prox(h, s, w, 0.0, &DVector::zeros(w.len())),
            ProxErrorSpec::TargetGap { schedule, direction } => {
                let eps2 = schedule.target(k, &mut self.rng)?;
                match direction {
                    ResidualDirection::RandomSymmetric => {
                        let d = random_direction(w.len(), &mut self.rng);
                        let plus = approx_prox(h, s, w, eps2, &d)?;
                        let minus = approx_prox(h, s, w, eps2, &-d)?;
                        // pick ±d with odds t₋ : t₊ so that E[r | d] = 0
                        let (tp, tm) = (plus.residual.norm(), minus.residual.norm());
                        let u: f64 = self.rng.random();
                        if tp + tm == 0.0 || u * (tp + tm) < tm {
                            Ok(plus)
                        } else {
                            Ok(minus)
                        }
                    }
                    ResidualDirection::Fixed { direction } => {
                        approx_prox(h, s, w, eps2, &fixed_direction(w.len(), direction.as_deref())?)
                    }
                }
            }
            ProxErrorSpec::InnerSolver { tol, max_iter } => inner_solver_prox(h, s, w, *tol, *max_iter),
        }
    }
}

fn random_direction(n: usize, rng: &mut Rng) -> DVector<f64> {
    let mut d = DVector::from_fn(n, |_, _| standard_normal(rng));
    let norm = d.norm();
    if norm > 0.0 {
        d /= norm;
    }
    d
}

fn fixed_direction(n: usize, d: Option<&[f64]>) -> Result<DVector<f64>> {
    let d = match d {
        Some(v) => {
            check_dim(n, v.len())?;
            DVector::from_column_slice(v)
        }
        None => DVector::from_element(n, 1.0),
    };
    let norm = d.norm();
    if !(norm > 0.0) {
        return input("fixed residual direction must be nonzero");
    }
    Ok(d / norm)
}

/// `G(x̄ + b) − G(x̄)`, evaluated per coordinate without cancellation.
fn gap_of_step(h: &L1Term, s: f64, w: &DVector<f64>, xbar: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let mut total = 0.0;
    for j in 0..w.len() {
        let (a, bj) = (xbar[j], b[j]);
        if bj == 0.0 {
            continue;
        }
        let quad = bj * bj / (2.0 * s);
        let d = if a != 0.0 && (a + bj) * a > 0.0 {
            // the linear terms cancel exactly on an active coordinate that keeps its sign
            quad
        } else {
            h.lambda * ((a + bj).abs() - a.abs()) + bj * (a - w[j]) / s + quad
        };
        total += d.max(0.0);
    }
    total
}

/// Suboptimality gap of `x` in the prox subproblem at `w`.
pub fn prox_gap(h: &L1Term, s: f64, w: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
    check_dim(w.len(), x.len())?;
    let xbar = h.prox(s, w)?;
    Ok(gap_of_step(h, s, w, &xbar, &(x - &xbar)))
}

/// Target-gap construction: bisect `t` so that `x̄ + t·d` has gap in `[0.9ε₂, ε₂]`.
///
/// `d` must be a unit vector (or zero when `eps2 == 0`).
pub fn approx_prox(h: &L1Term, s: f64, w: &DVector<f64>, eps2: f64, d: &DVector<f64>) -> Result<ProxOutcome> {
    check_dim(w.len(), d.len())?;
    if !(eps2 >= 0.0) {
        return input("ε₂ must be nonnegative");
    }
    let xbar = h.prox(s, w)?;
    if eps2 == 0.0 {
        return Ok(ProxOutcome { x: xbar.clone(), exact: xbar, gap: 0.0, residual: DVector::zeros(w.len()) });
    }
    if !(d.norm() > 0.0) {
        return input("residual direction must be nonzero");
    }
    let phi = |t: f64| gap_of_step(h, s, w, &xbar, &(d * t));
    let (mut lo, mut hi) = (0.0, Float::sqrt(2.0 * s * eps2));
    let mut g_hi = phi(hi);
    let mut steps = 0;
    // φ(t) ≥ t²/(2s), so hi already brackets in exact arithmetic; widen on rounding
    while g_hi < GAP_LOWER * eps2 {
        steps += 1;
        if steps > BISECTION_MAX_STEPS {
            return failure(format!("could not bracket the prox gap target {eps2:e}"));
        }
        lo = hi;
        hi *= 2.0;
        g_hi = phi(hi);
    }
    let mut t = hi;
    let mut gap = g_hi;
    while gap > eps2 {
        steps += 1;
        if steps > BISECTION_MAX_STEPS {
            return failure(format!("bisection on the prox gap did not reach {eps2:e}"));
        }
        t = 0.5 * (lo + hi);
        gap = phi(t);
        if gap > eps2 {
            hi = t;
        } else if gap < GAP_LOWER * eps2 {
            lo = t;
            gap = f64::INFINITY;
        }
    }
    let residual = d * t;
    Ok(ProxOutcome { x: &xbar + &residual, exact: xbar, gap, residual })
}

/// Early-terminated dual projected gradient on the prox subproblem.
///
/// The dual variable `z ∈ [−λ, λ]ⁿ` maps to `x = w − s z`; each step halves the
/// distance to the dual optimum. Stops when the exact gap is ≤ `tol`.
pub fn inner_solver_prox(h: &L1Term, s: f64, w: &DVector<f64>, tol: f64, max_iter: usize) -> Result<ProxOutcome> {
    let xbar = h.prox(s, w)?;
    let lam = h.lambda;
    let mut z = DVector::<f64>::zeros(w.len());
    let mut x = w.clone();
    let mut gap = gap_of_step(h, s, w, &xbar, &(&x - &xbar));
    let mut it = 0;
    while gap > tol && it < max_iter {
        z = z.zip_map(w, |zj, wj| (0.5 * zj + 0.5 * wj / s).max(-lam).min(lam));
        x = w - &z * s;
        gap = gap_of_step(h, s, w, &xbar, &(&x - &xbar));
        it += 1;
    }
    let residual = &x - &xbar;
    Ok(ProxOutcome { x, exact: xbar, gap, residual })
}
