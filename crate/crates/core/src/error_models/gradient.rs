//! Gradient errors `∇g(x) + ε₁` under the absolute and relative models.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DVector;
use num_traits::Float;
use rand::Rng as _;

use crate::error::{check_dim, input, Result};
use crate::error_models::fixed_point::FixedPointFormat;
use crate::error_models::truncnorm::TruncatedNormal;
use crate::problem::{CompositeProblem, SmoothFn};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ErrorScale {
    /// `|ε₁ⱼ| ≤ δ`
    #[default]
    Absolute,
    /// `ε₁ = ∇g(x) ⊙ κ` with `|κⱼ| ≤ δ`
    Relative,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum GradientErrorMode {
    #[default]
    None,
    /// One vector per iteration (error itself, or multiplier under the relative model).
    Sequence { values: Vec<Vec<f64>> },
    /// One magnitude per iteration, applied to every component.
    Magnitudes { values: Vec<f64> },
    /// Magnitude `c / (k+1)^power`.
    Decay { c: f64, power: f64 },
    /// Components drawn from the standard normal truncated to `[−δ, δ]`.
    Random { delta: f64 },
    /// Components uniform on `[0, δ]` (mean `δ/2`); a deliberately broken control.
    Biased { delta: f64 },
    /// Gradient computed in fixed-point arithmetic; `ε₁` is the realized difference.
    Quantized { format: FixedPointFormat },
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradientErrorSpec {
    pub scale: ErrorScale,
    pub mode: GradientErrorMode,
}

impl GradientErrorSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn random(scale: ErrorScale, delta: f64) -> Self {
        GradientErrorSpec { scale, mode: GradientErrorMode::Random { delta } }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.mode {
            GradientErrorMode::Random { delta } | GradientErrorMode::Biased { delta } if !(*delta >= 0.0) => {
                input("δ must be nonnegative")
            }
            GradientErrorMode::Decay { c, power } if !(*c >= 0.0 && power.is_finite()) => {
                input("decay schedule needs c ≥ 0 and finite power")
            }
            _ => Ok(()),
        }
    }

    /// Componentwise bound δ of the model, when the mode has one.
    pub fn delta(&self) -> Option<f64> {
        match &self.mode {
            GradientErrorMode::None => Some(0.0),
            GradientErrorMode::Random { delta } | GradientErrorMode::Biased { delta } => Some(*delta),
            GradientErrorMode::Magnitudes { values } => Some(values.iter().fold(0.0f64, |a, v| a.max(v.abs()))),
            GradientErrorMode::Decay { c, .. } => Some(c.abs()),
            GradientErrorMode::Sequence { values } => {
                Some(values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())))
            }
            GradientErrorMode::Quantized { .. } => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self.mode, GradientErrorMode::Random { .. } | GradientErrorMode::Biased { .. })
    }

    pub fn injector(&self, rng: Rng) -> GradientInjector {
        GradientInjector { spec: self.clone(), rng }
    }
}

/// Stateful sampler for one run.
#[derive(Debug, Clone)]
pub struct GradientInjector {
    spec: GradientErrorSpec,
    rng: Rng,
}

impl GradientInjector {
    pub fn spec(&self) -> &GradientErrorSpec {
        &self.spec
    }

    /// Returns `(∇g(x) + ε₁, ε₁)` for iteration `k`.
    pub fn inject<G: SmoothFn>(
        &mut self,
        problem: &CompositeProblem<G>,
        x: &DVector<f64>,
        true_grad: &DVector<f64>,
        k: usize,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        let n = true_grad.len();
        let raw: DVector<f64> = match &self.spec.mode {
            GradientErrorMode::None => DVector::zeros(n),
            GradientErrorMode::Sequence { values } => {
                let v = values
                    .get(k)
                    .ok_or_else(|| crate::Error::Input(format!("gradient error schedule exhausted at k={k}")))?;
                check_dim(n, v.len())?;
                DVector::from_column_slice(v)
            }
            GradientErrorMode::Magnitudes { values } => {
                let m = values
                    .get(k)
                    .ok_or_else(|| crate::Error::Input(format!("gradient error schedule exhausted at k={k}")))?;
                DVector::from_element(n, *m)
            }
            GradientErrorMode::Decay { c, power } => {
                DVector::from_element(n, c / Float::powf((k + 1) as f64, *power))
            }
            GradientErrorMode::Random { delta } => {
                if *delta == 0.0 {
                    DVector::zeros(n)
                } else {
                    let t = TruncatedNormal::new(-delta, *delta)?;
                    DVector::from_fn(n, |_, _| t.sample(&mut self.rng))
                }
            }
            GradientErrorMode::Biased { delta } => DVector::from_fn(n, |_, _| delta * self.rng.random::<f64>()),
            GradientErrorMode::Quantized { format } => {
                let q = quantized_gradient(format, problem, x)?;
                return Ok((q.0, q.1));
            }
        };
        let eps1 = match self.spec.scale {
            ErrorScale::Absolute => raw,
            ErrorScale::Relative => true_grad.component_mul(&raw),
        };
        Ok((true_grad + &eps1, eps1))
    }
}

/// Gradient computed with quantized inputs, intermediates and output.
///
/// Returns `(quantized gradient, quantized − exact)`.
pub fn quantized_gradient<G: SmoothFn>(
    fmt: &FixedPointFormat,
    problem: &CompositeProblem<G>,
    x: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let exact = problem.grad(x)?;
    let q = problem
        .g
        .quantized_grad(fmt, x)
        .ok_or_else(|| crate::Error::Input(format!("smooth term has no fixed-point gradient ({fmt})")))?;
    let eps1 = &q - &exact;
    Ok((q, eps1))
}
