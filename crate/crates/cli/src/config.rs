//! Run configuration: TOML file, then command-line overrides, then defaults.
//!
//! Every section rejects unknown keys. The fully resolved configuration is echoed
//! into each artifact directory.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Bumped whenever an artifact layout or column set changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VariantChoice {
    Basic,
    Accelerated,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumChoice {
    FistaExact,
    Linear,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScaleChoice {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GradientKind {
    None,
    Random,
    Biased,
    Quantized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProxKind {
    Exact,
    /// Truncated-normal target gap on `[0, ε₀]`.
    Random,
    /// Target gap fixed at ε₀.
    Constant,
    /// Inner dual solver stopped at `solver_tol`.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RoundingChoice {
    Nearest,
    Floor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErrorSettings {
    pub gradient: GradientKind,
    pub scale: ScaleChoice,
    pub delta: f64,
    /// Fixed-point format for quantized gradients, e.g. `s16.8`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub prox: ProxKind,
    pub eps0: f64,
    pub solver_tol: f64,
    pub inner_max_iter: usize,
}

impl Default for ErrorSettings {
    fn default() -> Self {
        ErrorSettings {
            gradient: GradientKind::None,
            scale: ScaleChoice::Absolute,
            delta: 0.0,
            format: None,
            prox: ProxKind::Exact,
            eps0: 0.0,
            solver_tol: 1e-8,
            inner_max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub variant: VariantChoice,
    pub momentum: MomentumChoice,
    /// Constant step as a multiple of the largest admissible step.
    pub step_scale: f64,
    pub backtracking: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            variant: VariantChoice::Both,
            momentum: MomentumChoice::FistaExact,
            step_scale: 1.0,
            backtracking: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSettings {
    pub gamma: f64,
    /// Probability that the distance to the solution does not grow.
    pub p: f64,
    /// Only used by the `bounds` subcommand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Bound on `‖∇g‖_∞`; required a priori under relative gradient errors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_grad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_u: Option<f64>,
}

impl Default for BoundSettings {
    fn default() -> Self {
        BoundSettings { gamma: 3.0, p: 1.0, lipschitz: None, step: None, dist0: None, dim: None, m_grad: None, m_u: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSettings {
    /// Problem document (JSON); a small generated LASSO when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<PathBuf>,
    pub n: usize,
    pub m: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings { problem: None, n: 20, m: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LassoSettings {
    pub n: usize,
    pub m: usize,
    /// Planted support size; 10% of `n` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
    pub noise: f64,
    /// λ as a fraction of `‖Aᵀy‖_∞`.
    pub lambda_ratio: f64,
}

impl Default for LassoSettings {
    fn default() -> Self {
        use inexact_pg_core::experiments::lasso::{DEFAULT_LAMBDA_RATIO, DEFAULT_M, DEFAULT_N, DEFAULT_NOISE};
        LassoSettings { n: DEFAULT_N, m: DEFAULT_M, sparsity: None, noise: DEFAULT_NOISE, lambda_ratio: DEFAULT_LAMBDA_RATIO }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MpcSettings {
    pub np: usize,
    pub nc: usize,
    pub lambda: f64,
    /// Initial state x(0).
    pub x0: Vec<f64>,
    /// Closed-loop steps after the single-horizon bound sweep; 0 skips the loop.
    pub steps: usize,
}

pub const DEFAULT_MPC_STATE: [f64; 7] = [0.1, -0.1, 0.05, 0.0, 0.02, -0.02, 0.01];

impl Default for MpcSettings {
    fn default() -> Self {
        MpcSettings {
            np: 10,
            nc: 10,
            lambda: inexact_pg_core::experiments::mpc::SPACECRAFT_LAMBDA,
            x0: DEFAULT_MPC_STATE.to_vec(),
            steps: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    pub trials: usize,
    pub k_max: usize,
    pub coverage_trials: usize,
    pub gammas: Vec<f64>,
    /// Error model fed to the martingale check: `random` (symmetric) or `biased`.
    pub gradient: GradientKind,
    pub delta: f64,
    pub eps0: f64,
    pub n: usize,
    pub m: usize,
    /// Offset of the starting point from the solution, applied to every coordinate.
    pub start_offset: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            trials: 2000,
            k_max: 10,
            coverage_trials: 10_000,
            gammas: vec![1.0, 2.0, 3.0],
            gradient: GradientKind::Random,
            delta: 0.01,
            eps0: 1e-6,
            n: 20,
            m: 50,
            start_offset: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantizeSettings {
    pub format: String,
    pub rounding: RoundingChoice,
    pub values: Vec<f64>,
}

impl Default for QuantizeSettings {
    fn default() -> Self {
        QuantizeSettings {
            format: "s16.8".into(),
            rounding: RoundingChoice::Nearest,
            values: vec![-1000.0, -1.3, -0.1, 0.0, 0.00390625, 0.1, 1.3, 3.14159, 1000.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub iters: usize,
    pub abstol: f64,
    pub trace_csv: bool,
    pub bounds_csv: bool,
    pub strict: bool,
    pub errors: ErrorSettings,
    pub solver: SolverSettings,
    pub bounds: BoundSettings,
    pub solve: SolveSettings,
    pub lasso: LassoSettings,
    pub mpc: MpcSettings,
    pub verify: VerifySettings,
    pub quantize: QuantizeSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            command: None,
            seed: 0,
            out: None,
            iters: 500,
            abstol: 0.0,
            trace_csv: true,
            bounds_csv: true,
            strict: false,
            errors: ErrorSettings::default(),
            solver: SolverSettings::default(),
            bounds: BoundSettings::default(),
            solve: SolveSettings::default(),
            lasso: LassoSettings::default(),
            mpc: MpcSettings::default(),
            verify: VerifySettings::default(),
            quantize: QuantizeSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(CliError::config)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    /// Artifact directory: `--out`, the file's `out`, or `runs/<command>`.
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            PathBuf::from("runs").join(self.command.as_deref().unwrap_or("run"))
        })
    }
}
