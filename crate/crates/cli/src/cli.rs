//! Command-line surface. Flags override the config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{GradientKind, MomentumChoice, ProxKind, RoundingChoice, RunConfig, ScaleChoice, VariantChoice};
use crate::error::{CliError, CliResult};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  i/o error while writing artifacts
  2  configuration error (bad file, unknown key, malformed format)
  3  solver failure
  4  bound violation with --strict
  5  diagnostic failure or inconclusive diagnostic";

#[derive(Debug, Parser)]
#[command(name = "inexact-pg", version, about = "Inexact proximal gradient runs, bound sweeps and diagnostics", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem (JSON document or a generated LASSO) and sweep the bounds.
    Solve {
        /// Problem document `{n, M, v, scale, lambda, L}`.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Spacecraft MPC: one condensed horizon with bound sweep, then a closed loop.
    Mpc {
        #[arg(long)]
        np: Option<usize>,
        #[arg(long)]
        nc: Option<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Closed-loop steps (0 skips the loop).
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Random LASSO instance with bound sweep.
    Lasso {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        sparsity: Option<usize>,
        #[arg(long)]
        noise: Option<f64>,
    },
    /// A-priori bounds from problem constants alone.
    Bounds {
        #[arg(long)]
        lipschitz: Option<f64>,
        /// Constant step (default 1/L).
        #[arg(long)]
        step: Option<f64>,
        /// `‖x⋆ − x⁰‖₂`
        #[arg(long)]
        dist0: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
        /// Bound on `‖u^i‖ / ‖x⋆ − x⁰‖` for the closed accelerated bound.
        #[arg(long)]
        m_u: Option<f64>,
        /// Bound on `‖∇g‖_∞` (needed under relative errors).
        #[arg(long)]
        m_grad: Option<f64>,
    },
    /// Martingale and concentration diagnostics.
    Verify {
        #[arg(long)]
        k_max: Option<usize>,
        /// Gradient error model tested for the martingale property.
        #[arg(long, value_enum)]
        control: Option<GradientKind>,
    },
    /// Fixed-point format table.
    Quantize {
        /// Values to quantize.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        rounding: Option<RoundingChoice>,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML run file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Iteration cap K.
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Stop once the iterate change is at most this (0 disables).
    #[arg(long, global = true)]
    pub abstol: Option<f64>,
    /// Artifact directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit 4 when a guaranteed bound is violated.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum)]
    pub variant: Option<VariantChoice>,
    #[arg(long, global = true, value_enum)]
    pub momentum: Option<MomentumChoice>,
    /// Constant step as a multiple of the largest admissible step.
    #[arg(long, global = true)]
    pub step_scale: Option<f64>,
    #[arg(long, global = true)]
    pub backtracking: bool,
    /// Gradient error bound δ (implies random gradient errors unless --gradient is given).
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub scale: Option<ScaleChoice>,
    #[arg(long, global = true, value_enum)]
    pub gradient: Option<GradientKind>,
    /// Prox error bound ε₀ (implies random target gaps unless --prox is given).
    #[arg(long, global = true)]
    pub eps0: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub prox: Option<ProxKind>,
    /// Inner prox solver tolerance (implies --prox inner).
    #[arg(long, global = true)]
    pub solver_tol: Option<f64>,
    /// Fixed-point format uW.F or sW.F (quantized gradients, or the quantize table).
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Probability p used by the probabilistic bounds.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Monte-Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub no_trace_csv: bool,
    #[arg(long, global = true)]
    pub no_bounds_csv: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Mpc { .. } => "mpc",
            Command::Lasso { .. } => "lasso",
            Command::Bounds { .. } => "bounds",
            Command::Verify { .. } => "verify",
            Command::Quantize { .. } => "quantize",
        }
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Cli {
    /// Defaults, overlaid with the config file, overlaid with flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.common.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let c = &self.common;
        cfg.command = Some(self.command.name().into());
        set(&mut cfg.seed, c.seed);
        if c.out.is_some() {
            cfg.out = c.out.clone();
        }
        set(&mut cfg.iters, c.iters);
        set(&mut cfg.abstol, c.abstol);
        cfg.strict |= c.strict;
        cfg.trace_csv &= !c.no_trace_csv;
        cfg.bounds_csv &= !c.no_bounds_csv;
        set(&mut cfg.solver.variant, c.variant);
        set(&mut cfg.solver.momentum, c.momentum);
        set(&mut cfg.solver.step_scale, c.step_scale);
        cfg.solver.backtracking |= c.backtracking;

        let e = &mut cfg.errors;
        if let Some(d) = c.delta {
            e.delta = d;
            if c.gradient.is_none() && e.gradient == GradientKind::None {
                e.gradient = GradientKind::Random;
            }
        }
        set(&mut e.scale, c.scale);
        set(&mut e.gradient, c.gradient);
        if let Some(eps0) = c.eps0 {
            e.eps0 = eps0;
            if c.prox.is_none() && e.prox == ProxKind::Exact {
                e.prox = ProxKind::Random;
            }
        }
        if let Some(tol) = c.solver_tol {
            e.solver_tol = tol;
            if c.prox.is_none() {
                e.prox = ProxKind::Inner;
            }
        }
        set(&mut e.prox, c.prox);
        set(&mut cfg.bounds.gamma, c.gamma);
        set(&mut cfg.bounds.p, c.p);

        match &self.command {
            Command::Solve { problem } => {
                if problem.is_some() {
                    cfg.solve.problem = problem.clone();
                }
                if let Some(f) = &c.format {
                    cfg.errors.format = Some(f.clone());
                    if c.gradient.is_none() {
                        cfg.errors.gradient = GradientKind::Quantized;
                    }
                }
            }
            Command::Lasso { n, m, sparsity, noise } => {
                set(&mut cfg.lasso.n, *n);
                set(&mut cfg.lasso.m, *m);
                if sparsity.is_some() {
                    cfg.lasso.sparsity = *sparsity;
                }
                set(&mut cfg.lasso.noise, *noise);
                if let Some(f) = &c.format {
                    cfg.errors.format = Some(f.clone());
                    if c.gradient.is_none() {
                        cfg.errors.gradient = GradientKind::Quantized;
                    }
                }
            }
            Command::Mpc { np, nc, lambda, steps } => {
                set(&mut cfg.mpc.np, *np);
                set(&mut cfg.mpc.nc, *nc);
                set(&mut cfg.mpc.lambda, *lambda);
                set(&mut cfg.mpc.steps, *steps);
                if let Some(f) = &c.format {
                    cfg.errors.format = Some(f.clone());
                    if c.gradient.is_none() {
                        cfg.errors.gradient = GradientKind::Quantized;
                    }
                }
            }
            Command::Bounds { lipschitz, step, dist0, dim, m_u, m_grad } => {
                let b = &mut cfg.bounds;
                b.lipschitz = lipschitz.or(b.lipschitz);
                b.step = step.or(b.step);
                b.dist0 = dist0.or(b.dist0);
                b.dim = dim.or(b.dim);
                b.m_u = m_u.or(b.m_u);
                b.m_grad = m_grad.or(b.m_grad);
            }
            Command::Verify { k_max, control } => {
                let v = &mut cfg.verify;
                set(&mut v.k_max, *k_max);
                set(&mut v.gradient, *control);
                set(&mut v.trials, c.trials);
                set(&mut v.delta, c.delta);
                set(&mut v.eps0, c.eps0);
                if let Some(g) = &c.gamma {
                    v.gammas = vec![*g];
                }
            }
            Command::Quantize { values, rounding } => {
                let q = &mut cfg.quantize;
                if let Some(f) = &c.format {
                    q.format = f.clone();
                }
                if let Some(v) = values {
                    q.values = v.clone();
                }
                set(&mut q.rounding, *rounding);
            }
        }
        validate(&cfg)?;
        Ok(cfg)
    }
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    let bad = |m: &str| Err(CliError::config(m));
    if cfg.iters == 0 {
        return bad("iters must be at least 1");
    }
    if !(cfg.abstol >= 0.0) {
        return bad("abstol must be nonnegative");
    }
    if !(cfg.solver.step_scale > 0.0 && cfg.solver.step_scale.is_finite()) {
        return bad("step_scale must be positive");
    }
    if !(cfg.errors.delta >= 0.0) || !(cfg.errors.eps0 >= 0.0) || !(cfg.errors.solver_tol >= 0.0) {
        return bad("delta, eps0 and solver_tol must be nonnegative");
    }
    if cfg.errors.gradient == GradientKind::Quantized && cfg.errors.format.is_none() {
        return bad("quantized gradients need a format (--format sW.F)");
    }
    if !(cfg.bounds.gamma > 0.0) {
        return bad("gamma must be positive");
    }
    if !(cfg.bounds.p > 0.0 && cfg.bounds.p <= 1.0) {
        return bad("p must lie in (0, 1]");
    }
    Ok(())
}
