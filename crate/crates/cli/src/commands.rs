//! Subcommand pipelines. Each one computes everything in memory, then writes its
//! artifact directory, then reports strict or diagnostic failures.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use inexact_pg_core::bounds::{
    acc_random_closed_series, basic_stationary_series, BoundParams, BoundSweep, SweepRow, ValidityReport,
};
use inexact_pg_core::error_models::{
    Eps2Schedule, ErrorScale, FixedPointFormat, GradientErrorMode, GradientErrorSpec, ProxErrorSpec, Rounding,
};
use inexact_pg_core::experiments::{
    azuma_coverage, gen_lasso, hoeffding_coverage, martingale_increments, martingale_report, mpc_closed_loop,
    mpc_to_lasso, DiagnosticReport, DiagnosticStatus, MpcSpec,
};
use inexact_pg_core::problem::ProblemDoc;
use inexact_pg_core::solver::{reference_solution, run, MomentumRule, Reference, RunStatus, RunTrace, SolverConfig, Variant};
use inexact_pg_core::stepsize::{max_constant_step, StepsizePolicy};
use inexact_pg_core::{CompositeProblem, DVector, QuadraticSmooth, SmoothFn};
use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::{bounds_csv, errors_csv, table_csv, trace_csv, ArtifactDir};
use crate::config::{
    GradientKind, MomentumChoice, ProxKind, RoundingChoice, RunConfig, ScaleChoice, VariantChoice, SCHEMA_VERSION,
};
use crate::error::{CliError, CliResult};

/// What a finished subcommand hands back to `main`.
#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    /// Human-readable report.
    pub text: String,
    /// Set when artifacts were written but the run must still exit nonzero.
    pub failure: Option<CliError>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub variant: Variant,
    pub iterations: usize,
    pub status: RunStatus,
    pub final_f_gap: f64,
    /// Constant step handed to the bounds (smallest step used).
    pub step: f64,
    pub step_premise: bool,
    pub violations: usize,
    pub validity: Vec<ValidityReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Summary<'a, E: Serialize> {
    schema_version: u32,
    command: &'a str,
    seed: u64,
    lipschitz: f64,
    f_star: f64,
    dist0: f64,
    violations: usize,
    runs: Vec<RunSummary>,
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<E>,
}

pub fn rounding(r: RoundingChoice) -> Rounding {
    match r {
        RoundingChoice::Nearest => Rounding::Nearest,
        RoundingChoice::Floor => Rounding::Floor,
    }
}

pub fn parse_format(s: &str, r: RoundingChoice) -> CliResult<FixedPointFormat> {
    Ok(FixedPointFormat::from_str(s).map_err(CliError::config)?.with_rounding(rounding(r)))
}

fn scale(s: ScaleChoice) -> ErrorScale {
    match s {
        ScaleChoice::Absolute => ErrorScale::Absolute,
        ScaleChoice::Relative => ErrorScale::Relative,
    }
}

fn momentum(m: MomentumChoice) -> MomentumRule {
    match m {
        MomentumChoice::FistaExact => MomentumRule::FistaExact,
        MomentumChoice::Linear => MomentumRule::Linear,
        MomentumChoice::Zero => MomentumRule::Zero,
    }
}

pub fn gradient_spec(cfg: &RunConfig) -> CliResult<GradientErrorSpec> {
    let e = &cfg.errors;
    let mode = match e.gradient {
        GradientKind::None => GradientErrorMode::None,
        GradientKind::Random => GradientErrorMode::Random { delta: e.delta },
        GradientKind::Biased => GradientErrorMode::Biased { delta: e.delta },
        GradientKind::Quantized => {
            let f = e.format.as_deref().ok_or_else(|| CliError::config("quantized gradients need a format"))?;
            GradientErrorMode::Quantized { format: parse_format(f, cfg.quantize.rounding)? }
        }
    };
    Ok(GradientErrorSpec { scale: scale(e.scale), mode })
}

pub fn prox_spec(cfg: &RunConfig) -> ProxErrorSpec {
    let e = &cfg.errors;
    match e.prox {
        ProxKind::Exact => ProxErrorSpec::Exact,
        ProxKind::Random => ProxErrorSpec::target_gap(Eps2Schedule::Random { eps0: e.eps0 }),
        ProxKind::Constant => ProxErrorSpec::target_gap(Eps2Schedule::Constant { value: e.eps0 }),
        ProxKind::Inner => ProxErrorSpec::InnerSolver { tol: e.solver_tol, max_iter: e.inner_max_iter },
    }
}

fn variants(v: VariantChoice) -> Vec<Variant> {
    match v {
        VariantChoice::Basic => vec![Variant::Basic],
        VariantChoice::Accelerated => vec![Variant::Accelerated],
        VariantChoice::Both => vec![Variant::Basic, Variant::Accelerated],
    }
}

fn variant_tag(v: Variant) -> &'static str {
    match v {
        Variant::Basic => "basic",
        Variant::Accelerated => "accelerated",
    }
}

/// Solver configuration for one variant; the step is `step_scale` times the largest admissible step.
pub fn solver_config(cfg: &RunConfig, variant: Variant, lipschitz: f64) -> CliResult<SolverConfig> {
    let grad = gradient_spec(cfg)?;
    let relative = match (grad.scale, grad.is_random()) {
        (ErrorScale::Relative, true) => grad.delta(),
        _ => None,
    };
    let s = cfg.solver.step_scale * max_constant_step(lipschitz, relative);
    let stepsize =
        if cfg.solver.backtracking { StepsizePolicy::backtracking(s) } else { StepsizePolicy::Constant { s } };
    let sc = SolverConfig {
        variant,
        stepsize,
        max_iter: cfg.iters,
        abstol: cfg.abstol,
        momentum: momentum(cfg.solver.momentum),
        grad_errors: grad,
        prox_errors: prox_spec(cfg),
        seed: cfg.seed,
    };
    sc.validate()?;
    Ok(sc)
}

/// One solver run with its bound sweep.
#[derive(Debug, Clone)]
pub struct VariantRun {
    pub trace: RunTrace,
    pub sweep: BoundSweep,
    pub validity: Vec<ValidityReport>,
}

pub fn run_variant<G: SmoothFn>(
    problem: &CompositeProblem<G>,
    config: &SolverConfig,
    x0: &DVector<f64>,
    reference: &Reference,
    gamma: f64,
    p: f64,
) -> CliResult<VariantRun> {
    let trace = run(problem, config, x0).map_err(|f| CliError::solver(f))?;
    let mut params = BoundParams::from_trace(problem, config, &trace, reference)?;
    params.gamma = gamma;
    params.p = p;
    let sweep = BoundSweep::evaluate(problem, &trace, reference, &params)?;
    let validity = sweep.validity();
    Ok(VariantRun { trace, sweep, validity })
}

fn summarize(r: &VariantRun) -> RunSummary {
    RunSummary {
        variant: r.trace.variant,
        iterations: r.trace.len(),
        status: r.trace.status,
        final_f_gap: r.sweep.observed.last().copied().unwrap_or(f64::NAN),
        step: r.sweep.params.s,
        step_premise: r.trace.step_premise,
        violations: r.validity.iter().map(|v| v.violations.len()).sum(),
        validity: r.validity.clone(),
        warnings: r.sweep.warnings.clone(),
    }
}

/// Runs the configured variants concurrently on one problem.
fn run_all(
    cfg: &RunConfig,
    problem: &CompositeProblem<QuadraticSmooth>,
    x0: &DVector<f64>,
    reference: &Reference,
) -> CliResult<Vec<VariantRun>> {
    variants(cfg.solver.variant)
        .into_par_iter()
        .map(|v| {
            let sc = solver_config(cfg, v, problem.lipschitz())?;
            run_variant(problem, &sc, x0, reference, cfg.bounds.gamma, cfg.bounds.p)
        })
        .collect()
}

fn write_runs(dir: &ArtifactDir, cfg: &RunConfig, reference: &Reference, runs: &[VariantRun]) -> CliResult<()> {
    for r in runs {
        let tag = variant_tag(r.trace.variant);
        if cfg.trace_csv {
            dir.write(&format!("trace_{tag}.csv"), &trace_csv(&r.trace, reference.f))?;
            dir.write(&format!("errors_{tag}.csv"), &errors_csv(&r.trace))?;
        }
        if cfg.bounds_csv {
            dir.write(&format!("bounds_{tag}.csv"), &bounds_csv(&r.sweep.rows()))?;
        }
    }
    Ok(())
}

fn run_text(runs: &[RunSummary]) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{:<12} {:>6} {:>15} {:>13} {:>8} {:>10}", "variant", "iters", "status", "f_gap", "premise", "violations");
    for r in runs {
        let _ = writeln!(
            t,
            "{:<12} {:>6} {:>15} {:>13.6e} {:>8} {:>10}",
            variant_tag(r.variant),
            r.iterations,
            format!("{:?}", r.status),
            r.final_f_gap,
            r.step_premise,
            r.violations
        );
        for w in &r.warnings {
            let _ = writeln!(t, "  warning: {w}");
        }
    }
    t
}

/// Shared tail of solve / lasso / mpc.
fn finish_solve_like<E: Serialize>(
    cfg: &RunConfig,
    problem: &CompositeProblem<QuadraticSmooth>,
    x0: &DVector<f64>,
    reference: &Reference,
    runs: Vec<VariantRun>,
    notes: Vec<String>,
    extra: Option<E>,
    extra_files: Vec<(String, Vec<u8>)>,
) -> CliResult<Outcome> {
    let root = cfg.out_dir();
    let dir = ArtifactDir::create(&root)?;
    write_runs(&dir, cfg, reference, &runs)?;
    for (name, bytes) in &extra_files {
        dir.write(name, bytes)?;
    }
    let summaries: Vec<RunSummary> = runs.iter().map(summarize).collect();
    let violations = summaries.iter().map(|s| s.violations).sum();
    let mut text = run_text(&summaries);
    for n in &notes {
        let _ = writeln!(text, "note: {n}");
    }
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        command: cfg.command.as_deref().unwrap_or(""),
        seed: cfg.seed,
        lipschitz: problem.lipschitz(),
        f_star: reference.f,
        dist0: (&reference.x - x0).norm(),
        violations,
        runs: summaries,
        notes,
        extra,
    };
    dir.write_json("summary.json", &summary)?;
    dir.write("config.toml", cfg.to_toml().as_bytes())?;
    let failure = (cfg.strict && violations > 0).then_some(CliError::Strict(violations));
    Ok(Outcome { dir: root, text, failure })
}

fn premise_notes(runs: &[VariantRun]) -> Vec<String> {
    runs.iter()
        .filter(|r| !r.trace.step_premise)
        .map(|r| {
            format!(
                "{} run used a step above the admissible 1/L bound; the theorem bounds do not apply",
                variant_tag(r.trace.variant)
            )
        })
        .collect()
}

pub fn cmd_solve(cfg: &RunConfig) -> CliResult<Outcome> {
    let problem = match &cfg.solve.problem {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            let doc: ProblemDoc = serde_json::from_str(&text).map_err(CliError::config)?;
            doc.into_problem()?
        }
        None => {
            let n = cfg.solve.n;
            gen_lasso(n, cfg.solve.m, (n / 10).max(1), cfg.lasso.noise, cfg.seed).problem()?
        }
    };
    let x0 = DVector::zeros(problem.dim());
    let reference = reference_solution(&problem, &x0)?;
    let runs = run_all(cfg, &problem, &x0, &reference)?;
    let notes = premise_notes(&runs);
    finish_solve_like::<()>(cfg, &problem, &x0, &reference, runs, notes, None, Vec::new())
}

#[derive(Debug, Serialize)]
struct LassoExtra {
    n: usize,
    m: usize,
    sparsity: usize,
    lambda: f64,
}

pub fn cmd_lasso(cfg: &RunConfig) -> CliResult<Outcome> {
    let l = &cfg.lasso;
    if l.n == 0 || l.m == 0 {
        return Err(CliError::config("n and m must be positive"));
    }
    let sparsity = l.sparsity.unwrap_or((l.n / 10).max(1));
    let inst = gen_lasso(l.n, l.m, sparsity, l.noise, cfg.seed);
    let lambda = inst.lambda / inexact_pg_core::experiments::lasso::DEFAULT_LAMBDA_RATIO * l.lambda_ratio;
    let problem = inst.with_lambda(lambda).problem()?;
    let x0 = DVector::zeros(problem.dim());
    let reference = reference_solution(&problem, &x0)?;
    let runs = run_all(cfg, &problem, &x0, &reference)?;
    let notes = premise_notes(&runs);
    let extra = LassoExtra { n: l.n, m: l.m, sparsity, lambda };
    finish_solve_like(cfg, &problem, &x0, &reference, runs, notes, Some(extra), Vec::new())
}

#[derive(Debug, Serialize)]
struct MpcExtra {
    np: usize,
    nc: usize,
    lambda: f64,
    hessian_dim: usize,
    offset: f64,
    closed_loop_steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_state_norm: Option<f64>,
}

pub fn cmd_mpc(cfg: &RunConfig) -> CliResult<Outcome> {
    let m = &cfg.mpc;
    let mut spec = MpcSpec::spacecraft(m.np, m.nc, DVector::from_vec(m.x0.clone()));
    spec.lambda = m.lambda;
    let condensed = mpc_to_lasso(&spec)?;
    let problem = &condensed.problem;
    let x0 = DVector::zeros(problem.dim());
    let reference = reference_solution(problem, &x0)?;
    let runs = run_all(cfg, problem, &x0, &reference)?;
    let mut notes = premise_notes(&runs);
    notes.push(format!(
        "Q and R are per-step diagonal weights tiled over N_p = {} and N_c = {}",
        m.np, m.nc
    ));
    let mut extra_files = Vec::new();
    let mut final_state_norm = None;
    if m.steps > 0 {
        let v = if cfg.solver.variant == VariantChoice::Basic { Variant::Basic } else { Variant::Accelerated };
        let sc = solver_config(cfg, v, problem.lipschitz())?;
        let report = mpc_closed_loop(&spec, &sc, m.steps).map_err(|f| CliError::solver(f))?;
        let rows: Vec<Vec<f64>> = (0..report.controls.len())
            .map(|t| {
                vec![
                    t as f64,
                    report.state_norms[t],
                    report.controls[t].norm(),
                    report.traces[t].len() as f64,
                    report.state_norms[t + 1],
                ]
            })
            .collect();
        extra_files.push((
            "closed_loop.csv".to_string(),
            table_csv(&["step", "state_norm", "u_norm", "iterations", "next_state_norm"], &rows),
        ));
        final_state_norm = report.state_norms.last().copied();
    }
    let extra = MpcExtra {
        np: m.np,
        nc: m.nc,
        lambda: m.lambda,
        hessian_dim: condensed.hessian.nrows(),
        offset: condensed.offset,
        closed_loop_steps: m.steps,
        final_state_norm,
    };
    finish_solve_like(cfg, problem, &x0, &reference, runs, notes, Some(extra), extra_files)
}

#[derive(Debug, Serialize)]
struct BoundsSummary<'a> {
    schema_version: u32,
    command: &'a str,
    params: &'a BoundParams,
    series: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_thm_basic_stat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_thm_acc_rand: Option<f64>,
}

/// Bounds that need no realized errors: the stationary basic bound and the closed accelerated one.
pub fn cmd_bounds(cfg: &RunConfig) -> CliResult<Outcome> {
    let b = &cfg.bounds;
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::config(format!("bounds needs --{name}")));
    let l = need(b.lipschitz, "lipschitz")?;
    let dist0 = need(b.dist0, "dist0")?;
    let n = b.dim.ok_or_else(|| CliError::config("bounds needs --dim"))?;
    let grad = gradient_spec(cfg)?;
    let prox = prox_spec(cfg);
    let s = b.step.unwrap_or(1.0 / l);
    let mut params = BoundParams::basic(s, l, n, dist0);
    params.delta = grad.delta().unwrap_or(0.0);
    params.eps0 = prox.eps0();
    params.mean_eps2 = prox.stationary_mean();
    params.gamma = b.gamma;
    params.p = b.p;
    params.m_u = b.m_u;
    params.momentum = momentum(cfg.solver.momentum);
    params.m_grad = match (grad.scale, b.m_grad) {
        (ErrorScale::Absolute, _) => 1.0,
        (ErrorScale::Relative, Some(m)) => m,
        (ErrorScale::Relative, None) => return Err(CliError::config("relative errors need --m-grad")),
    };
    params.validate()?;
    let k = cfg.iters;
    let stat = match params.mean_eps2 {
        Some(_) => Some(basic_stationary_series(&params, k)?),
        None => None,
    };
    let acc = match params.m_u {
        Some(_) => Some(acc_random_closed_series(&params, k)?),
        None => None,
    };
    if stat.is_none() && acc.is_none() {
        return Err(CliError::config(
            "no a-priori bound applies: use a stationary prox model (--prox random|constant|exact) or give --m-u",
        ));
    }
    let rows: Vec<SweepRow> = (0..k)
        .map(|i| SweepRow {
            iter: i + 1,
            f_gap: f64::NAN,
            thm_basic_stat: stat.as_ref().map(|v| v[i].0),
            p_basic_stat: stat.as_ref().map(|v| v[i].1),
            thm_acc_rand: acc.as_ref().map(|v| v[i].0),
            p_acc_rand: acc.as_ref().map(|v| v[i].1),
            ..SweepRow::default()
        })
        .collect();
    let root = cfg.out_dir();
    let dir = ArtifactDir::create(&root)?;
    if cfg.bounds_csv {
        dir.write("bounds.csv", &bounds_csv(&rows))?;
    }
    let mut series = Vec::new();
    let mut text = String::new();
    if let Some(v) = &stat {
        series.push("thm_basic_stat");
        let _ = writeln!(text, "thm_basic_stat at K={k}: {:.6e} (probability {:.6})", v[k - 1].0, v[k - 1].1);
    }
    if let Some(v) = &acc {
        series.push("thm_acc_rand");
        let _ = writeln!(text, "thm_acc_rand   at K={k}: {:.6e} (probability {:.6})", v[k - 1].0, v[k - 1].1);
    }
    let summary = BoundsSummary {
        schema_version: SCHEMA_VERSION,
        command: "bounds",
        params: &params,
        series,
        final_thm_basic_stat: stat.as_ref().map(|v| v[k - 1].0),
        final_thm_acc_rand: acc.as_ref().map(|v| v[k - 1].0),
    };
    dir.write_json("summary.json", &summary)?;
    dir.write("config.toml", cfg.to_toml().as_bytes())?;
    Ok(Outcome { dir: root, text, failure: None })
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    schema_version: u32,
    command: &'static str,
    pass: bool,
    reports: Vec<DiagnosticReport>,
}

fn report_text(reports: &[DiagnosticReport]) -> String {
    let mut t = String::new();
    for r in reports {
        let _ = writeln!(t, "{} ({} trials): {:?}", r.test, r.trials, r.status);
        for row in &r.rows {
            let _ = writeln!(
                t,
                "  {:<28} {:>12.5e} {:>12.5e}  {}",
                row.label,
                row.value,
                row.threshold,
                if row.pass { "ok" } else { "FAIL" }
            );
        }
    }
    t
}

/// Runs the martingale check for both variants plus the Azuma and Hoeffding coverage checks.
pub fn verify_reports(cfg: &RunConfig) -> CliResult<Vec<DiagnosticReport>> {
    let v = &cfg.verify;
    let mode = match v.gradient {
        GradientKind::None => GradientErrorMode::None,
        GradientKind::Random => GradientErrorMode::Random { delta: v.delta },
        GradientKind::Biased => GradientErrorMode::Biased { delta: v.delta },
        GradientKind::Quantized => return Err(CliError::config("verify supports none, random or biased gradients")),
    };
    let inst = gen_lasso(v.n, v.m, (v.n / 10).max(1), cfg.lasso.noise, cfg.seed);
    let problem = inst.problem()?;
    let reference = reference_solution(&problem, &DVector::zeros(problem.dim()))?;
    let x0 = reference.x.add_scalar(v.start_offset);
    let mut reports = Vec::new();
    for variant in [Variant::Basic, Variant::Accelerated] {
        let sc = SolverConfig {
            variant,
            stepsize: StepsizePolicy::Constant { s: 1.0 / problem.lipschitz() },
            max_iter: v.k_max,
            abstol: 0.0,
            momentum: MomentumRule::FistaExact,
            grad_errors: GradientErrorSpec { scale: ErrorScale::Absolute, mode: mode.clone() },
            prox_errors: ProxErrorSpec::target_gap(Eps2Schedule::Random { eps0: v.eps0 }),
            seed: cfg.seed,
        };
        sc.validate()?;
        let inc = (0..v.trials)
            .into_par_iter()
            .map(|t| martingale_increments(&problem, &sc, &x0, &reference, v.k_max, cfg.seed, t))
            .collect::<Result<Vec<_>, _>>()?;
        reports.push(martingale_report(&format!("martingale-{}", variant_tag(variant)), &inc));
    }
    let c: Vec<f64> = (0..100).map(|i| 1.0 / ((i + 1) as f64).sqrt()).collect();
    reports.push(azuma_coverage(&c, &v.gammas, v.coverage_trials, cfg.seed)?);
    reports.push(hoeffding_coverage(0.0, v.eps0, 100, &v.gammas, v.coverage_trials, cfg.seed)?);
    Ok(reports)
}

pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let reports = verify_reports(cfg)?;
    let pass = reports.iter().all(|r| r.status == DiagnosticStatus::Pass);
    let text = report_text(&reports);
    let root = cfg.out_dir();
    let dir = ArtifactDir::create(&root)?;
    dir.write("report.txt", text.as_bytes())?;
    dir.write_json("summary.json", &VerifySummary { schema_version: SCHEMA_VERSION, command: "verify", pass, reports: reports.clone() })?;
    dir.write("config.toml", cfg.to_toml().as_bytes())?;
    let failure = if pass {
        None
    } else {
        let bad: Vec<String> = reports
            .iter()
            .filter(|r| r.status != DiagnosticStatus::Pass)
            .map(|r| format!("{} {:?}", r.test, r.status).to_lowercase())
            .collect();
        Some(CliError::Diagnostic(bad.join(", ")))
    };
    Ok(Outcome { dir: root, text, failure })
}

#[derive(Debug, Serialize)]
struct QuantizeSummary {
    schema_version: u32,
    command: &'static str,
    format: String,
    width: u32,
    frac: u32,
    int_bits: u32,
    signed: bool,
    range: (f64, f64),
    ulp: f64,
    values: Vec<(f64, f64)>,
}

pub fn cmd_quantize(cfg: &RunConfig) -> CliResult<Outcome> {
    let q = &cfg.quantize;
    let f = parse_format(&q.format, q.rounding)?;
    let (lo, hi) = f.dynamic_range();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "format {f}: W={} F={} I={} {}",
        f.width(),
        f.frac(),
        f.int_bits(),
        if f.signed() { "signed" } else { "unsigned" }
    );
    let _ = writeln!(text, "DR [{lo}, {hi}]  ulp 2^-{} = {}", f.frac(), f.ulp());
    let _ = writeln!(text, "{:>16} {:>16} {:>14}", "input", "quantized", "error");
    let values: Vec<(f64, f64)> = q.values.iter().map(|&x| (x, f.quantize(x))).collect();
    for (x, y) in &values {
        let _ = writeln!(text, "{x:>16} {y:>16} {:>14.6e}", y - x);
    }
    let root = cfg.out_dir();
    let dir = ArtifactDir::create(&root)?;
    dir.write("report.txt", text.as_bytes())?;
    dir.write_json(
        "summary.json",
        &QuantizeSummary {
            schema_version: SCHEMA_VERSION,
            command: "quantize",
            format: f.to_string(),
            width: f.width(),
            frac: f.frac(),
            int_bits: f.int_bits(),
            signed: f.signed(),
            range: (lo, hi),
            ulp: f.ulp(),
            values,
        },
    )?;
    dir.write("config.toml", cfg.to_toml().as_bytes())?;
    Ok(Outcome { dir: root, text, failure: None })
}

pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command.as_deref() {
        Some("solve") => cmd_solve(cfg),
        Some("lasso") => cmd_lasso(cfg),
        Some("mpc") => cmd_mpc(cfg),
        Some("bounds") => cmd_bounds(cfg),
        Some("verify") => cmd_verify(cfg),
        Some("quantize") => cmd_quantize(cfg),
        other => Err(CliError::config(format!("unknown command {other:?}"))),
    }
}
