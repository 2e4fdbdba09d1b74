//! Artifact files. Every file is rendered in memory and then written to a
//! temporary sibling that is renamed into place, so a failed run never leaves
//! a half-written artifact behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use inexact_pg_core::bounds::SweepRow;
use inexact_pg_core::solver::RunTrace;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TRACE_HEADER: [&str; 8] = ["iter", "f", "f_gap", "step", "eps1_norm", "eps2", "res_norm", "x_change"];
pub const ERRORS_HEADER: [&str; 4] = ["iter", "eps1_norm", "eps2", "res_norm"];
pub const BOUNDS_HEADER: [&str; 16] = [
    "iter",
    "f_gap",
    "thm_basic_det",
    "cor_basic_det",
    "thm_basic_rand",
    "thm_basic_stat",
    "thm_acc_det",
    "cor_acc_det",
    "thm_acc_rand",
    "schmidt_basic",
    "schmidt_acc",
    "p_basic_rand",
    "p_basic_stat",
    "p_acc_rand",
    "impr_basic",
    "impr_acc",
];

pub struct ArtifactDir {
    root: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

impl ArtifactDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(io_err(root))?;
        Ok(ArtifactDir { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let dest = self.path(name);
        let tmp = self.root.join(format!(".{name}.tmp"));
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
        drop(f);
        fs::rename(&tmp, &dest).map_err(io_err(&dest))?;
        Ok(dest)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn render(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// One row per iteration; `iter` counts iterates, so row `t` describes `x^t`.
pub fn trace_csv(trace: &RunTrace, f_star: f64) -> Vec<u8> {
    render(
        &TRACE_HEADER,
        trace.records.iter().map(|r| {
            vec![
                (r.k + 1).to_string(),
                num(r.f_next),
                num(r.f_next - f_star),
                num(r.step),
                num(r.eps1.norm()),
                num(r.eps2),
                num(r.residual.norm()),
                num(r.step_norm),
            ]
        }),
    )
}

/// Indexed by iteration `k`: `ε₁^k`, `ε₂^k` and `r^{k+1}`.
pub fn errors_csv(trace: &RunTrace) -> Vec<u8> {
    render(
        &ERRORS_HEADER,
        trace
            .records
            .iter()
            .map(|r| vec![r.k.to_string(), num(r.eps1.norm()), num(r.eps2), num(r.residual.norm())]),
    )
}

pub fn bounds_csv(rows: &[SweepRow]) -> Vec<u8> {
    render(
        &BOUNDS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.iter.to_string(),
                if r.f_gap.is_nan() { String::new() } else { num(r.f_gap) },
                opt(r.thm_basic_det),
                opt(r.cor_basic_det),
                opt(r.thm_basic_rand),
                opt(r.thm_basic_stat),
                opt(r.thm_acc_det),
                opt(r.cor_acc_det),
                opt(r.thm_acc_rand),
                opt(r.schmidt_basic),
                opt(r.schmidt_acc),
                opt(r.p_basic_rand),
                opt(r.p_basic_stat),
                opt(r.p_acc_rand),
                opt(r.impr_basic),
                opt(r.impr_acc),
            ]
        }),
    )
}

/// Generic numeric table with a fixed header.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> Vec<u8> {
    render(header, rows.iter().map(|r| r.iter().map(|v| num(*v)).collect()))
}
