//! Sweeps of checks over families and sizes, with CSV/JSON artifacts.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::checks::{evaluate, CheckResult, CheckSpec, Verdict};
use crate::error::{Error, Result};
use crate::family::FamilyKind;

pub const CSV_HEADER: [&str; 8] = ["family", "n", "check_id", "lhs", "rhs", "ratio", "verdict", "elapsed_s"];

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub family: String,
    pub n: usize,
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    /// Wall time of the check; `None` unless timing was requested, so that
    /// artifacts are reproducible byte for byte.
    pub elapsed_s: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub families: Vec<FamilyKind>,
    pub sizes: Vec<usize>,
    pub checks: Vec<CheckSpec>,
    pub seed: u64,
    pub jobs: usize,
    pub timing: bool,
}

impl ScanConfig {
    pub fn new(families: Vec<FamilyKind>, sizes: Vec<usize>, checks: Vec<CheckSpec>, seed: u64) -> Self {
        ScanConfig {
            families,
            sizes,
            checks,
            seed,
            jobs: 1,
            timing: false,
        }
    }
}

/// Every `(family, n, check)` cell, in input order of families, then sizes,
/// then checks. Random families are reseeded from `seed`.
pub fn run_scan(families: &[FamilyKind], sizes: &[usize], check_ids: &[&str], seed: u64) -> Result<Vec<ScanRow>> {
    let checks = check_ids.iter().map(|c| c.parse()).collect::<Result<Vec<CheckSpec>>>()?;
    run_scan_with(&ScanConfig::new(families.to_vec(), sizes.to_vec(), checks, seed))
}

pub fn run_scan_with(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let cells: Vec<(&FamilyKind, usize)> = cfg
        .families
        .iter()
        .flat_map(|f| cfg.sizes.iter().map(move |&n| (f, n)))
        .collect();
    let run = || -> Vec<Vec<ScanRow>> { cells.par_iter().map(|&(f, n)| scan_cell(cfg, f, n)).collect() };
    let rows = if cfg.jobs <= 1 {
        cells.iter().map(|&(f, n)| scan_cell(cfg, f, n)).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?
            .install(run)
    };
    Ok(rows.into_iter().flatten().collect())
}

fn scan_cell(cfg: &ScanConfig, family: &FamilyKind, n: usize) -> Vec<ScanRow> {
    let label = family.to_string();
    let row = |check: &CheckSpec, lhs, rhs, ratio, verdict, elapsed_s| ScanRow {
        family: label.clone(),
        n,
        check_id: check.to_string(),
        lhs,
        rhs,
        ratio,
        verdict,
        elapsed_s,
    };
    let set = family.reseeded(cfg.seed).generate(n);
    cfg.checks
        .iter()
        .map(|check| {
            let set = match &set {
                Ok(s) => s,
                Err(e) => {
                    let v = Verdict::Skipped(format!("generate: {e}"));
                    return row(check, f64::NAN, f64::NAN, f64::NAN, v, None);
                }
            };
            let start = Instant::now();
            let res = evaluate(check, set, None);
            let elapsed = cfg.timing.then(|| start.elapsed().as_secs_f64());
            match res {
                Ok(r) => row(check, r.lhs, r.rhs, r.ratio, r.verdict, elapsed),
                Err(e) => row(check, f64::NAN, f64::NAN, f64::NAN, Verdict::Skipped(e.to_string()), elapsed),
            }
        })
        .collect()
}

/// Shortest decimal for moderate magnitudes, scientific notation otherwise; empty for NaN.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn rows_to_csv(rows: &[ScanRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.clone(),
            r.n.to_string(),
            r.check_id.clone(),
            format_float(r.lhs),
            format_float(r.rhs),
            format_float(r.ratio),
            r.verdict.to_string(),
            r.elapsed_s.map(format_float).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Check results as CSV: `check_id,inputs_desc,lhs,rhs,ratio,verdict`.
pub fn results_to_csv(results: &[CheckResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "inputs_desc", "lhs", "rhs", "ratio", "verdict"])?;
    for r in results {
        w.write_record([
            r.check_id.clone(),
            r.inputs_desc.clone(),
            format_float(r.lhs),
            format_float(r.rhs),
            format_float(r.ratio),
            r.verdict.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_to_json(rows: &[ScanRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

/// Writes via a sibling temporary file and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Plain-text table of rows, one per line.
pub fn rows_to_text(rows: &[ScanRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(
            s,
            "{:<24} {:>6} {:<28} lhs={} rhs={} ratio={} {}",
            r.family,
            r.n,
            r.check_id,
            format_float(r.lhs),
            format_float(r.rhs),
            format_float(r.ratio),
            r.verdict
        );
    }
    s
}
