use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::run::{CoherenceRow, CurvePoint, ExperimentReport, MSE_DEFINITION};
use crate::recovery::Method;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "method,pilot_mode,snr_db,mse,ber,trials,failures";
pub const COHERENCE_HEADER: &str = "iteration,random_search_best,cds_value";

/// CSV text for `points`. Reals use the shortest decimal form that parses
/// back to the same double.
pub fn format_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.method, p.pilot_mode, p.snr_db, p.mse, p.ber, p.trials, p.failures
        )
        .unwrap();
    }
    out
}

pub fn write_csv(points: &[CurvePoint], path: &Path) -> Result<()> {
    std::fs::write(path, format_csv(points)).map_err(|e| Error::io(path, e))
}

/// Inverse of [`format_csv`]. Singular-event counts are not in the CSV and
/// come back as zero.
pub fn parse_csv(text: &str) -> Result<Vec<CurvePoint>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected header {other:?}"))),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", i + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad("field count"));
            }
            let real = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what));
            let int = |s: &str, what: &str| s.parse::<usize>().map_err(|_| bad(what));
            Ok(CurvePoint {
                method: f[0].parse::<Method>()?,
                pilot_mode: f[1].to_string(),
                snr_db: real(f[2], "snr_db")?,
                mse: real(f[3], "mse")?,
                ber: real(f[4], "ber")?,
                trials: int(f[5], "trials")?,
                failures: int(f[6], "failures")?,
                equalization_singular_events: 0,
            })
        })
        .collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<CurvePoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

pub fn format_coherence_csv(rows: &[CoherenceRow]) -> String {
    let mut out = String::from(COHERENCE_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{}", r.iteration, r.random_search_best, r.cds_value).unwrap();
    }
    out
}

pub fn write_coherence_csv(rows: &[CoherenceRow], path: &Path) -> Result<()> {
    std::fs::write(path, format_coherence_csv(rows)).map_err(|e| Error::io(path, e))
}

/// `results.csv` -> `results.csv.meta.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

#[derive(Debug, Serialize)]
struct SingularCount<'a> {
    method: &'a str,
    snr_db: f64,
    equalization_singular_events: usize,
}

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    config_sha256: String,
    master_seed: u64,
    trials_per_point: usize,
    pilot_mode: &'static str,
    pilot_pattern: Option<&'a [usize]>,
    mse_definition: &'static str,
    failure_warning: bool,
    warnings: &'a [String],
    wall_time_seconds: f64,
    singular_events: Vec<SingularCount<'a>>,
    config: &'a ExperimentConfig,
}

pub fn metadata_json(cfg: &ExperimentConfig, report: &ExperimentReport) -> String {
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: cfg.hash(),
        master_seed: cfg.master_seed,
        trials_per_point: cfg.trials_per_point,
        pilot_mode: cfg.pilots.mode.name(),
        pilot_pattern: report.pattern.as_ref().map(|p| p.indices()),
        mse_definition: MSE_DEFINITION,
        failure_warning: !report.warnings.is_empty(),
        warnings: &report.warnings,
        wall_time_seconds: report.wall_time_seconds,
        singular_events: report
            .points
            .iter()
            .map(|p| SingularCount {
                method: p.method.name(),
                snr_db: p.snr_db,
                equalization_singular_events: p.equalization_singular_events,
            })
            .collect(),
        config: cfg,
    };
    serde_json::to_string_pretty(&meta).expect("metadata serializes")
}

/// Writes the CSV and its metadata sidecar. Returns the sidecar path.
pub fn write_report(cfg: &ExperimentConfig, report: &ExperimentReport, csv_path: &Path) -> Result<PathBuf> {
    write_csv(&report.points, csv_path)?;
    let meta_path = sidecar_path(csv_path);
    std::fs::write(&meta_path, metadata_json(cfg, report)).map_err(|e| Error::io(&meta_path, e))?;
    Ok(meta_path)
}
