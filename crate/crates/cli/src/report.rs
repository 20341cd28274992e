//! The `report` subcommand: a summary of a run directory.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use alchemq::oracle::{SCAN_HEADER, SCAN_SCHEMA};
use alchemq::vqe::IterationRecord;

use crate::commands::{write, RunReport, REPORT_FILE, REPORT_SCHEMA, SCAN_FILE, TRACE_FILE, TRACE_SCHEMA};
use crate::error::{CliError, Result};

pub const SUMMARY_SCHEMA: &str = "alchemq.summary.v1";
pub const SUMMARY_FILE: &str = "summary.txt";

/// Scan ΔE values within this distance of the minimum count as tied.
pub const AGREEMENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    NotAvailable,
}

impl std::fmt::Display for Agreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "true",
            Agreement::Disagree => "false",
            Agreement::NotAvailable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanBest {
    pub labels: Vec<String>,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub report: RunReport,
    pub trace_records: usize,
    pub skipped_lines: usize,
    pub scan: Option<ScanBest>,
    pub agreement: Agreement,
    /// Artifacts that were missing or unreadable.
    pub issues: Vec<String>,
    pub text: String,
}

fn read_trace(path: &Path) -> std::io::Result<(Vec<IterationRecord>, usize)> {
    let text = fs::read_to_string(path)?;
    let mut records = Vec::new();
    let mut skipped = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if i == 0 {
            let schema = serde_json::from_str::<serde_json::Value>(line)
                .ok()
                .and_then(|v| v.get("schema").and_then(|s| s.as_str()).map(str::to_owned));
            if schema.as_deref() == Some(TRACE_SCHEMA) {
                continue;
            }
        }
        match serde_json::from_str::<IterationRecord>(line) {
            Ok(r) => records.push(r),
            Err(_) => skipped += 1,
        }
    }
    Ok((records, skipped))
}

/// Lowest-ΔE compositions of a scan CSV.
pub fn read_scan(path: &Path) -> Result<ScanBest> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |message: String| CliError::Artifact {
        path: path.to_path_buf(),
        message,
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next() != Some(&format!("# schema: {SCAN_SCHEMA}")) {
        return Err(bad("missing scan schema line".into()));
    }
    if lines.next() != Some(SCAN_HEADER) {
        return Err(bad("unexpected scan header".into()));
    }
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.starts_with('#')) {
        let fields: Vec<&str> = line.split(',').collect();
        let delta = fields
            .get(3)
            .and_then(|d| d.parse::<f64>().ok())
            .ok_or_else(|| bad(format!("bad row `{line}`")))?;
        if delta.is_finite() {
            rows.push((fields[0].to_string(), delta));
        }
    }
    let min = rows
        .iter()
        .map(|r| r.1)
        .min_by(f64::total_cmp)
        .ok_or_else(|| bad("no evaluated rows".into()))?;
    Ok(ScanBest {
        labels: rows
            .into_iter()
            .filter(|r| r.1 - min <= AGREEMENT_TOLERANCE)
            .map(|r| r.0)
            .collect(),
        delta: min,
    })
}

fn format_alpha(species: &[String], alpha: &[f64]) -> String {
    species
        .iter()
        .zip(alpha)
        .map(|(s, a)| format!("{s} {a:.4}"))
        .collect::<Vec<_>>()
        .join("  ")
}

fn render(s: &Summary) -> String {
    let r = &s.report;
    let mut t = format!("# schema: {SUMMARY_SCHEMA}\n");
    let _ = writeln!(t, "sites: {}  qubits: {}  parameters: {}", r.species.len(), r.qubits, r.parameters);
    for (i, species) in r.species.iter().enumerate() {
        let _ = writeln!(t, "site {i} initial: {}", format_alpha(species, &r.alpha_initial[i]));
        let _ = writeln!(t, "site {i} final:   {}", format_alpha(species, &r.alpha_opt[i]));
    }
    let _ = writeln!(t, "argmax: {}", r.argmax);
    for c in &r.candidates {
        let _ = writeln!(t, "candidate: {} weight {:.4}", c.label, c.weight);
    }
    let _ = writeln!(t, "deltaE_hartree: {:.10}", r.delta_e);
    let _ = writeln!(t, "E_vac_hartree: {:.10}  E_charged_hartree: {:.10}", r.e_vac, r.e_charged);
    let _ = writeln!(t, "converged: {}  iterations: {}", r.converged, r.iterations);
    if let Some(scan) = &s.scan {
        let _ = writeln!(t, "scan argmin: {} deltaE {:.10}", scan.labels.join(" "), scan.delta);
    }
    let _ = writeln!(t, "agreement: {}", s.agreement);
    if s.skipped_lines > 0 {
        let _ = writeln!(t, "warning: skipped {} malformed trace lines", s.skipped_lines);
    }
    for issue in &s.issues {
        let _ = writeln!(t, "warning: {issue}");
    }
    t
}

/// Summarize `dir`, comparing the selected composition with `scan.csv`
/// when present. Writes `summary.txt` into `dir`.
pub fn cmd_report(dir: &Path) -> Result<Summary> {
    let report_path = dir.join(REPORT_FILE);
    if !report_path.exists() {
        return Err(CliError::Missing { path: report_path });
    }
    let text = fs::read_to_string(&report_path).map_err(|e| CliError::io(&report_path, e))?;
    let report: RunReport = serde_json::from_str(&text).map_err(|e| CliError::Artifact {
        path: report_path.clone(),
        message: e.to_string(),
    })?;
    if report.schema != REPORT_SCHEMA {
        return Err(CliError::Artifact {
            path: report_path,
            message: format!("unsupported schema `{}`", report.schema),
        });
    }
    let mut issues = Vec::new();
    let (trace_records, skipped_lines) = match read_trace(&dir.join(TRACE_FILE)) {
        Ok((records, skipped)) => (records.len(), skipped),
        Err(e) => {
            issues.push(format!("{TRACE_FILE}: {e}"));
            (0, 0)
        }
    };
    let scan_path = dir.join(SCAN_FILE);
    let scan = if scan_path.exists() {
        match read_scan(&scan_path) {
            Ok(s) => Some(s),
            Err(e) => {
                issues.push(e.to_string());
                None
            }
        }
    } else {
        None
    };
    let agreement = match &scan {
        None => Agreement::NotAvailable,
        Some(best) => {
            let top = report.candidates.first().map(|c| &c.label);
            if best.labels.contains(&report.argmax) && top.is_some_and(|t| best.labels.contains(t)) {
                Agreement::Agree
            } else {
                Agreement::Disagree
            }
        }
    };
    let mut summary = Summary {
        report,
        trace_records,
        skipped_lines,
        scan,
        agreement,
        issues,
        text: String::new(),
    };
    summary.text = render(&summary);
    write(&dir.join(SUMMARY_FILE), &summary.text)?;
    Ok(summary)
}
