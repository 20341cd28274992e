use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use alchemq::integrals::TensorArchive;
use alchemq_cli::config::SHOT_THETA_STEP;
use alchemq_cli::{cmd_integrals, cmd_report, cmd_run, cmd_scan, Agreement, CliError, Overrides, RunConfig};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .unwrap()
}

/// A quick configuration: two active orbitals, one entangling layer.
fn small_config(dir: &Path, charges: Option<&str>, extra: &str) -> PathBuf {
    let f = fixtures();
    let charges = charges
        .map(|c| format!("charges = {:?}\n", f.join(c)))
        .unwrap_or_default();
    let text = format!(
        "scaffold = {:?}\n{charges}active_orbitals = 2\ndepth = 1\nentangler = \"linear\"\n{extra}\n[optimizer]\nmax_iterations = 15\n",
        f.join("dimer_hlina.xyz")
    );
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn load(path: &Path) -> RunConfig {
    RunConfig::load(path, Overrides::default()).unwrap()
}

#[test]
fn config_paths_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "scaffold = \"s.xyz\"\ncharges = \"q.txt\"\n").unwrap();
    let c = RunConfig::load(&dir.path().join("run.toml"), Overrides { seed: Some(9), shots: Some(64) }).unwrap();
    assert_eq!(c.scaffold, dir.path().join("s.xyz"));
    assert_eq!(c.charges, Some(dir.path().join("q.txt")));
    assert_eq!(c.optimizer.seed, 9);
    assert_eq!(c.optimizer.shots, 64);
    assert_eq!(c.optimizer.theta_step, SHOT_THETA_STEP);
    assert_eq!((c.active_orbitals, c.depth, c.optimizer.scale), (3, 6, 1e3));

    fs::write(
        dir.path().join("run.toml"),
        "scaffold = \"s.xyz\"\n[optimizer]\nshots = 10\ntheta_step = 0.02\n",
    )
    .unwrap();
    assert_eq!(load(&dir.path().join("run.toml")).optimizer.theta_step, 0.02);

    fs::write(dir.path().join("run.toml"), "scaffold = \"s.xyz\"\ncolour = 3\n").unwrap();
    let err = RunConfig::load(&dir.path().join("run.toml"), Overrides::default()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn integral_archive_shapes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = load(&small_config(dir.path(), Some("case2.charges"), ""));
    let out = dir.path().join("ints");
    let summary = cmd_integrals(&config, &out).unwrap();
    assert_eq!((summary.basis_size, summary.rank), (30, 30));
    let first = fs::read(&summary.path).unwrap();
    let archive = TensorArchive::from_bytes(&first).unwrap();
    assert_eq!(archive.get("S").unwrap().dims, vec![30, 30]);
    assert_eq!(archive.get("T").unwrap().dims, vec![30, 30]);
    assert_eq!(archive.get("V_eq").unwrap().dims, vec![30, 30]);
    assert_eq!(archive.get("g").unwrap().dims, vec![30; 4]);
    let blocks = archive.tensors.iter().filter(|t| t.name.starts_with("V_en/")).count();
    assert_eq!(blocks, 6);

    cmd_integrals(&config, &out).unwrap();
    assert_eq!(fs::read(&summary.path).unwrap(), first);

    let mut corrupt = first.clone();
    corrupt[0] = b'X';
    fs::write(&summary.path, corrupt).unwrap();
    let err = cmd_scan(&config, &out).unwrap_err();
    assert!(matches!(err, CliError::Core(alchemq::Error::MagicMismatch)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn stale_cache_is_not_used() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let vacuum = load(&small_config(dir.path(), None, ""));
    cmd_integrals(&vacuum, &out).unwrap();
    let charged = load(&small_config(dir.path(), Some("case2.charges"), ""));
    let table = cmd_scan(&charged, &out).unwrap();
    assert!(table.rows.iter().any(|r| r.delta.abs() > 1e-6));
}

#[test]
fn scan_rows_and_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let config = load(&small_config(dir.path(), None, ""));
    let table = cmd_scan(&config, &dir.path().join("o")).unwrap();
    assert_eq!(table.rows.len(), 9);
    assert!(table.rows.iter().all(|r| r.delta == 0.0));
    let csv = fs::read_to_string(dir.path().join("o/scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert_eq!(csv.lines().nth(1).unwrap(), "composition,E_vac_hartree,E_charged_hartree,deltaE_hartree");
}

#[test]
fn run_directory_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = load(&small_config(dir.path(), Some("case1.charges"), ""));
    let out = dir.path().join("run");
    let report = cmd_run(&config, &out).unwrap();
    assert_eq!(report.alpha_opt.len(), 2);

    let dist = fs::read_to_string(out.join("distribution.csv")).unwrap();
    let mut lines = dist.lines();
    assert_eq!(lines.next().unwrap(), "# schema: alchemq.distribution.v1");
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2 + 2 * 3);
    assert_eq!(header[2..5], ["site0_H", "site0_Li", "site0_Na"]);
    assert_eq!(lines.count(), report.iterations);

    let trace = fs::read_to_string(out.join("trace.jsonl")).unwrap();
    assert!(trace.starts_with("{\"schema\":\"alchemq.trace.v1\""));
    assert!(fs::read_to_string(out.join("report.json")).unwrap().contains("\"schema\": \"alchemq.report.v1\""));
    assert!(fs::read_to_string(out.join("config.toml")).unwrap().starts_with("# schema: alchemq.config.v1"));

    // The snapshot reproduces the run exactly.
    let again = dir.path().join("again");
    let snap = load(&out.join("config.toml"));
    cmd_run(&snap, &again).unwrap();
    assert_eq!(fs::read_to_string(again.join("trace.jsonl")).unwrap(), trace);

    let summary = cmd_report(&out).unwrap();
    assert_eq!(summary.agreement, Agreement::NotAvailable);
    assert!(summary.text.contains("agreement: n/a"));
    assert_eq!(summary.trace_records, report.iterations);

    fs::write(out.join("trace.jsonl"), trace + "{not json\n\n[1,2]\n").unwrap();
    let summary = cmd_report(&out).unwrap();
    assert_eq!(summary.skipped_lines, 2);
    assert!(summary.text.contains("skipped 2 malformed trace lines"));

    cmd_scan(&config, &out).unwrap();
    let summary = cmd_report(&out).unwrap();
    assert_ne!(summary.agreement, Agreement::NotAvailable);
    assert!(summary.scan.is_some());
}

#[test]
fn report_of_missing_directory() {
    let dir = tempfile::tempdir().unwrap();
    let err = cmd_report(&dir.path().join("nothing")).unwrap_err();
    assert!(matches!(err, CliError::Missing { .. }));
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_alchemq")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out_s = out.to_str().unwrap();

    let good = small_config(dir.path(), None, "");
    let o = binary(&["scan", "--config", good.to_str().unwrap(), "--out", out_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("H-H"));

    let bad_scaffold = dir.path().join("bad.xyz");
    fs::write(&bad_scaffold, "0 0 0 H,Li\n0 0 oops H\n").unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, format!("scaffold = {bad_scaffold:?}\n")).unwrap();
    let o = binary(&["integrals", "--config", cfg.to_str().unwrap(), "--out", out_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.xyz:2"));

    let coincident = dir.path().join("same.xyz");
    fs::write(&coincident, "0 0 0 H\n0 0 0 H\n").unwrap();
    fs::write(&cfg, format!("scaffold = {coincident:?}\nactive_orbitals = 1\n")).unwrap();
    let o = binary(&["scan", "--config", cfg.to_str().unwrap(), "--out", out_s]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    let o = binary(&["report", "--out", dir.path().join("none").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = binary(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}
