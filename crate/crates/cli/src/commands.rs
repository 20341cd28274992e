//! The `integrals`, `run` and `scan` subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use alchemq::alchemy::{orthogonalize, AlchemicalSystem, AlphaWeights, ChargeField, Scaffold};
use alchemq::integrals::{AlchemicalIntegrals, Tensor, TensorArchive};
use alchemq::oracle::{scan_with, select_species, ScanTable};
use alchemq::qubits::Circuit;
use alchemq::vqe::{optimize, AlchemicalProblem, RunTrace};
use serde::{Deserialize, Serialize};

use crate::config::{CoreKind, RunConfig, CONFIG_SCHEMA};
use crate::error::{CliError, Result};

pub const TRACE_SCHEMA: &str = "alchemq.trace.v1";
pub const DISTRIBUTION_SCHEMA: &str = "alchemq.distribution.v1";
pub const REPORT_SCHEMA: &str = "alchemq.report.v1";

pub const CONFIG_FILE: &str = "config.toml";
pub const TRACE_FILE: &str = "trace.jsonl";
pub const DISTRIBUTION_FILE: &str = "distribution.csv";
pub const REPORT_FILE: &str = "report.json";
pub const SCAN_FILE: &str = "scan.csv";

pub(crate) fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Input geometry recorded next to the integrals so stale caches are detected.
fn fingerprint(scaffold: &Scaffold, field: &ChargeField, core: CoreKind) -> Vec<Tensor> {
    let sites = scaffold.sites();
    let mut out = vec![Tensor::new(
        "meta/sites",
        vec![sites.len(), 3],
        sites.iter().flat_map(|s| s.position).collect(),
    )];
    for (i, site) in sites.iter().enumerate() {
        out.push(Tensor::new(
            format!("meta/species/{i}"),
            vec![site.species.len()],
            site.species.iter().map(|s| s.total_z as f64).collect(),
        ));
    }
    out.push(Tensor::new(
        "meta/charges",
        vec![field.len(), 4],
        field
            .charges
            .iter()
            .flat_map(|c| [c.position[0], c.position[1], c.position[2], c.charge])
            .collect(),
    ));
    let code = match core {
        CoreKind::None => 0.0,
        CoreKind::FrozenCore => 1.0,
        CoreKind::Ingested => 2.0,
    };
    out.push(Tensor::new("meta/core", vec![1], vec![code]));
    out
}

fn cached_integrals(
    path: &Path,
    scaffold: &Scaffold,
    expected: &[Tensor],
) -> Result<Option<AlchemicalIntegrals>> {
    if !path.exists() {
        return Ok(None);
    }
    let archive = TensorArchive::load(path)?;
    if expected.iter().any(|t| archive.get(&t.name) != Some(t)) {
        eprintln!("warning: {} was built for other inputs; recomputing", path.display());
        return Ok(None);
    }
    Ok(Some(AlchemicalIntegrals::from_archive(&archive, scaffold)?))
}

/// Build the system, reusing the integral cache when it matches the inputs.
pub fn load_system(config: &RunConfig, out: &Path) -> Result<AlchemicalSystem> {
    let scaffold = config.scaffold()?;
    let field = config.field()?;
    let expected = fingerprint(&scaffold, &field, config.core_potential);
    match cached_integrals(&config.integrals_path(out), &scaffold, &expected)? {
        Some(ints) => Ok(AlchemicalSystem::from_parts(scaffold, field, ints)?),
        None => Ok(AlchemicalSystem::new(scaffold, field, &config.core()?)?),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralsSummary {
    pub path: PathBuf,
    pub basis_size: usize,
    pub rank: usize,
}

pub fn cmd_integrals(config: &RunConfig, out: &Path) -> Result<IntegralsSummary> {
    let scaffold = config.scaffold()?;
    let field = config.field()?;
    let system = AlchemicalSystem::new(scaffold, field, &config.core()?)?;
    let mut archive = system.integrals.to_archive();
    for t in fingerprint(&system.scaffold, &system.field, config.core_potential) {
        archive.push(t);
    }
    let path = config.integrals_path(out);
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    archive.save(&path)?;
    let rank = orthogonalize(&system.integrals.overlap, config.overlap_threshold)?.ncols();
    Ok(IntegralsSummary {
        path,
        basis_size: system.integrals.dim(),
        rank,
    })
}

fn build_problem(config: &RunConfig, out: &Path) -> Result<(AlchemicalSystem, AlchemicalProblem)> {
    let system = load_system(config, out)?;
    let active = system.uniform_active_space(config.active_orbitals, config.overlap_threshold)?;
    let problem = AlchemicalProblem::new(&system, &active, config.penalty())?;
    Ok((system, problem))
}

pub fn cmd_scan(config: &RunConfig, out: &Path) -> Result<ScanTable> {
    let (system, problem) = build_problem(config, out)?;
    let table = scan_with(&system.scaffold, |alpha, charged| problem.hamiltonian(alpha, charged));
    create_dir(out)?;
    write(&out.join(SCAN_FILE), table.to_csv())?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub label: String,
    pub composition: Vec<usize>,
    pub weight: f64,
}

/// Final state of a run as stored in `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub species: Vec<Vec<String>>,
    pub qubits: usize,
    pub parameters: usize,
    pub scale: f64,
    pub alpha_initial: Vec<Vec<f64>>,
    pub alpha_opt: Vec<Vec<f64>>,
    pub argmax: String,
    pub candidates: Vec<CandidateEntry>,
    pub delta_e: f64,
    pub e_vac: f64,
    pub e_charged: f64,
    pub cost: f64,
    pub converged: bool,
    pub iterations: usize,
    pub best_restart: usize,
    pub theta_opt: Vec<f64>,
    pub theta_charged: Option<Vec<f64>>,
}

fn trace_jsonl(trace: &RunTrace, species: &[Vec<String>]) -> String {
    let header = serde_json::json!({ "schema": TRACE_SCHEMA, "species": species });
    let mut s = header.to_string();
    s.push('\n');
    for r in &trace.records {
        s.push_str(&serde_json::to_string(r).expect("record serializes"));
        s.push('\n');
    }
    s
}

fn distribution_csv(trace: &RunTrace, species: &[Vec<String>]) -> String {
    let mut columns = vec!["restart".to_string(), "iteration".to_string()];
    for (i, site) in species.iter().enumerate() {
        columns.extend(site.iter().map(|s| format!("site{i}_{s}")));
    }
    let mut s = format!("# schema: {DISTRIBUTION_SCHEMA}\n{}\n", columns.join(","));
    for r in &trace.records {
        let mut row = vec![r.restart.to_string(), r.iteration.to_string()];
        row.extend(r.alpha.iter().flatten().map(|a| format!("{a:.12}")));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Copy the inputs into `out` and write a config that points at the copies.
fn snapshot(config: &RunConfig, out: &Path) -> Result<()> {
    let mut snap = config.clone();
    let copy = |src: &Path, name: &str| -> Result<PathBuf> {
        fs::copy(src, out.join(name)).map_err(|e| CliError::io(src, e))?;
        Ok(PathBuf::from(name))
    };
    snap.scaffold = copy(&config.scaffold, "scaffold.xyz")?;
    snap.charges = config.charges.as_deref().map(|p| copy(p, "charges.txt")).transpose()?;
    snap.integrals = None;
    write(
        &out.join(CONFIG_FILE),
        format!("# schema: {CONFIG_SCHEMA}\n{}", snap.to_toml()),
    )
}

pub fn cmd_run(config: &RunConfig, out: &Path) -> Result<RunReport> {
    let (system, problem) = build_problem(config, out)?;
    let circuit = Circuit::new(problem.qubits(), config.depth, config.rotation, config.entangler)?;
    let alpha0 = AlphaWeights::uniform(&system.scaffold);
    let trace = optimize(&problem, &circuit, &config.optimizer, None, Some(alpha0.clone()))?;

    let scaffold = &system.scaffold;
    let species: Vec<Vec<String>> = scaffold
        .sites()
        .iter()
        .map(|s| s.symbols().iter().map(|x| x.to_string()).collect())
        .collect();
    let candidates = select_species(&trace.alpha_opt, config.selection_threshold)
        .into_iter()
        .map(|c| CandidateEntry {
            label: scaffold.composition_label(&c.composition),
            composition: c.composition,
            weight: c.weight,
        })
        .collect();
    let report = RunReport {
        schema: REPORT_SCHEMA.into(),
        species: species.clone(),
        qubits: circuit.qubits,
        parameters: circuit.parameter_count(),
        scale: config.optimizer.scale,
        alpha_initial: alpha0.into_inner(),
        alpha_opt: trace.alpha_opt.sites().to_vec(),
        argmax: scaffold.composition_label(&trace.alpha_opt.argmax()),
        candidates,
        delta_e: trace.delta_e,
        e_vac: trace.e_vac,
        e_charged: trace.e_charged,
        cost: trace.cost,
        converged: trace.converged,
        iterations: trace.records.len(),
        best_restart: trace.best_restart,
        theta_opt: trace.theta_opt.clone(),
        theta_charged: trace.theta_charged.clone(),
    };

    create_dir(out)?;
    snapshot(config, out)?;
    write(&out.join(TRACE_FILE), trace_jsonl(&trace, &species))?;
    write(&out.join(DISTRIBUTION_FILE), distribution_csv(&trace, &species))?;
    write(
        &out.join(REPORT_FILE),
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    )?;
    Ok(report)
}
