//! Browser bindings over a fixed H/Li/Na dimer scaffold.
//!
//! Vacuum integrals are computed once per [`Explorer`]; each call swaps in
//! the field block for the requested charges.

use alchemq::alchemy::{
    AlchemicalSystem, ChargeField, PointCharge, Scaffold, DEFAULT_OVERLAP_THRESHOLD,
};
use alchemq::basis::BasisSet;
use alchemq::integrals::{AlchemicalIntegrals, CorePotential};
use alchemq::oracle::{scan_with, select_species};
use alchemq::qubits::{Circuit, Entangler, Rotation};
use alchemq::units::point_to_bohr;
use alchemq::vqe::{optimize, AlchemicalProblem, OptimizerConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const SCAFFOLD: &str = include_str!("../../../fixtures/dimer_hlina.xyz");

/// Distance of the axial and equatorial charges from the origin, in ångström.
pub const CHARGE_RADIUS: f64 = 2.5;
pub const EQUATORIAL_CHARGE: f64 = 0.06;

/// Two axial charges on z and four equatorial ones on ±x, ±y.
pub fn charge_ring(left: f64, right: f64, radius: f64) -> ChargeField {
    let mut charges = vec![
        PointCharge { position: [0.0, 0.0, -radius], charge: left },
        PointCharge { position: [0.0, 0.0, radius], charge: right },
    ];
    for p in [[radius, 0.0, 0.0], [-radius, 0.0, 0.0], [0.0, radius, 0.0], [0.0, -radius, 0.0]] {
        charges.push(PointCharge { position: p, charge: EQUATORIAL_CHARGE });
    }
    ChargeField { charges }
}

#[derive(Debug, Serialize)]
pub struct ScanEntry {
    pub composition: String,
    pub delta_e: f64,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub alpha: Vec<Vec<f64>>,
    pub delta_e: f64,
}

#[derive(Debug, Serialize)]
pub struct Trajectory {
    pub species: Vec<String>,
    pub points: Vec<TrajectoryPoint>,
    pub selected: String,
    pub weight: f64,
    pub oracle: String,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct Slice {
    pub xs: Vec<f64>,
    pub zs: Vec<f64>,
    /// Row-major over z then x, in hartree per unit charge.
    pub values: Vec<f64>,
    pub sites: Vec<[f64; 3]>,
}

#[wasm_bindgen]
pub struct Explorer {
    scaffold: Scaffold,
    basis: BasisSet,
    vacuum: AlchemicalIntegrals,
    active_orbitals: usize,
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl Explorer {
    fn system(&self, left: f64, right: f64) -> AlchemicalSystem {
        let field = charge_ring(left, right, CHARGE_RADIUS);
        let integrals = self.vacuum.clone().with_field(&self.basis, &field);
        AlchemicalSystem::from_parts(self.scaffold.clone(), field, integrals).expect("integrals match the scaffold")
    }

    fn problem(&self, left: f64, right: f64) -> Result<(AlchemicalSystem, AlchemicalProblem), String> {
        let system = self.system(left, right);
        let active = system
            .uniform_active_space(self.active_orbitals, DEFAULT_OVERLAP_THRESHOLD)
            .map_err(text)?;
        let problem = AlchemicalProblem::new(&system, &active, None).map_err(text)?;
        Ok((system, problem))
    }

    pub fn scan_entries(&self, left: f64, right: f64) -> Result<Vec<ScanEntry>, String> {
        let (system, problem) = self.problem(left, right)?;
        let table = scan_with(&system.scaffold, |a, c| problem.hamiltonian(a, c));
        Ok(table
            .rows
            .into_iter()
            .map(|r| ScanEntry { composition: r.label, delta_e: r.delta })
            .collect())
    }

    pub fn trajectory(
        &self,
        left: f64,
        right: f64,
        depth: usize,
        iterations: usize,
        seed: u64,
    ) -> Result<Trajectory, String> {
        let (system, problem) = self.problem(left, right)?;
        let circuit = Circuit::new(problem.qubits(), depth, Rotation::Ry, Entangler::AllToAll).map_err(text)?;
        let config = OptimizerConfig {
            max_iterations: iterations.max(1),
            theta_starts: 3,
            seed,
            ..Default::default()
        };
        let trace = optimize(&problem, &circuit, &config, None, None).map_err(text)?;
        let top = select_species(&trace.alpha_opt, 0.0);
        let best = top.first().ok_or("no candidates")?;
        let oracle = scan_with(&system.scaffold, |a, c| problem.hamiltonian(a, c));
        Ok(Trajectory {
            species: system.scaffold.sites()[0].symbols().iter().map(|s| s.to_string()).collect(),
            points: trace
                .records
                .iter()
                .map(|r| TrajectoryPoint { iteration: r.iteration, alpha: r.alpha.clone(), delta_e: r.delta_e })
                .collect(),
            selected: system.scaffold.composition_label(&best.composition),
            weight: best.weight,
            oracle: oracle.best().map(|r| r.label.clone()).unwrap_or_default(),
            converged: trace.converged,
        })
    }
}

/// Electrostatic potential of the charges on the y = 0 plane.
pub fn slice(left: f64, right: f64, half_width: f64, points: usize) -> Slice {
    let field = charge_ring(left, right, CHARGE_RADIUS);
    let n = points.max(2);
    let axis: Vec<f64> = (0..n).map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64).collect();
    let mut values = Vec::with_capacity(n * n);
    for &z in &axis {
        for &x in &axis {
            let r = point_to_bohr([x, 0.0, z]);
            let v: f64 = field
                .charges
                .iter()
                .map(|c| {
                    let q = point_to_bohr(c.position);
                    let d = ((r[0] - q[0]).powi(2) + (r[1] - q[1]).powi(2) + (r[2] - q[2]).powi(2)).sqrt();
                    c.charge / d.max(0.05)
                })
                .sum();
            values.push(v);
        }
    }
    Slice {
        xs: axis.clone(),
        zs: axis,
        values,
        sites: Scaffold::parse_str(SCAFFOLD)
            .map(|s| s.sites().iter().map(|x| x.position).collect())
            .unwrap_or_default(),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

#[wasm_bindgen]
impl Explorer {
    /// Precompute vacuum integrals with `active_orbitals` frozen orbitals.
    #[wasm_bindgen(constructor)]
    pub fn new(active_orbitals: usize) -> Result<Explorer, String> {
        let scaffold = Scaffold::parse_str(SCAFFOLD).map_err(text)?;
        let system = AlchemicalSystem::new(scaffold.clone(), ChargeField::vacuum(), &CorePotential::FrozenCore)
            .map_err(text)?;
        Ok(Explorer {
            scaffold,
            basis: system.basis,
            vacuum: system.integrals,
            active_orbitals,
        })
    }

    /// Exact ΔE of all nine compositions as JSON, lowest first.
    pub fn scan(&self, left: f64, right: f64) -> Result<String, String> {
        self.scan_entries(left, right).map(|e| json(&e))
    }

    /// Joint optimization trajectory of the site weights as JSON.
    pub fn run(&self, left: f64, right: f64, depth: usize, iterations: usize, seed: u64) -> Result<String, String> {
        self.trajectory(left, right, depth, iterations, seed).map(|t| json(&t))
    }

    /// Potential on an `points` × `points` grid spanning ±`half_width` ångström, as JSON.
    pub fn potential(&self, left: f64, right: f64, half_width: f64, points: usize) -> String {
        json(&slice(left, right, half_width, points))
    }
}
