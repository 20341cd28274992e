//! Enumeration of the compound space and exact binding-energy ranking.

use std::fmt::Write as _;

use crate::alchemy::{ActiveSpace, AlchemicalSystem, AlphaWeights, Scaffold};
use crate::error::Result;
use crate::qubits::{jordan_wigner, PauliSum};

use super::eigen::exact_ground_energy;

/// Schema tag written at the top of scan CSV files.
pub const SCAN_SCHEMA: &str = "alchemq.scan.v1";
/// Column header of scan CSV files.
pub const SCAN_HEADER: &str = "composition,E_vac_hartree,E_charged_hartree,deltaE_hartree";

/// Every one-hot weight set, last site varying fastest.
pub fn enumerate_compositions(scaffold: &Scaffold) -> Vec<AlphaWeights> {
    let counts = scaffold.species_counts();
    let mut out = Vec::new();
    let mut idx = vec![0usize; counts.len()];
    loop {
        out.push(AlphaWeights::one_hot(scaffold, &idx).expect("index within counts"));
        let mut site = counts.len();
        loop {
            if site == 0 {
                return out;
            }
            site -= 1;
            idx[site] += 1;
            if idx[site] < counts[site] {
                break;
            }
            idx[site] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub composition: Vec<usize>,
    pub label: String,
    pub e_vac: f64,
    pub e_charged: f64,
    pub delta: f64,
    /// Failure message when the row could not be evaluated.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    /// Rows sorted by ascending ΔE, ties and failures ordered by composition.
    pub rows: Vec<ScanRow>,
}

/// ΔE = E_charged − E_vac for every composition, by exact diagonalization
/// of the second-quantized system Hamiltonians.
pub fn binding_energy_scan(system: &AlchemicalSystem, active: &ActiveSpace) -> ScanTable {
    scan_with(&system.scaffold, |alpha, charged| {
        jordan_wigner(&system.second_quantize(active, alpha, charged)?)
    })
}

/// Scan over an arbitrary qubit Hamiltonian builder, called with each
/// one-hot weight set and `charged` false then true.
pub fn scan_with<F>(scaffold: &Scaffold, hamiltonian: F) -> ScanTable
where
    F: Fn(&AlphaWeights, bool) -> Result<PauliSum> + Sync,
{
    let compositions = enumerate_compositions(scaffold);
    let energies = |alpha: &AlphaWeights| -> Result<(f64, f64)> {
        Ok((
            exact_ground_energy(&hamiltonian(alpha, false)?)?,
            exact_ground_energy(&hamiltonian(alpha, true)?)?,
        ))
    };
    let evaluate = |alpha: &AlphaWeights| -> ScanRow {
        let composition = alpha.argmax();
        let label = scaffold.composition_label(&composition);
        match energies(alpha) {
            Ok((e_vac, e_charged)) => ScanRow {
                composition,
                label,
                e_vac,
                e_charged,
                delta: e_charged - e_vac,
                error: None,
            },
            Err(e) => ScanRow {
                composition,
                label,
                e_vac: f64::NAN,
                e_charged: f64::NAN,
                delta: f64::NAN,
                error: Some(e.to_string()),
            },
        }
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<ScanRow> = {
        use rayon::prelude::*;
        compositions.par_iter().map(evaluate).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<ScanRow> = compositions.iter().map(evaluate).collect();
    ScanTable::new(rows)
}

impl ScanTable {
    pub fn new(mut rows: Vec<ScanRow>) -> Self {
        rows.sort_by(|a, b| {
            let key = |r: &ScanRow| if r.delta.is_nan() { f64::INFINITY } else { r.delta };
            key(a)
                .total_cmp(&key(b))
                .then_with(|| a.composition.cmp(&b.composition))
        });
        ScanTable { rows }
    }

    /// Lowest-ΔE row.
    pub fn best(&self) -> Option<&ScanRow> {
        self.rows.first().filter(|r| r.error.is_none())
    }

    /// Compositions within `tolerance` of the minimum ΔE.
    pub fn argmin_set(&self, tolerance: f64) -> Vec<Vec<usize>> {
        let Some(best) = self.best() else { return Vec::new() };
        self.rows
            .iter()
            .filter(|r| r.error.is_none() && r.delta - best.delta <= tolerance)
            .map(|r| r.composition.clone())
            .collect()
    }

    pub fn find(&self, composition: &[usize]) -> Option<&ScanRow> {
        self.rows.iter().find(|r| r.composition == composition)
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# schema: {SCAN_SCHEMA}\n{SCAN_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.12},{:.12},{:.12}",
                r.label, r.e_vac, r.e_charged, r.delta
            );
        }
        for r in self.rows.iter().filter(|r| r.error.is_some()) {
            let _ = writeln!(s, "# error {}: {}", r.label, r.error.as_deref().unwrap_or(""));
        }
        s
    }
}

/// A composition with its joint weight Π_I α^I_{s_I}.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Candidate {
    pub composition: Vec<usize>,
    pub weight: f64,
}

/// Default joint-weight cutoff for [`select_species`].
pub const DEFAULT_SELECTION_THRESHOLD: f64 = 0.1;

/// Compositions with joint weight ≥ `threshold`, heaviest first.
pub fn select_species(alpha: &AlphaWeights, threshold: f64) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; alpha.sites().len()];
    let counts = alpha.shape();
    'outer: loop {
        let weight: f64 = idx.iter().enumerate().map(|(i, &s)| alpha.site(i)[s]).product();
        if weight >= threshold {
            out.push(Candidate {
                composition: idx.clone(),
                weight,
            });
        }
        let mut site = counts.len();
        loop {
            if site == 0 {
                break 'outer;
            }
            site -= 1;
            idx[site] += 1;
            if idx[site] < counts[site] {
                break;
            }
            idx[site] = 0;
        }
    }
    out.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then_with(|| a.composition.cmp(&b.composition))
    });
    out
}
