//! Frozen-core model potential.
//!
//! Core orbitals of a species are its own leading STO-3G functions,
//! Gram–Schmidt orthonormalized in the overlap metric. The block is
//!
//!   v = −N_core/|r − R| + Σ_c (2J_c − K_c) + Σ_c (−2ε_c) S|c⟩⟨c|S
//!
//! so that v plus the valence attraction −Z̃/|r − R| is the full nuclear
//! attraction screened by a doubly occupied frozen core, with the core
//! orbitals shifted out of reach of the valence electrons. ε_c is the
//! frozen-core orbital energy ⟨c| T − Z/|r − R| + 2J − K |c⟩.

use nalgebra::{DMatrix, DVector};

use super::EriTensor;
use crate::basis::{BasisSet, SpeciesBasis};

/// Core block for species `species_index` at `site`. `unit_attraction` is
/// the attraction matrix to a unit positive charge on the site.
#[allow(clippy::too_many_arguments)]
pub fn frozen_core_potential(
    basis: &BasisSet,
    overlap: &DMatrix<f64>,
    kinetic: &DMatrix<f64>,
    eri: &EriTensor,
    unit_attraction: &DMatrix<f64>,
    site: usize,
    species_index: usize,
    species: &SpeciesBasis,
) -> DMatrix<f64> {
    let n = basis.len();
    let ncore = species.core_function_count();
    if ncore == 0 {
        return DMatrix::zeros(n, n);
    }
    let block = basis.block(site, species_index);
    let orbitals = core_orbitals(overlap, &block[..ncore]);

    let density: DMatrix<f64> = orbitals.iter().map(|c| c * c.transpose()).sum();
    let mut two_body = DMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in 0..=mu {
            let mut j = 0.0;
            let mut k = 0.0;
            for la in 0..n {
                for si in 0..n {
                    let d = density[(la, si)];
                    if d == 0.0 {
                        continue;
                    }
                    j += d * eri.get(mu, nu, la, si);
                    k += d * eri.get(mu, la, nu, si);
                }
            }
            let v = 2.0 * j - k;
            two_body[(mu, nu)] = v;
            two_body[(nu, mu)] = v;
        }
    }

    let total_z = f64::from(species.total_z);
    let core_charge = f64::from(species.core_electrons);
    let atom_fock = kinetic + unit_attraction * total_z + &two_body;
    let mut v = unit_attraction * core_charge + two_body;
    for c in &orbitals {
        let energy = (c.transpose() * &atom_fock * c)[(0, 0)];
        let sc = overlap * c;
        v += (&sc * sc.transpose()) * (-2.0 * energy);
    }
    v
}

/// Orthonormal (in the S metric) combinations of the listed functions.
fn core_orbitals(overlap: &DMatrix<f64>, functions: &[usize]) -> Vec<DVector<f64>> {
    let n = overlap.nrows();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(functions.len());
    for &f in functions {
        let mut v = DVector::zeros(n);
        v[f] = 1.0;
        for c in &out {
            let proj = (c.transpose() * overlap * &v)[(0, 0)];
            v -= c * proj;
        }
        let norm = (v.transpose() * overlap * &v)[(0, 0)].sqrt();
        out.push(v / norm);
    }
    out
}
