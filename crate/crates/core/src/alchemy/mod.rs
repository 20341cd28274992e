//! Alchemical systems: scaffolds, weights, and the α-dependent Hamiltonian.

mod hamiltonian;
mod system;

pub use hamiltonian::{
    build_active_space, core_matrix, nuclear_terms, orthogonalize, ActiveSpace,
    AlchemicalSystem, FermionHamiltonian, DEFAULT_OVERLAP_THRESHOLD,
};
pub use system::{AlphaWeights, ChargeField, PointCharge, Scaffold, Site, SIMPLEX_TOLERANCE};
