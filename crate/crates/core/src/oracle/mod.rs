//! Brute-force reference results: exact diagonalization over the whole
//! compound space.

mod eigen;
mod fock;
mod scan;

pub use eigen::{
    cross_check, dense_real, exact_ground_energy, ground_state, Solver, DENSE_QUBIT_LIMIT,
    DENSE_QUBIT_MAX,
};
pub use fock::fock_matrix;
pub use scan::{
    binding_energy_scan, enumerate_compositions, scan_with, select_species, Candidate, ScanRow, ScanTable,
    DEFAULT_SELECTION_THRESHOLD, SCAN_HEADER, SCAN_SCHEMA,
};
