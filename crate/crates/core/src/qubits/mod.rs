//! Qubit encoding, statevector simulation and measurement sampling.

mod circuit;
mod jw;
mod pauli;
mod sampling;

pub use circuit::{expectation, Circuit, Entangler, Rotation, Statevector, MAX_STATE_QUBITS};
pub use jw::{jordan_wigner, number_operator, number_penalty, one_body_to_pauli};
pub use pauli::{PauliString, PauliSum, PauliTerm, MAX_PAULI_QUBITS, PRUNE_THRESHOLD};
pub use sampling::{qubit_wise_groups, sampled_expectation};

#[cfg(test)]
mod tests;
