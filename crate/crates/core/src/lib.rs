pub mod alchemy;
pub mod basis;
pub mod error;
pub mod integrals;
pub mod oracle;
pub mod qubits;
pub mod units;
pub mod vqe;

pub use error::{Error, Result};

#[cfg(test)]
mod testutil;
