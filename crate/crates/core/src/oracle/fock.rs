//! Many-body matrix of a fermion Hamiltonian built directly on occupation
//! bit strings, independent of the Pauli algebra.

use nalgebra::DMatrix;

use crate::alchemy::FermionHamiltonian;
use crate::error::{Error, Result};

/// a_j |b⟩ as (sign, b') or None when mode j is empty.
fn annihilate(j: usize, b: u64) -> Option<(f64, u64)> {
    if b >> j & 1 == 0 {
        return None;
    }
    let sign = if (b & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, b & !(1 << j)))
}

/// a†_j |b⟩ as (sign, b') or None when mode j is occupied.
fn create(j: usize, b: u64) -> Option<(f64, u64)> {
    if b >> j & 1 == 1 {
        return None;
    }
    let sign = if (b & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, b | (1 << j)))
}

/// Dense matrix over all 2^M occupations, basis index = occupation bits.
pub fn fock_matrix(f: &FermionHamiltonian) -> Result<DMatrix<f64>> {
    let m = f.modes();
    if m > 12 {
        return Err(Error::Capacity { qubits: m, limit: 12 });
    }
    let dim = 1usize << m;
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim as u64 {
        out[(b as usize, b as usize)] += f.constant;
        for q in 0..m {
            let Some((s1, b1)) = annihilate(q, b) else { continue };
            for p in 0..m {
                let w = f.one_body[(p, q)];
                if w == 0.0 {
                    continue;
                }
                if let Some((s2, b2)) = create(p, b1) {
                    out[(b2 as usize, b as usize)] += w * s1 * s2;
                }
            }
        }
        for s in 0..m {
            let Some((s1, b1)) = annihilate(s, b) else { continue };
            for r in 0..m {
                let Some((s2, b2)) = annihilate(r, b1) else { continue };
                for q in 0..m {
                    let Some((s3, b3)) = create(q, b2) else { continue };
                    for p in 0..m {
                        let w = f.two_body(p, q, r, s);
                        if w == 0.0 {
                            continue;
                        }
                        if let Some((s4, b4)) = create(p, b3) {
                            out[(b4 as usize, b as usize)] += 0.5 * w * s1 * s2 * s3 * s4;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
