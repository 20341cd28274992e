//! Jordan–Wigner mapping: a†_j = ½(X_j − iY_j) Z_{j−1} ⋯ Z_0.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::pauli::{i_pow, PauliString, PauliSum};
use crate::alchemy::FermionHamiltonian;
use crate::error::{Error, Result};

type Operator = Vec<(Complex64, PauliString)>;

fn ladder(j: usize, creation: bool) -> Operator {
    let tail = (1u64 << j) - 1;
    let x = PauliString::new(1 << j, tail);
    let y = PauliString::new(1 << j, tail | (1 << j));
    let half = Complex64::new(0.5, 0.0);
    let iy = Complex64::new(0.0, if creation { -0.5 } else { 0.5 });
    vec![(half, x), (iy, y)]
}

fn product(a: &Operator, b: &Operator) -> Operator {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ca, pa) in a {
        for (cb, pb) in b {
            let (k, p) = pa.mul(pb);
            out.push((ca * cb * i_pow(k), p));
        }
    }
    out
}

struct Accumulator(HashMap<PauliString, Complex64>);

impl Accumulator {
    fn add(&mut self, w: f64, op: &Operator) {
        for (c, p) in op {
            *self.0.entry(*p).or_default() += c * w;
        }
    }

    fn finish(self, qubits: usize, constant: f64) -> Result<PauliSum> {
        let mut sum = PauliSum::identity(qubits, constant);
        for (p, c) in self.0 {
            if c.im.abs() > 1e-10 {
                return Err(Error::Numerical(format!(
                    "non-Hermitian operator: imaginary coefficient {} on {}",
                    c.im,
                    p.to_letters(qubits)
                )));
            }
            sum.push(c.re, p);
        }
        Ok(sum.simplify())
    }
}

/// Map a one-body operator Σ_pq h_pq a†_p a_q (no constant).
pub fn one_body_to_pauli(h: &DMatrix<f64>) -> Result<PauliSum> {
    let m = h.nrows();
    let create: Vec<Operator> = (0..m).map(|j| ladder(j, true)).collect();
    let annihilate: Vec<Operator> = (0..m).map(|j| ladder(j, false)).collect();
    let mut acc = Accumulator(HashMap::new());
    for p in 0..m {
        for q in 0..m {
            let w = h[(p, q)];
            if w != 0.0 {
                acc.add(w, &product(&create[p], &annihilate[q]));
            }
        }
    }
    acc.finish(m, 0.0)
}

/// Qubit Hamiltonian of `f`; the constant sits on the identity string.
pub fn jordan_wigner(f: &FermionHamiltonian) -> Result<PauliSum> {
    let m = f.modes();
    if m > super::pauli::MAX_PAULI_QUBITS {
        return Err(Error::Capacity {
            qubits: m,
            limit: super::pauli::MAX_PAULI_QUBITS,
        });
    }
    let create: Vec<Operator> = (0..m).map(|j| ladder(j, true)).collect();
    let annihilate: Vec<Operator> = (0..m).map(|j| ladder(j, false)).collect();
    let mut acc = Accumulator(HashMap::new());
    for p in 0..m {
        for q in 0..m {
            let w = f.one_body[(p, q)];
            if w != 0.0 {
                acc.add(w, &product(&create[p], &annihilate[q]));
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            let pq = product(&create[p], &create[q]);
            for r in 0..m {
                for s in 0..m {
                    if r == s {
                        continue;
                    }
                    let w = f.two_body(p, q, r, s);
                    if w != 0.0 {
                        let rs = product(&annihilate[r], &annihilate[s]);
                        acc.add(0.5 * w, &product(&pq, &rs));
                    }
                }
            }
        }
    }
    acc.finish(m, f.constant)
}

/// weight · (N̂ − target)² with N̂ = Σ_p (1 − Z_p)/2 on `qubits` modes.
pub fn number_penalty(qubits: usize, target: f64, weight: f64) -> PauliSum {
    let c = qubits as f64 / 2.0 - target;
    let mut sum = PauliSum::identity(qubits, weight * (c * c + qubits as f64 / 4.0));
    for p in 0..qubits {
        sum.push(-weight * c, PauliString::z(p));
        for q in p + 1..qubits {
            sum.push(0.5 * weight, PauliString::new(0, (1 << p) | (1 << q)));
        }
    }
    sum.simplify()
}

/// Particle-number operator N̂.
pub fn number_operator(qubits: usize) -> PauliSum {
    let mut sum = PauliSum::identity(qubits, qubits as f64 / 2.0);
    for p in 0..qubits {
        sum.push(-0.5, PauliString::z(p));
    }
    sum
}
