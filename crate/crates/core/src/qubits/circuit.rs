//! Hardware-efficient ansatz and a dense statevector simulator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pauli::PauliSum;
use crate::error::{Error, Result};

/// Largest register the simulator will allocate (2^24 amplitudes).
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    #[default]
    Ry,
    RyRz,
}

impl Rotation {
    pub fn angles_per_qubit(self) -> usize {
        match self {
            Rotation::Ry => 1,
            Rotation::RyRz => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// CNOT(i, j) for every i < j.
    #[default]
    AllToAll,
    /// CNOT(q, q + 1) along the register.
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_capacity(qubits: usize) -> Result<()> {
    if qubits > MAX_STATE_QUBITS {
        return Err(Error::Capacity {
            qubits,
            limit: MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

impl Statevector {
    pub fn basis(qubits: usize, index: u64) -> Result<Self> {
        check_capacity(qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        let i = usize::try_from(index)
            .ok()
            .filter(|&i| i < amplitudes.len())
            .ok_or_else(|| Error::Dimension(format!("basis index {index} out of range")))?;
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Statevector { qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        if !n.is_power_of_two() {
            return Err(Error::Dimension(format!("{n} amplitudes is not a power of two")));
        }
        let qubits = n.trailing_zeros() as usize;
        check_capacity(qubits)?;
        Ok(Statevector { qubits, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn ry(&mut self, q: usize, theta: f64) {
        let (s, c) = (0.5 * theta).sin_cos();
        let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
        self.single(q, [[c, -s], [s, c]]);
    }

    pub fn rz(&mut self, q: usize, theta: f64) {
        let e = Complex64::from_polar(1.0, 0.5 * theta);
        let zero = Complex64::new(0.0, 0.0);
        self.single(q, [[e.conj(), zero], [zero, e]]);
    }

    pub fn hadamard(&mut self, q: usize) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.single(q, [[h, h], [h, -h]]);
    }

    /// S† gate, diag(1, −i).
    pub fn s_dagger(&mut self, q: usize) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        self.single(q, [[one, zero], [zero, Complex64::new(0.0, -1.0)]]);
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
    }

    /// H|ψ⟩ without forming the matrix.
    pub fn apply_sum(&self, h: &PauliSum) -> Result<Statevector> {
        check_qubits(h, self)?;
        Ok(Statevector {
            qubits: self.qubits,
            amplitudes: apply_pauli_sum(h, &self.amplitudes),
        })
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn check_qubits(h: &PauliSum, state: &Statevector) -> Result<()> {
    if h.qubits() != state.qubits {
        return Err(Error::Dimension(format!(
            "operator on {} qubits, state on {}",
            h.qubits(),
            state.qubits
        )));
    }
    Ok(())
}

/// out[c] = Σ_t c_t ⟨c|P_t|ψ⟩, evaluated row by row.
pub(crate) fn apply_pauli_sum(h: &PauliSum, psi: &[Complex64]) -> Vec<Complex64> {
    let terms = h.terms();
    let row = |c: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            let b = c as u64 ^ t.string.x;
            let (phase, _) = t.string.apply_to_basis(b);
            acc += phase * t.coefficient * psi[b as usize];
        }
        acc
    };
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if psi.len() >= 1 << 10 {
            out.par_iter_mut().enumerate().for_each(|(c, o)| *o = row(c));
            return out;
        }
    }
    for (c, o) in out.iter_mut().enumerate() {
        *o = row(c);
    }
    out
}

/// ⟨ψ|H|ψ⟩ for a Hermitian Pauli sum.
pub fn expectation(h: &PauliSum, state: &Statevector) -> Result<f64> {
    check_qubits(h, state)?;
    let hpsi = apply_pauli_sum(h, &state.amplitudes);
    let value: Complex64 = state
        .amplitudes
        .iter()
        .zip(&hpsi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let scale = 1.0 + value.re.abs();
    if value.im.abs() > 1e-10 * scale || !value.re.is_finite() {
        return Err(Error::Numerical(format!(
            "expectation {value} is not real"
        )));
    }
    Ok(value.re)
}

/// Layered ansatz: rotation layer 0, then `depth` × (entangler, rotation layer).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Circuit {
    pub qubits: usize,
    pub depth: usize,
    pub rotation: Rotation,
    pub entangler: Entangler,
}

impl Circuit {
    pub fn new(qubits: usize, depth: usize, rotation: Rotation, entangler: Entangler) -> Result<Self> {
        check_capacity(qubits)?;
        if qubits == 0 {
            return Err(Error::Dimension("circuit needs at least one qubit".into()));
        }
        Ok(Circuit {
            qubits,
            depth,
            rotation,
            entangler,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.qubits * (self.depth + 1) * self.rotation.angles_per_qubit()
    }

    /// Index of the all-ones basis state.
    pub fn all_ones(&self) -> u64 {
        if self.qubits == 64 {
            u64::MAX
        } else {
            (1u64 << self.qubits) - 1
        }
    }

    fn rotation_layer(&self, state: &mut Statevector, theta: &[f64]) {
        let k = self.rotation.angles_per_qubit();
        for q in 0..self.qubits {
            state.ry(q, theta[q * k]);
            if self.rotation == Rotation::RyRz {
                state.rz(q, theta[q * k + 1]);
            }
        }
    }

    fn entangle(&self, state: &mut Statevector) {
        match self.entangler {
            Entangler::AllToAll => {
                for i in 0..self.qubits {
                    for j in i + 1..self.qubits {
                        state.cnot(i, j);
                    }
                }
            }
            Entangler::Linear => {
                for q in 0..self.qubits.saturating_sub(1) {
                    state.cnot(q, q + 1);
                }
            }
        }
    }

    /// Prepare U(θ)|initial⟩.
    pub fn apply(&self, theta: &[f64], initial: u64) -> Result<Statevector> {
        if theta.len() != self.parameter_count() {
            return Err(Error::Dimension(format!(
                "circuit takes {} angles, got {}",
                self.parameter_count(),
                theta.len()
            )));
        }
        let mut state = Statevector::basis(self.qubits, initial)?;
        let per_layer = self.qubits * self.rotation.angles_per_qubit();
        let mut layers = theta.chunks(per_layer);
        self.rotation_layer(&mut state, layers.next().unwrap_or(&[]));
        for layer in layers {
            self.entangle(&mut state);
            self.rotation_layer(&mut state, layer);
        }
        Ok(state)
    }
}
