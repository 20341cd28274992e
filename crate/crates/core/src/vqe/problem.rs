//! The alchemical qubit Hamiltonian family H(α), H_C(α) as a fixed set of
//! Pauli-sum components with α-dependent weights.

use nalgebra::DMatrix;

use crate::alchemy::{ActiveSpace, AlchemicalSystem, AlphaWeights, FermionHamiltonian, Scaffold};
use crate::error::{Error, Result};
use crate::qubits::{
    expectation, jordan_wigner, number_penalty, one_body_to_pauli, sampled_expectation, PauliSum,
    Statevector,
};
use crate::units::{distance, point_to_bohr};

/// Quadratic particle-number penalty weight·(N̂ − target)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberPenalty {
    pub target: f64,
    pub weight: f64,
}

/// Expectation values of every component on one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    pub base: f64,
    pub sites: Vec<Vec<f64>>,
    pub field: f64,
    pub penalty: f64,
    /// Standard error of the assembled estimate when sampled; 0 when exact.
    pub stderr: Vec<f64>,
}

/// Expectation mode: exact statevector or finite shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Exact,
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct AlchemicalProblem {
    pub scaffold: Scaffold,
    qubits: usize,
    base: PauliSum,
    sites: Vec<Vec<PauliSum>>,
    field: PauliSum,
    penalty: Option<(NumberPenalty, PauliSum)>,
    valence: Vec<Vec<f64>>,
    inverse_distance: DMatrix<f64>,
    field_potential: Vec<f64>,
}

fn spin_expand(h: &DMatrix<f64>) -> DMatrix<f64> {
    let m = 2 * h.nrows();
    DMatrix::from_fn(m, m, |p, q| if p % 2 == q % 2 { h[(p / 2, q / 2)] } else { 0.0 })
}

impl AlchemicalProblem {
    pub fn new(
        system: &AlchemicalSystem,
        active: &ActiveSpace,
        penalty: Option<NumberPenalty>,
    ) -> Result<Self> {
        let (kinetic, sites, field) = active.blocks();
        let base = jordan_wigner(&FermionHamiltonian::from_spatial(0.0, kinetic, active.eri()))?;
        let qubits = base.qubits();
        let sites = sites
            .iter()
            .map(|row| row.iter().map(|m| one_body_to_pauli(&spin_expand(m))).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let field = one_body_to_pauli(&spin_expand(field))?;
        let positions: Vec<[f64; 3]> = system
            .scaffold
            .sites()
            .iter()
            .map(|s| point_to_bohr(s.position))
            .collect();
        let n = positions.len();
        let mut inverse_distance = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let r = distance(positions[i], positions[j]);
                    if r < 1e-8 {
                        return Err(Error::CoincidentSites(i.min(j), i.max(j)));
                    }
                    inverse_distance[(i, j)] = 1.0 / r;
                }
            }
        }
        let field_potential = positions
            .iter()
            .map(|&r| {
                system
                    .field
                    .charges
                    .iter()
                    .map(|c| c.charge / distance(r, point_to_bohr(c.position)))
                    .sum()
            })
            .collect();
        let penalty = penalty
            .filter(|p| p.weight > 0.0)
            .map(|p| (p, number_penalty(qubits, p.target, p.weight)));
        Ok(AlchemicalProblem {
            scaffold: system.scaffold.clone(),
            qubits,
            base,
            sites,
            field,
            penalty,
            valence: system.integrals.valence_charges.clone(),
            inverse_distance,
            field_potential,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn shape(&self) -> Vec<usize> {
        self.valence.iter().map(Vec::len).collect()
    }

    pub fn penalty(&self) -> Option<NumberPenalty> {
        self.penalty.as_ref().map(|(p, _)| *p)
    }

    fn check(&self, alpha: &AlphaWeights) -> Result<()> {
        if alpha.shape() != self.shape() {
            return Err(Error::Dimension(format!(
                "weights shaped {:?}, problem {:?}",
                alpha.shape(),
                self.shape()
            )));
        }
        Ok(())
    }

    fn mean_charges(&self, alpha: &AlphaWeights) -> Vec<f64> {
        alpha
            .sites()
            .iter()
            .zip(&self.valence)
            .map(|(a, z)| a.iter().zip(z).map(|(a, z)| a * z).sum())
            .collect()
    }

    /// (V_nn, V_nq) at weights `alpha`.
    pub fn nuclear(&self, alpha: &AlphaWeights) -> (f64, f64) {
        let z = self.mean_charges(alpha);
        let mut v_nn = 0.0;
        for i in 0..z.len() {
            for j in 0..i {
                v_nn += z[i] * z[j] * self.inverse_distance[(i, j)];
            }
        }
        let v_nq = z.iter().zip(&self.field_potential).map(|(z, p)| z * p).sum();
        (v_nn, v_nq)
    }

    /// One-body field operator V_eq (no constant).
    pub fn field_operator(&self) -> &PauliSum {
        &self.field
    }

    pub fn penalty_operator(&self) -> Option<&PauliSum> {
        self.penalty.as_ref().map(|(_, p)| p)
    }

    /// ∂V_nq/∂α^I_s = Z̃_s Σ_k q_k/|R_I − R̃_k|.
    pub fn field_nuclear_gradient(&self) -> Vec<Vec<f64>> {
        self.valence
            .iter()
            .zip(&self.field_potential)
            .map(|(z, p)| z.iter().map(|z| z * p).collect())
            .collect()
    }

    /// Full qubit operator of the vacuum (`charged = false`) or charged system,
    /// penalty included.
    pub fn hamiltonian(&self, alpha: &AlphaWeights, charged: bool) -> Result<PauliSum> {
        self.check(alpha)?;
        let (v_nn, v_nq) = self.nuclear(alpha);
        let constant = PauliSum::identity(self.qubits, if charged { v_nn + v_nq } else { v_nn });
        let mut parts: Vec<(f64, &PauliSum)> = vec![(1.0, &self.base), (1.0, &constant)];
        for (w, ops) in alpha.sites().iter().zip(&self.sites) {
            for (&a, op) in w.iter().zip(ops) {
                parts.push((a, op));
            }
        }
        if charged {
            parts.push((1.0, &self.field));
        }
        if let Some((_, p)) = &self.penalty {
            parts.push((1.0, p));
        }
        Ok(PauliSum::linear_combination(self.qubits, parts))
    }

    /// Component expectations on `state`.
    pub fn components(&self, state: &Statevector, estimator: Estimator) -> Result<Components> {
        let mut stderr = Vec::new();
        let mut counter = 0u64;
        let mut eval = |h: &PauliSum| -> Result<f64> {
            match estimator {
                Estimator::Exact => expectation(h, state),
                Estimator::Shots { shots, seed } => {
                    counter += 1;
                    let (m, e) = sampled_expectation(
                        h,
                        state,
                        shots,
                        seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(counter),
                    )?;
                    stderr.push(e);
                    Ok(m)
                }
            }
        };
        let base = eval(&self.base)?;
        let sites = self
            .sites
            .iter()
            .map(|row| row.iter().map(&mut eval).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let field = eval(&self.field)?;
        let penalty = match &self.penalty {
            Some((_, p)) => eval(p)?,
            None => 0.0,
        };
        Ok(Components {
            base,
            sites,
            field,
            penalty,
            stderr,
        })
    }

    /// ⟨H(α)⟩ or ⟨H_C(α)⟩ assembled from component expectations.
    pub fn energy(&self, c: &Components, alpha: &AlphaWeights, charged: bool) -> f64 {
        let (v_nn, v_nq) = self.nuclear(alpha);
        let mut e = c.base + v_nn + c.penalty;
        for (w, v) in alpha.sites().iter().zip(&c.sites) {
            e += w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
        if charged {
            e += c.field + v_nq;
        }
        e
    }

    /// ∂⟨H⟩/∂α^I_s (or of ⟨H_C⟩) at fixed state, on the affine extension.
    pub fn alpha_gradient(&self, c: &Components, alpha: &AlphaWeights, charged: bool) -> Vec<Vec<f64>> {
        let z = self.mean_charges(alpha);
        (0..z.len())
            .map(|i| {
                let coupling: f64 = (0..z.len())
                    .filter(|&j| j != i)
                    .map(|j| z[j] * self.inverse_distance[(i, j)])
                    .sum::<f64>()
                    + if charged { self.field_potential[i] } else { 0.0 };
                c.sites[i]
                    .iter()
                    .zip(&self.valence[i])
                    .map(|(e, zs)| e + zs * coupling)
                    .collect()
            })
            .collect()
    }
}
