//! Lowest eigenpair of a Pauli sum: dense diagonalization or restarted
//! Lanczos with full reorthogonalization on matrix-free products.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubits::{PauliSum, Statevector, MAX_STATE_QUBITS};

/// Registers below this size are diagonalized densely by default.
pub const DENSE_QUBIT_LIMIT: usize = 12;
/// Largest register accepted by the dense solver.
pub const DENSE_QUBIT_MAX: usize = 14;

const LANCZOS_RESIDUAL: f64 = 1e-9;
const LANCZOS_MEMORY: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Dense below 13 qubits, Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

/// Real matrix of `h` when no term has an odd number of Y factors.
pub fn dense_real(h: &PauliSum) -> Result<Option<DMatrix<f64>>> {
    if h.qubits() > DENSE_QUBIT_MAX {
        return Err(Error::Capacity {
            qubits: h.qubits(),
            limit: DENSE_QUBIT_MAX,
        });
    }
    if h.terms().iter().any(|t| t.string.y_count() % 2 == 1) {
        return Ok(None);
    }
    let dim = 1usize << h.qubits();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for t in h.terms() {
        for b in 0..dim as u64 {
            let (phase, out) = t.string.apply_to_basis(b);
            m[(out as usize, b as usize)] += phase.re * t.coefficient;
        }
    }
    Ok(Some(m))
}

fn dense_ground(h: &PauliSum) -> Result<(f64, Statevector)> {
    let (value, vector): (f64, Vec<Complex64>) = match dense_real(h)? {
        Some(m) => {
            let eig = SymmetricEigen::new(m);
            let i = eig.eigenvalues.imin();
            let v = eig.eigenvectors.column(i).iter().map(|&x| Complex64::new(x, 0.0)).collect();
            (eig.eigenvalues[i], v)
        }
        None => {
            let eig = SymmetricEigen::new(h.to_dense()?);
            let i = eig.eigenvalues.imin();
            (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect())
        }
    };
    Ok((value, Statevector::from_amplitudes(vector)?))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn lanczos_ground(h: &PauliSum) -> Result<(f64, Statevector)> {
    let qubits = h.qubits();
    if qubits > MAX_STATE_QUBITS {
        return Err(Error::Capacity {
            qubits,
            limit: MAX_STATE_QUBITS,
        });
    }
    let dim = 1usize << qubits;
    let krylov = (LANCZOS_MEMORY / (16 * dim)).clamp(8, 120).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let n0 = norm(&start);
    start.iter_mut().for_each(|x| *x /= n0);

    let apply = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        Ok(Statevector::from_amplitudes(v.to_vec())?
            .apply_sum(h)?
            .amplitudes()
            .to_vec())
    };

    let mut best = f64::INFINITY;
    for _ in 0..500 {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        loop {
            let j = basis.len() - 1;
            let mut w = apply(&basis[j])?;
            alpha.push(dot(&basis[j], &w).re);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if basis.len() == krylov || b < 1e-13 {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            basis.push(w);
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let k = eig.eigenvalues.imin();
        let s: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (v, &c) in basis.iter().zip(s.iter()) {
            ritz.iter_mut().zip(v).for_each(|(x, y)| *x += c * y);
        }
        let n = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= n);
        let hr = apply(&ritz)?;
        let theta = dot(&ritz, &hr).re;
        let residual = norm(
            &hr.iter()
                .zip(&ritz)
                .map(|(a, b)| a - b * theta)
                .collect::<Vec<_>>(),
        );
        if residual < LANCZOS_RESIDUAL * (1.0 + theta.abs()) {
            return Ok((theta, Statevector::from_amplitudes(ritz)?));
        }
        if !theta.is_finite() {
            break;
        }
        best = best.min(theta);
        start = ritz;
    }
    Err(Error::Numerical(format!(
        "Lanczos did not converge (best Ritz value {best})"
    )))
}

/// Smallest eigenvalue of `h` and a normalized eigenvector.
pub fn ground_state(h: &PauliSum, solver: Solver) -> Result<(f64, Statevector)> {
    let dense = match solver {
        Solver::Auto => h.qubits() <= DENSE_QUBIT_LIMIT,
        Solver::Dense => true,
        Solver::Lanczos => false,
    };
    if dense {
        dense_ground(h)
    } else {
        lanczos_ground(h)
    }
}

/// Smallest eigenvalue of `h`.
pub fn exact_ground_energy(h: &PauliSum) -> Result<f64> {
    ground_state(h, Solver::Auto).map(|(e, _)| e)
}

/// Run both solvers and fail if they disagree by more than `tolerance`.
pub fn cross_check(h: &PauliSum, tolerance: f64) -> Result<f64> {
    let (dense, _) = ground_state(h, Solver::Dense)?;
    let (iterative, _) = ground_state(h, Solver::Lanczos)?;
    if (dense - iterative).abs() > tolerance {
        return Err(Error::Numerical(format!(
            "dense {dense} and Lanczos {iterative} ground energies disagree"
        )));
    }
    Ok(dense)
}
