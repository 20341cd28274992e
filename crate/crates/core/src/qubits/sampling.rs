//! Shot-noise estimates of Pauli-sum expectations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::circuit::Statevector;
use super::pauli::{PauliString, PauliSum, PauliTerm};
use crate::error::{Error, Result};

/// Greedy qubit-wise-commuting partition of the non-identity terms, in term order.
pub fn qubit_wise_groups(h: &PauliSum) -> Vec<Vec<PauliTerm>> {
    let mut groups: Vec<(PauliString, Vec<PauliTerm>)> = Vec::new();
    for t in h.terms().iter().filter(|t| !t.string.is_identity()) {
        match groups
            .iter_mut()
            .find(|(basis, _)| basis.qubit_wise_commutes(&t.string))
        {
            Some((basis, members)) => {
                let s = t.string.support();
                basis.x |= t.string.x & s;
                basis.z |= t.string.z & s;
                members.push(*t);
            }
            None => groups.push((t.string, vec![*t])),
        }
    }
    groups.into_iter().map(|(_, m)| m).collect()
}

/// Draw a multinomial sample of `shots` outcomes by conditional binomials.
pub(crate) fn multinomial(rng: &mut ChaCha8Rng, probabilities: &[f64], shots: u64) -> Vec<u64> {
    let mut counts = vec![0; probabilities.len()];
    let mut remaining = shots;
    let mut mass: f64 = probabilities.iter().sum();
    for (i, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let ratio = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 1.0 };
        let n = if ratio >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, ratio)
                .map(|d| d.sample(rng))
                .unwrap_or(0)
        };
        counts[i] = n;
        remaining -= n;
        mass -= p;
    }
    if remaining > 0 {
        // Rounding left the tail empty; give the rest to the last outcome with weight.
        if let Some(i) = probabilities.iter().rposition(|&p| p > 0.0) {
            counts[i] += remaining;
        }
    }
    counts
}

/// Estimate ⟨H⟩ from `shots` measurements per qubit-wise-commuting group.
/// Returns (mean, standard error); deterministic for a given seed.
pub fn sampled_expectation(
    h: &PauliSum,
    state: &Statevector,
    shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    if h.qubits() != state.qubits() {
        return Err(Error::Dimension("operator and state sizes differ".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = h.constant();
    let mut variance = 0.0;
    for group in qubit_wise_groups(h) {
        let mut rotated = state.clone();
        for q in 0..h.qubits() {
            let axis = group
                .iter()
                .map(|t| t.string.letter(q))
                .find(|&c| c != 'I')
                .unwrap_or('I');
            match axis {
                'X' => rotated.hadamard(q),
                'Y' => {
                    rotated.s_dagger(q);
                    rotated.hadamard(q);
                }
                _ => {}
            }
        }
        let counts = multinomial(&mut rng, &rotated.probabilities(), shots);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for (b, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let value: f64 = group
                .iter()
                .map(|t| {
                    let parity = (b as u64 & t.string.support()).count_ones() & 1;
                    if parity == 0 {
                        t.coefficient
                    } else {
                        -t.coefficient
                    }
                })
                .sum();
            sum += n as f64 * value;
            sum_sq += n as f64 * value * value;
        }
        let n = shots as f64;
        let m = sum / n;
        mean += m;
        if shots > 1 {
            let var = ((sum_sq - n * m * m) / (n - 1.0)).max(0.0);
            variance += var / n;
        }
    }
    Ok((mean, variance.sqrt()))
}
