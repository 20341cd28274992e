//! Euclidean projection onto the probability simplex.

use crate::alchemy::AlphaWeights;

/// Nearest point of {x ≥ 0, Σx = 1} to `v` (sort-and-threshold algorithm).
pub fn project_vector(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (i, &x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            tau = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|x| (x - tau).max(0.0)).collect();
    // Remove the last rounding error so the sum is 1 to machine precision.
    let sum: f64 = out.iter().sum();
    if let Some(i) = (0..out.len()).max_by(|&a, &b| out[a].total_cmp(&out[b])) {
        out[i] += 1.0 - sum;
    }
    out
}

/// Per-site projection of raw weights.
pub fn project_simplex(raw: &[Vec<f64>]) -> AlphaWeights {
    AlphaWeights::new(raw.iter().map(|v| project_vector(v)).collect())
        .expect("projection lands on the simplex")
}
