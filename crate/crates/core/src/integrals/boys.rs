//! Boys function F_n(x) = ∫₀¹ t^{2n} exp(−x t²) dt.

use crate::error::{Error, Result};

/// Highest order supported by [`boys`].
pub const MAX_ORDER: usize = 16;

const ASYMPTOTIC_THRESHOLD: f64 = 35.0;

/// F_n(x) for a single order.
pub fn boys(n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("Boys function needs x >= 0, got {x}")));
    }
    if n > MAX_ORDER {
        return Err(Error::Domain(format!("Boys order {n} exceeds {MAX_ORDER}")));
    }
    let mut out = [0.0; MAX_ORDER + 1];
    boys_array(n, x, &mut out[..=n]);
    Ok(out[n])
}

/// Fill `out[k] = F_k(x)` for k = 0..=nmax. `x` must be non-negative.
pub(crate) fn boys_array(nmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() > nmax);
    let ex = (-x).exp();
    if x < ASYMPTOTIC_THRESHOLD {
        // Series at the top order, then downward recursion.
        let denom0 = (2 * nmax + 1) as f64;
        let mut term = 1.0 / denom0;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= 2.0 * x / (denom0 + 2.0 * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        out[nmax] = ex * sum;
        for n in (1..=nmax).rev() {
            out[n - 1] = (2.0 * x * out[n] + ex) / (2 * n - 1) as f64;
        }
    } else {
        // erf(√x) = 1 to double precision here; upward recursion is stable for n < x.
        out[0] = 0.5 * (std::f64::consts::PI / x).sqrt();
        for n in 0..nmax {
            out[n + 1] = ((2 * n + 1) as f64 * out[n] - ex) / (2.0 * x);
        }
    }
}
