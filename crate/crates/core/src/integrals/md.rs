//! McMurchie–Davidson Hermite machinery for primitive Cartesian Gaussians.

use super::boys::boys_array;

/// Largest angular momentum per index handled by the tables (p shells plus
/// the +2 shift used by the kinetic-energy formula).
const LMAX: usize = 3;
/// Largest total Hermite order: (pp|pp) needs 4.
pub(crate) const RMAX: usize = 4;

/// Hermite expansion coefficients E^{ij}_t for one Cartesian direction.
#[derive(Clone, Copy)]
pub(crate) struct HermiteTable {
    e: [[[f64; 2 * LMAX + 1]; LMAX + 1]; LMAX + 1],
}

impl HermiteTable {
    /// `q` = A_x − B_x, exponents `a` (on A) and `b` (on B).
    pub fn new(la: usize, lb: usize, q: f64, a: f64, b: f64) -> Self {
        let p = a + b;
        let mu = a * b / p;
        let xpa = -b * q / p;
        let xpb = a * q / p;
        let inv2p = 0.5 / p;
        let mut e = [[[0.0; 2 * LMAX + 1]; LMAX + 1]; LMAX + 1];
        e[0][0][0] = (-mu * q * q).exp();
        for i in 0..=la {
            for j in 0..=lb {
                if i == 0 && j == 0 {
                    continue;
                }
                let (prev, x) = if i > 0 {
                    (e[i - 1][j], xpa)
                } else {
                    (e[i][j - 1], xpb)
                };
                for t in 0..=(i + j) {
                    let lower = if t > 0 { prev[t - 1] } else { 0.0 };
                    let upper = if t + 1 <= 2 * LMAX { prev[t + 1] } else { 0.0 };
                    e[i][j][t] = inv2p * lower + x * prev[t] + (t + 1) as f64 * upper;
                }
            }
        }
        HermiteTable { e }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        self.e[i][j][t]
    }
}

/// Hermite Coulomb integrals R_{tuv} for t + u + v ≤ `order`.
pub(crate) struct CoulombTable {
    r: [[[f64; RMAX + 1]; RMAX + 1]; RMAX + 1],
}

impl CoulombTable {
    /// `alpha` is the reduced exponent, `pc` the vector P − C.
    pub fn new(order: usize, alpha: f64, pc: [f64; 3]) -> Self {
        debug_assert!(order <= RMAX);
        let r2 = pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2];
        let mut f = [0.0; RMAX + 1];
        boys_array(order, alpha * r2, &mut f);

        let zero = [[[0.0; RMAX + 1]; RMAX + 1]; RMAX + 1];
        let mut prev = zero;
        let mut factor = (-2.0 * alpha).powi(order as i32);
        // Level n holds R^n_{tuv} for t + u + v ≤ order − n.
        for n in (0..=order).rev() {
            let mut cur = zero;
            cur[0][0][0] = factor * f[n];
            for total in 1..=(order - n) {
                for t in 0..=total {
                    for u in 0..=(total - t) {
                        let v = total - t - u;
                        cur[t][u][v] = if t > 0 {
                            let a = if t > 1 { (t - 1) as f64 * prev[t - 2][u][v] } else { 0.0 };
                            a + pc[0] * prev[t - 1][u][v]
                        } else if u > 0 {
                            let a = if u > 1 { (u - 1) as f64 * prev[t][u - 2][v] } else { 0.0 };
                            a + pc[1] * prev[t][u - 1][v]
                        } else {
                            let a = if v > 1 { (v - 1) as f64 * prev[t][u][v - 2] } else { 0.0 };
                            a + pc[2] * prev[t][u][v - 1]
                        };
                    }
                }
            }
            prev = cur;
            factor /= -2.0 * alpha;
        }
        CoulombTable { r: prev }
    }

    #[inline]
    pub fn get(&self, t: usize, u: usize, v: usize) -> f64 {
        self.r[t][u][v]
    }
}

/// Gaussian product of two primitives expanded in Hermite functions:
/// the nonzero E^{ab}_{tuv} = E_x·E_y·E_z with the contraction weight folded in.
#[derive(Clone, Debug)]
pub(crate) struct HermitePair {
    pub p: f64,
    pub center: [f64; 3],
    pub order: usize,
    pub terms: Vec<([usize; 3], f64)>,
}

impl HermitePair {
    pub fn new(
        a: f64,
        ca: f64,
        pa: [u8; 3],
        ra: [f64; 3],
        b: f64,
        cb: f64,
        pb: [u8; 3],
        rb: [f64; 3],
    ) -> Self {
        let p = a + b;
        let center = [0, 1, 2].map(|k| (a * ra[k] + b * rb[k]) / p);
        let tables =
            [0, 1, 2].map(|k| HermiteTable::new(pa[k] as usize, pb[k] as usize, ra[k] - rb[k], a, b));
        let lim = [0, 1, 2].map(|k| (pa[k] + pb[k]) as usize);
        let mut terms = Vec::new();
        for t in 0..=lim[0] {
            let ex = tables[0].get(pa[0] as usize, pb[0] as usize, t);
            for u in 0..=lim[1] {
                let ey = tables[1].get(pa[1] as usize, pb[1] as usize, u);
                for v in 0..=lim[2] {
                    let ez = tables[2].get(pa[2] as usize, pb[2] as usize, v);
                    let w = ca * cb * ex * ey * ez;
                    if w != 0.0 {
                        terms.push(([t, u, v], w));
                    }
                }
            }
        }
        HermitePair {
            p,
            center,
            order: lim.iter().sum(),
            terms,
        }
    }
}

/// Primitive overlap and kinetic energy integrals (unweighted).
pub(crate) fn overlap_kinetic(
    a: f64,
    pa: [u8; 3],
    ra: [f64; 3],
    b: f64,
    pb: [u8; 3],
    rb: [f64; 3],
) -> (f64, f64) {
    let p = a + b;
    let norm = (std::f64::consts::PI / p).sqrt();
    let mut s1 = [0.0; 3];
    let mut t1 = [0.0; 3];
    for k in 0..3 {
        let i = pa[k] as usize;
        let j = pb[k] as usize;
        let table = HermiteTable::new(i, j + 2, ra[k] - rb[k], a, b);
        let s = |jj: usize| table.get(i, jj, 0) * norm;
        s1[k] = s(j);
        let mut t = -2.0 * b * b * s(j + 2) + b * (2 * j + 1) as f64 * s(j);
        if j >= 2 {
            t -= 0.5 * (j * (j - 1)) as f64 * s(j - 2);
        }
        t1[k] = t;
    }
    let overlap = s1[0] * s1[1] * s1[2];
    let kinetic = t1[0] * s1[1] * s1[2] + s1[0] * t1[1] * s1[2] + s1[0] * s1[1] * t1[2];
    (overlap, kinetic)
}

/// ∫ χ_pair(r) / |r − C| dr for a Hermite pair (positive quantity).
pub(crate) fn coulomb_potential(pair: &HermitePair, c: [f64; 3]) -> f64 {
    let pc = [0, 1, 2].map(|k| pair.center[k] - c[k]);
    let r = CoulombTable::new(pair.order, pair.p, pc);
    let sum: f64 = pair
        .terms
        .iter()
        .map(|&([t, u, v], w)| w * r.get(t, u, v))
        .sum();
    2.0 * std::f64::consts::PI / pair.p * sum
}

/// Electron repulsion between two Hermite pairs.
pub(crate) fn repulsion(left: &HermitePair, right: &HermitePair) -> f64 {
    let p = left.p;
    let q = right.p;
    let alpha = p * q / (p + q);
    let pq = [0, 1, 2].map(|k| left.center[k] - right.center[k]);
    let r = CoulombTable::new(left.order + right.order, alpha, pq);
    let mut sum = 0.0;
    for &([t, u, v], wl) in &left.terms {
        let mut inner = 0.0;
        for &([tau, nu, phi], wr) in &right.terms {
            let sign = if (tau + nu + phi) % 2 == 0 { 1.0 } else { -1.0 };
            inner += sign * wr * r.get(t + tau, u + nu, v + phi);
        }
        sum += wl * inner;
    }
    2.0 * std::f64::consts::PI.powf(2.5) / (p * q * (p + q).sqrt()) * sum
}
