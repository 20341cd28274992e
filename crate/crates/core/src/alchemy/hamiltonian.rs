//! α-dependent one-electron operators, nuclear constants and the
//! second-quantized alchemical Hamiltonian in a frozen active space.

use nalgebra::{DMatrix, SymmetricEigen};

use super::system::{AlphaWeights, ChargeField, Scaffold};
use crate::basis::{build_union_basis, BasisSet};
use crate::error::{Error, Result};
use crate::integrals::{compute_all, AlchemicalIntegrals, CorePotential, EriTensor};
use crate::units::{distance, point_to_bohr};

/// Default eigenvalue cutoff for canonical orthogonalization.
pub const DEFAULT_OVERLAP_THRESHOLD: f64 = 1e-8;

fn check_shape(ints: &AlchemicalIntegrals, alpha: &AlphaWeights) -> Result<()> {
    let shape: Vec<usize> = ints.nuclear.iter().map(Vec::len).collect();
    if alpha.shape() != shape {
        return Err(Error::Dimension(format!(
            "weights shaped {:?} for integrals shaped {shape:?}",
            alpha.shape()
        )));
    }
    Ok(())
}

/// h(α) = T + Σ_{I,s} α^I_s (V_en[I][s] + V_core[I][s]) (+ V_eq when `field_on`).
pub fn core_matrix(
    ints: &AlchemicalIntegrals,
    alpha: &AlphaWeights,
    field_on: bool,
) -> Result<DMatrix<f64>> {
    check_shape(ints, alpha)?;
    let mut h = ints.kinetic.clone();
    for (i, weights) in alpha.sites().iter().enumerate() {
        for (s, &w) in weights.iter().enumerate() {
            if w != 0.0 {
                h += (&ints.nuclear[i][s] + &ints.core[i][s]) * w;
            }
        }
    }
    if field_on {
        h += &ints.field;
    }
    Ok(h)
}

/// Weighted valence charge Z̄_I(α) = Σ_s α^I_s Z̃_s per site.
fn mean_site_charges(scaffold: &Scaffold, alpha: &AlphaWeights) -> Vec<f64> {
    scaffold
        .sites()
        .iter()
        .zip(alpha.sites())
        .map(|(site, w)| {
            site.species
                .iter()
                .zip(w)
                .map(|(sp, a)| a * sp.valence_charge)
                .sum()
        })
        .collect()
}

/// Nuclear repulsion V_nn and nucleus–field interaction V_nq in hartree,
/// using the weighted site charges Z̄_I(α).
pub fn nuclear_terms(
    scaffold: &Scaffold,
    alpha: &AlphaWeights,
    field: &ChargeField,
) -> Result<(f64, f64)> {
    if alpha.shape() != scaffold.species_counts() {
        return Err(Error::Dimension("weights do not match scaffold".into()));
    }
    let charges = mean_site_charges(scaffold, alpha);
    let positions: Vec<[f64; 3]> = scaffold
        .sites()
        .iter()
        .map(|s| point_to_bohr(s.position))
        .collect();
    let mut v_nn = 0.0;
    for i in 0..positions.len() {
        for j in 0..i {
            let r = distance(positions[i], positions[j]);
            if r < 1e-8 {
                return Err(Error::CoincidentSites(j, i));
            }
            v_nn += charges[i] * charges[j] / r;
        }
    }
    let mut v_nq = 0.0;
    for c in &field.charges {
        let rc = point_to_bohr(c.position);
        for (z, &r) in charges.iter().zip(&positions) {
            let d = distance(r, rc);
            if d < 1e-8 {
                return Err(Error::Numerical(
                    "external charge coincides with a site".into(),
                ));
            }
            v_nq += z * c.charge / d;
        }
    }
    Ok((v_nn, v_nq))
}

/// Deterministic sign: the first component with magnitude above 1e-12 is positive.
pub(crate) fn fix_sign(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        if let Some(&x) = col.iter().find(|x| x.abs() > 1e-12) {
            if x < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Eigenpairs sorted by eigenvalue (ascending unless `descending`).
pub(crate) fn sorted_eigen(m: &DMatrix<f64>, descending: bool) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        let c = eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]);
        if descending {
            c.reverse()
        } else {
            c
        }
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Canonical orthogonalization: eigenvectors of S with eigenvalue ≥ `threshold`,
/// scaled by λ^{-1/2}, in descending eigenvalue order.
pub fn orthogonalize(overlap: &DMatrix<f64>, threshold: f64) -> Result<DMatrix<f64>> {
    let (values, mut vectors) = sorted_eigen(overlap, true);
    fix_sign(&mut vectors);
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] >= threshold).collect();
    if keep.is_empty() {
        return Err(Error::DegenerateBasis { threshold });
    }
    let cols: Vec<_> = keep
        .iter()
        .map(|&i| vectors.column(i) / values[i].sqrt())
        .collect();
    Ok(DMatrix::from_columns(&cols))
}

/// A frozen set of orthonormal orbitals over the union basis together with
/// every integral block projected onto it.
#[derive(Debug, Clone)]
pub struct ActiveSpace {
    /// N×K orbital coefficients, Xᵀ S X = 1.
    pub orbitals: DMatrix<f64>,
    /// Eigenvalues of the reference core matrix for the kept orbitals.
    pub orbital_energies: Vec<f64>,
    pub reference: AlphaWeights,
    /// rank(S, τ) of the union basis.
    pub rank: usize,
    kinetic: DMatrix<f64>,
    sites: Vec<Vec<DMatrix<f64>>>,
    field: DMatrix<f64>,
    eri: EriTensor,
}

impl ActiveSpace {
    pub fn size(&self) -> usize {
        self.orbitals.ncols()
    }

    pub fn spin_orbitals(&self) -> usize {
        2 * self.size()
    }

    /// Transform an N×N operator into the active orbitals.
    pub fn project(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.orbitals.transpose() * m * &self.orbitals
    }

    /// Active-space two-electron integrals (chemists' notation).
    pub fn eri(&self) -> &EriTensor {
        &self.eri
    }

    /// Active-space core matrix h(α); affine in α by construction.
    pub fn core_matrix(&self, alpha: &AlphaWeights, field_on: bool) -> Result<DMatrix<f64>> {
        let shape: Vec<usize> = self.sites.iter().map(Vec::len).collect();
        if alpha.shape() != shape {
            return Err(Error::Dimension("weights do not match active space".into()));
        }
        let mut h = self.kinetic.clone();
        for (i, w) in alpha.sites().iter().enumerate() {
            for (s, &a) in w.iter().enumerate() {
                if a != 0.0 {
                    h += &self.sites[i][s] * a;
                }
            }
        }
        if field_on {
            h += &self.field;
        }
        Ok(h)
    }

    /// Projected T, per-(site, species) V_en + V_core and V_eq blocks.
    pub fn blocks(&self) -> (&DMatrix<f64>, &[Vec<DMatrix<f64>>], &DMatrix<f64>) {
        (&self.kinetic, &self.sites, &self.field)
    }
}

/// Orthogonalize, diagonalize the reference vacuum core matrix h(α₀) in the
/// orthonormal basis and keep the `k` lowest orbitals.
pub fn build_active_space(
    ints: &AlchemicalIntegrals,
    reference: &AlphaWeights,
    k: usize,
    threshold: f64,
) -> Result<ActiveSpace> {
    let x = orthogonalize(&ints.overlap, threshold)?;
    let rank = x.ncols();
    if k == 0 || k > rank {
        return Err(Error::ActiveSpaceTooLarge {
            requested: k,
            available: rank,
        });
    }
    let h = core_matrix(ints, reference, false)?;
    let h_orth = x.transpose() * &h * &x;
    let h_orth = (&h_orth + h_orth.transpose()) * 0.5;
    let (energies, mut u) = sorted_eigen(&h_orth, false);
    fix_sign(&mut u);
    let orbitals = &x * u.columns(0, k);
    let project = |m: &DMatrix<f64>| orbitals.transpose() * m * &orbitals;
    Ok(ActiveSpace {
        kinetic: project(&ints.kinetic),
        sites: ints
            .nuclear
            .iter()
            .zip(&ints.core)
            .map(|(ns, cs)| ns.iter().zip(cs).map(|(n, c)| project(&(n + c))).collect())
            .collect(),
        field: project(&ints.field),
        eri: ints.eri.transform(&orbitals),
        orbital_energies: energies[..k].to_vec(),
        reference: reference.clone(),
        rank,
        orbitals,
    })
}

/// Second-quantized Hamiltonian over 2K spin orbitals, interleaved
/// (spin orbital 2p is orbital p spin up, 2p + 1 spin down):
///
///   H = c + Σ_pq h_pq a†_p a_q + ½ Σ_pqrs v_pqrs a†_p a†_q a_r a_s
///
/// with v_pqrs = (ps|qr) over spatial orbitals, zero unless spins of p, s
/// and of q, r agree.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionHamiltonian {
    pub constant: f64,
    pub one_body: DMatrix<f64>,
    two_body: Vec<f64>,
    modes: usize,
}

impl FermionHamiltonian {
    pub fn new(constant: f64, one_body: DMatrix<f64>, two_body: Vec<f64>) -> Result<Self> {
        let modes = one_body.nrows();
        if one_body.ncols() != modes || two_body.len() != modes.pow(4) {
            return Err(Error::Dimension("inconsistent fermion operator sizes".into()));
        }
        Ok(FermionHamiltonian {
            constant,
            one_body,
            two_body,
            modes,
        })
    }

    /// Spin-orbital expansion of spatial integrals `h` (K×K) and `g` (K⁴).
    pub fn from_spatial(constant: f64, h: &DMatrix<f64>, g: &EriTensor) -> Self {
        let k = h.nrows();
        let m = 2 * k;
        let one_body = DMatrix::from_fn(m, m, |p, q| {
            if p % 2 == q % 2 {
                h[(p / 2, q / 2)]
            } else {
                0.0
            }
        });
        let mut two_body = vec![0.0; m.pow(4)];
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        if p % 2 == s % 2 && q % 2 == r % 2 {
                            two_body[((p * m + q) * m + r) * m + s] =
                                g.get(p / 2, s / 2, q / 2, r / 2);
                        }
                    }
                }
            }
        }
        FermionHamiltonian {
            constant,
            one_body,
            two_body,
            modes: m,
        }
    }

    /// Number of spin orbitals.
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let m = self.modes;
        self.two_body[((p * m + q) * m + r) * m + s]
    }

    pub fn two_body_data(&self) -> &[f64] {
        &self.two_body
    }

    /// Largest elementwise difference, constant included.
    pub fn max_difference(&self, other: &FermionHamiltonian) -> f64 {
        let c = (self.constant - other.constant).abs();
        let h = (&self.one_body - &other.one_body).abs().max();
        let v = self
            .two_body
            .iter()
            .zip(&other.two_body)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.max(h).max(v)
    }
}

/// A scaffold, a charge field, the union basis and its integrals.
#[derive(Debug, Clone)]
pub struct AlchemicalSystem {
    pub scaffold: Scaffold,
    pub field: ChargeField,
    pub basis: BasisSet,
    pub integrals: AlchemicalIntegrals,
}

impl AlchemicalSystem {
    pub fn new(scaffold: Scaffold, field: ChargeField, core: &CorePotential) -> Result<Self> {
        let basis = build_union_basis(&scaffold);
        let integrals = compute_all(&basis, &scaffold, &field, core)?;
        Ok(AlchemicalSystem {
            scaffold,
            field,
            basis,
            integrals,
        })
    }

    /// Reuse precomputed integrals (e.g. loaded from a cache).
    pub fn from_parts(
        scaffold: Scaffold,
        field: ChargeField,
        integrals: AlchemicalIntegrals,
    ) -> Result<Self> {
        let basis = build_union_basis(&scaffold);
        if integrals.dim() != basis.len() {
            return Err(Error::Shape {
                name: "S".into(),
                expected: vec![basis.len(); 2],
                found: vec![integrals.dim(); 2],
            });
        }
        Ok(AlchemicalSystem {
            scaffold,
            field,
            basis,
            integrals,
        })
    }

    pub fn core_matrix(&self, alpha: &AlphaWeights, field_on: bool) -> Result<DMatrix<f64>> {
        core_matrix(&self.integrals, alpha, field_on)
    }

    pub fn nuclear_terms(&self, alpha: &AlphaWeights) -> Result<(f64, f64)> {
        nuclear_terms(&self.scaffold, alpha, &self.field)
    }

    /// Active space frozen at the uniform weights.
    pub fn uniform_active_space(&self, k: usize, threshold: f64) -> Result<ActiveSpace> {
        build_active_space(
            &self.integrals,
            &AlphaWeights::uniform(&self.scaffold),
            k,
            threshold,
        )
    }

    /// Hamiltonian of the vacuum system (`field_on = false`) or of the system
    /// in the external field, at weights `alpha`.
    pub fn second_quantize(
        &self,
        active: &ActiveSpace,
        alpha: &AlphaWeights,
        field_on: bool,
    ) -> Result<FermionHamiltonian> {
        let h = active.core_matrix(alpha, field_on)?;
        let (v_nn, v_nq) = self.nuclear_terms(alpha)?;
        let constant = if field_on { v_nn + v_nq } else { v_nn };
        Ok(FermionHamiltonian::from_spatial(constant, &h, active.eri()))
    }
}
