//! One- and two-electron integrals over contracted Cartesian Gaussians
//! (McMurchie–Davidson), and the full integral set for an alchemical system.
//!
//! Conventions: `point_attraction` returns ⟨a| −q/|r−C| |b⟩, i.e. negative
//! for a positive charge. Electron repulsion integrals use chemists'
//! notation (ab|cd) = ∫∫ a(1)b(1) r₁₂⁻¹ c(2)d(2).

pub mod archive;
pub mod boys;
mod core;
mod md;

use nalgebra::DMatrix;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::alchemy::{ChargeField, Scaffold};
use crate::basis::{BasisFunction, BasisSet};
use crate::error::{Error, Result};
use crate::units::point_to_bohr;

pub use self::archive::{Tensor, TensorArchive};
pub use self::boys::boys;
pub use self::core::frozen_core_potential;
use self::md::HermitePair;

pub fn overlap(a: &BasisFunction, b: &BasisFunction) -> f64 {
    overlap_kinetic(a, b).0
}

pub fn kinetic(a: &BasisFunction, b: &BasisFunction) -> f64 {
    overlap_kinetic(a, b).1
}

fn overlap_kinetic(a: &BasisFunction, b: &BasisFunction) -> (f64, f64) {
    let mut s = 0.0;
    let mut t = 0.0;
    for pa in &a.primitives {
        for pb in &b.primitives {
            let (ps, pt) =
                md::overlap_kinetic(pa.exponent, a.powers, a.center, pb.exponent, b.powers, b.center);
            let w = pa.coefficient * pb.coefficient;
            s += w * ps;
            t += w * pt;
        }
    }
    (s, t)
}

fn hermite_pairs(a: &BasisFunction, b: &BasisFunction) -> Vec<HermitePair> {
    let mut out = Vec::with_capacity(a.primitives.len() * b.primitives.len());
    for pa in &a.primitives {
        for pb in &b.primitives {
            out.push(HermitePair::new(
                pa.exponent,
                pa.coefficient,
                a.powers,
                a.center,
                pb.exponent,
                pb.coefficient,
                b.powers,
                b.center,
            ));
        }
    }
    out
}

fn attraction_from_pairs(pairs: &[HermitePair], center: [f64; 3], charge: f64) -> f64 {
    if charge == 0.0 {
        return 0.0;
    }
    -charge * pairs.iter().map(|p| md::coulomb_potential(p, center)).sum::<f64>()
}

/// ⟨a| −charge/|r − center| |b⟩ with `center` in bohr.
pub fn point_attraction(a: &BasisFunction, b: &BasisFunction, center: [f64; 3], charge: f64) -> f64 {
    attraction_from_pairs(&hermite_pairs(a, b), center, charge)
}

pub fn eri(a: &BasisFunction, b: &BasisFunction, c: &BasisFunction, d: &BasisFunction) -> f64 {
    let left = hermite_pairs(a, b);
    let right = hermite_pairs(c, d);
    left.iter()
        .flat_map(|l| right.iter().map(move |r| md::repulsion(l, r)))
        .sum()
}

/// Dense ERI tensor, row-major over (i, j, k, l).
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    data: Vec<f64>,
}

impl EriTensor {
    pub fn zeros(n: usize) -> Self {
        EriTensor {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_data(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n * n {
            return Err(Error::Shape {
                name: "g".into(),
                expected: vec![n; 4],
                found: vec![data.len()],
            });
        }
        Ok(EriTensor { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Set (ij|kl) and its seven permutational partners.
    fn set_symmetric(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            self.set(a, b, c, d, v);
        }
    }

    /// Transform all four indices with the columns of `c` (N×K).
    pub fn transform(&self, c: &DMatrix<f64>) -> EriTensor {
        let n = self.n;
        let k = c.ncols();
        assert_eq!(c.nrows(), n);
        // Quarter transforms, each contracting the last index and rotating it to the front.
        let mut cur = self.data.clone();
        let mut dims = [n, n, n, n];
        for _ in 0..4 {
            let [d0, d1, d2, d3] = dims;
            let mut next = vec![0.0; k * d0 * d1 * d2];
            for a in 0..d0 {
                for b in 0..d1 {
                    for cc in 0..d2 {
                        let base = ((a * d1 + b) * d2 + cc) * d3;
                        for p in 0..k {
                            let mut s = 0.0;
                            for x in 0..d3 {
                                s += cur[base + x] * c[(x, p)];
                            }
                            next[((p * d0 + a) * d1 + b) * d2 + cc] = s;
                        }
                    }
                }
            }
            cur = next;
            dims = [k, d0, d1, d2];
        }
        EriTensor { n: k, data: cur }
    }
}

pub fn overlap_matrix(basis: &BasisSet) -> DMatrix<f64> {
    one_electron_matrix(basis, |a, b| overlap(a, b))
}

pub fn kinetic_matrix(basis: &BasisSet) -> DMatrix<f64> {
    one_electron_matrix(basis, |a, b| kinetic(a, b))
}

/// Attraction matrix to one point charge; `center` in bohr.
pub fn attraction_matrix(basis: &BasisSet, center: [f64; 3], charge: f64) -> DMatrix<f64> {
    one_electron_matrix(basis, |a, b| point_attraction(a, b, center, charge))
}

/// Attraction matrix to every charge of a field (positions converted from Å).
pub fn field_matrix(basis: &BasisSet, field: &ChargeField) -> DMatrix<f64> {
    let charges: Vec<([f64; 3], f64)> = field
        .charges
        .iter()
        .map(|c| (point_to_bohr(c.position), c.charge))
        .collect();
    one_electron_matrix(basis, |a, b| {
        let pairs = hermite_pairs(a, b);
        charges
            .iter()
            .map(|&(r, q)| attraction_from_pairs(&pairs, r, q))
            .sum()
    })
}

fn one_electron_matrix<F>(basis: &BasisSet, f: F) -> DMatrix<f64>
where
    F: Fn(&BasisFunction, &BasisFunction) -> f64 + Sync,
{
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let fs = &basis.functions;
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = pairs.par_iter().map(|&(i, j)| f(&fs[i], &fs[j])).collect();
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = pairs.iter().map(|&(i, j)| f(&fs[i], &fs[j])).collect();
    let mut m = DMatrix::zeros(n, n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

pub fn eri_tensor(basis: &BasisSet) -> EriTensor {
    let n = basis.len();
    let fs = &basis.functions;
    let pair_index: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let pair_data: Vec<Vec<HermitePair>> = pair_index
        .iter()
        .map(|&(i, j)| hermite_pairs(&fs[i], &fs[j]))
        .collect();
    let quartet = |ij: usize| -> Vec<(usize, usize, f64)> {
        (0..=ij)
            .map(|kl| {
                let v = pair_data[ij]
                    .iter()
                    .flat_map(|l| pair_data[kl].iter().map(move |r| md::repulsion(l, r)))
                    .sum();
                (ij, kl, v)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let values: Vec<Vec<(usize, usize, f64)>> =
        (0..pair_index.len()).into_par_iter().map(quartet).collect();
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Vec<(usize, usize, f64)>> = (0..pair_index.len()).map(quartet).collect();
    let mut g = EriTensor::zeros(n);
    for (ij, kl, v) in values.into_iter().flatten() {
        let (i, j) = pair_index[ij];
        let (k, l) = pair_index[kl];
        g.set_symmetric(i, j, k, l, v);
    }
    g
}

/// Source of the per-(site, species) core-potential blocks.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum CorePotential {
    /// Valence point charges only; the core blocks are zero.
    None,
    /// Frozen-core model built from the species' own STO-3G core functions.
    #[default]
    FrozenCore,
    /// Externally computed blocks named `V_ecp/<site>/<species>`; missing
    /// blocks are zero.
    Ingested(TensorArchive),
}

/// Every integral needed to assemble alchemical Hamiltonians over one union basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlchemicalIntegrals {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    /// Attraction to the valence charge of species s at site I: `nuclear[I][s]`.
    pub nuclear: Vec<Vec<DMatrix<f64>>>,
    /// Core-potential blocks `core[I][s]`.
    pub core: Vec<Vec<DMatrix<f64>>>,
    /// Attraction to the external charge field.
    pub field: DMatrix<f64>,
    pub eri: EriTensor,
    /// Valence charges Z̃ per site and species.
    pub valence_charges: Vec<Vec<f64>>,
}

impl AlchemicalIntegrals {
    pub fn dim(&self) -> usize {
        self.overlap.nrows()
    }

    /// Replace the field block, e.g. to reuse vacuum integrals for several fields.
    pub fn with_field(mut self, basis: &BasisSet, field: &ChargeField) -> Self {
        self.field = field_matrix(basis, field);
        self
    }

    pub fn to_archive(&self) -> TensorArchive {
        let mut a = TensorArchive::default();
        a.push(Tensor::from_matrix("S", &self.overlap));
        a.push(Tensor::from_matrix("T", &self.kinetic));
        for (i, site) in self.nuclear.iter().enumerate() {
            for (s, m) in site.iter().enumerate() {
                a.push(Tensor::from_matrix(format!("V_en/{i}/{s}"), m));
            }
        }
        for (i, site) in self.core.iter().enumerate() {
            for (s, m) in site.iter().enumerate() {
                a.push(Tensor::from_matrix(format!("V_ecp/{i}/{s}"), m));
            }
        }
        a.push(Tensor::from_matrix("V_eq", &self.field));
        let n = self.dim();
        a.push(Tensor::new("g", vec![n; 4], self.eri.data().to_vec()));
        for (i, z) in self.valence_charges.iter().enumerate() {
            a.push(Tensor::new(format!("Z/{i}"), vec![z.len()], z.clone()));
        }
        a
    }

    /// Rebuild from an archive written by [`Self::to_archive`], checking it
    /// against the species counts of `scaffold`.
    pub fn from_archive(archive: &TensorArchive, scaffold: &Scaffold) -> Result<Self> {
        let overlap = archive.require("S")?.to_matrix()?;
        let n = overlap.nrows();
        let square = |name: &str| -> Result<DMatrix<f64>> {
            let t = archive.require(name)?;
            check_dims(t, &[n, n])?;
            t.to_matrix()
        };
        let kinetic = square("T")?;
        let field = square("V_eq")?;
        let mut nuclear = Vec::new();
        let mut core = Vec::new();
        let mut valence_charges = Vec::new();
        for (i, count) in scaffold.species_counts().into_iter().enumerate() {
            nuclear.push(
                (0..count)
                    .map(|s| square(&format!("V_en/{i}/{s}")))
                    .collect::<Result<Vec<_>>>()?,
            );
            core.push(
                (0..count)
                    .map(|s| square(&format!("V_ecp/{i}/{s}")))
                    .collect::<Result<Vec<_>>>()?,
            );
            let z = archive.require(&format!("Z/{i}"))?;
            check_dims(z, &[count])?;
            valence_charges.push(z.data.clone());
        }
        let g = archive.require("g")?;
        check_dims(g, &[n; 4])?;
        Ok(AlchemicalIntegrals {
            overlap,
            kinetic,
            nuclear,
            core,
            field,
            eri: EriTensor::from_data(n, g.data.clone())?,
            valence_charges,
        })
    }
}

fn check_dims(t: &Tensor, expected: &[usize]) -> Result<()> {
    if t.dims != expected {
        return Err(Error::Shape {
            name: t.name.clone(),
            expected: expected.to_vec(),
            found: t.dims.clone(),
        });
    }
    Ok(())
}

/// Evaluate the complete integral set for `scaffold` in its union basis.
pub fn compute_all(
    basis: &BasisSet,
    scaffold: &Scaffold,
    field: &ChargeField,
    core_potential: &CorePotential,
) -> Result<AlchemicalIntegrals> {
    let n = basis.len();
    let overlap = overlap_matrix(basis);
    let kinetic = kinetic_matrix(basis);
    let eri = eri_tensor(basis);
    let field_block = field_matrix(basis, field);

    let mut nuclear = Vec::with_capacity(scaffold.len());
    let mut core = Vec::with_capacity(scaffold.len());
    let mut valence_charges = Vec::with_capacity(scaffold.len());
    for (i, site) in scaffold.sites().iter().enumerate() {
        let center = point_to_bohr(site.position);
        let unit = attraction_matrix(basis, center, 1.0);
        let mut site_nuclear = Vec::new();
        let mut site_core = Vec::new();
        for (s, species) in site.species.iter().enumerate() {
            site_nuclear.push(&unit * species.valence_charge);
            let block = match core_potential {
                CorePotential::None => DMatrix::zeros(n, n),
                CorePotential::FrozenCore => frozen_core_potential(
                    basis, &overlap, &kinetic, &eri, &unit, i, s, species,
                ),
                CorePotential::Ingested(archive) => match archive.get(&format!("V_ecp/{i}/{s}")) {
                    Some(t) => {
                        check_dims(t, &[n, n])?;
                        t.to_matrix()?
                    }
                    None => DMatrix::zeros(n, n),
                },
            };
            site_core.push(block);
        }
        nuclear.push(site_nuclear);
        core.push(site_core);
        valence_charges.push(site.species.iter().map(|s| s.valence_charge).collect());
    }
    Ok(AlchemicalIntegrals {
        overlap,
        kinetic,
        nuclear,
        core,
        field: field_block,
        eri,
        valence_charges,
    })
}

#[cfg(test)]
mod tests;
