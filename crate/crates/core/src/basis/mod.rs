//! Minimal STO-3G basis data and the union atomic basis over a scaffold.
//!
//! The union basis concatenates the functions of every species allowed at
//! every site. Functions are ordered by site, then by species in declared
//! order, then by shell, then by Cartesian component (x, y, z for p shells).

mod bonds;
mod sto3g;

use serde::{Deserialize, Serialize};

use crate::alchemy::Scaffold;
use crate::error::{Error, Result};
use crate::units::point_to_bohr;

pub use bonds::bond_length;

/// One primitive Cartesian Gaussian inside a contracted function.
/// `coefficient` already includes the primitive normalization and the
/// contracted-function normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPrimitive {
    pub exponent: f64,
    pub coefficient: f64,
}

/// A contracted shell as tabulated: angular momentum plus raw contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub l: u8,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl Shell {
    pub fn function_count(&self) -> usize {
        match self.l {
            0 => 1,
            1 => 3,
            l => (l as usize + 1) * (l as usize + 2) / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesBasis {
    pub symbol: String,
    pub total_z: u32,
    pub core_electrons: u32,
    /// Valence charge Z − N_core.
    pub valence_charge: f64,
    pub shells: Vec<Shell>,
}

impl SpeciesBasis {
    pub fn function_count(&self) -> usize {
        self.shells.iter().map(Shell::function_count).sum()
    }

    /// Number of leading basis functions spanning the core shells
    /// (1s for Li–Ne, 1s 2s 2p for Na–Ar).
    pub fn core_function_count(&self) -> usize {
        match self.core_electrons {
            0 => 0,
            2 => 1,
            10 => 5,
            n => unreachable!("unsupported core size {n}"),
        }
    }
}

/// Load bundled STO-3G data for an element symbol (case-insensitive).
pub fn load_sto3g(element: &str) -> Result<SpeciesBasis> {
    let data = sto3g::ELEMENTS
        .iter()
        .find(|e| e.symbol.eq_ignore_ascii_case(element))
        .ok_or_else(|| Error::UnsupportedSpecies(element.to_string()))?;
    Ok(SpeciesBasis {
        symbol: data.symbol.to_string(),
        total_z: data.z,
        core_electrons: data.core_electrons,
        valence_charge: f64::from(data.z - data.core_electrons),
        shells: data
            .shells
            .iter()
            .map(|s| Shell {
                l: s.l,
                exponents: s.exponents.to_vec(),
                coefficients: s.coefficients.to_vec(),
            })
            .collect(),
    })
}

/// Symbols with bundled basis data.
pub fn supported_elements() -> impl Iterator<Item = &'static str> {
    sto3g::ELEMENTS.iter().map(|e| e.symbol)
}

/// A normalized contracted Cartesian Gaussian placed on a scaffold site.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub site: usize,
    pub species: usize,
    pub shell: usize,
    /// Index of this function within its species block.
    pub local_index: usize,
    pub powers: [u8; 3],
    /// Center in bohr.
    pub center: [f64; 3],
    pub primitives: Vec<GaussianPrimitive>,
}

impl BasisFunction {
    /// Build a normalized contracted function from raw contraction data.
    pub fn new(
        center: [f64; 3],
        powers: [u8; 3],
        exponents: &[f64],
        coefficients: &[f64],
    ) -> Self {
        let mut primitives: Vec<GaussianPrimitive> = exponents
            .iter()
            .zip(coefficients)
            .map(|(&a, &d)| GaussianPrimitive {
                exponent: a,
                coefficient: d * primitive_norm(a, powers),
            })
            .collect();
        let self_overlap = same_center_overlap(&primitives, powers);
        let scale = self_overlap.sqrt().recip();
        for p in &mut primitives {
            p.coefficient *= scale;
        }
        BasisFunction {
            site: 0,
            species: 0,
            shell: 0,
            local_index: 0,
            powers,
            center,
            primitives,
        }
    }

    pub fn angular_momentum(&self) -> u8 {
        self.powers.iter().sum()
    }
}

fn double_factorial(n: i32) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= f64::from(k);
        k -= 2;
    }
    acc
}

fn primitive_norm(a: f64, [l, m, n]: [u8; 3]) -> f64 {
    let big_l = f64::from(l + m + n);
    let df = double_factorial(2 * i32::from(l) - 1)
        * double_factorial(2 * i32::from(m) - 1)
        * double_factorial(2 * i32::from(n) - 1);
    (2.0 * a / std::f64::consts::PI).powf(0.75) * (4.0 * a).powf(big_l / 2.0) / df.sqrt()
}

fn same_center_overlap(prims: &[GaussianPrimitive], powers: [u8; 3]) -> f64 {
    let mut s = 0.0;
    for pa in prims {
        for pb in prims {
            let p = pa.exponent + pb.exponent;
            let mut v = 1.0;
            for &l in &powers {
                let l = i32::from(l);
                v *= double_factorial(2 * l - 1) / (2.0 * p).powi(l)
                    * (std::f64::consts::PI / p).sqrt();
            }
            s += pa.coefficient * pb.coefficient * v;
        }
    }
    s
}

/// Cartesian components of a shell, in x, y, z order for p.
fn cartesian_powers(l: u8) -> Vec<[u8; 3]> {
    match l {
        0 => vec![[0, 0, 0]],
        1 => vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        _ => unimplemented!("only s and p shells are supported"),
    }
}

/// Functions of one species placed at `center` (bohr).
pub fn species_functions(species: &SpeciesBasis, center: [f64; 3]) -> Vec<BasisFunction> {
    let mut out = Vec::with_capacity(species.function_count());
    for (shell_idx, shell) in species.shells.iter().enumerate() {
        for powers in cartesian_powers(shell.l) {
            let mut f = BasisFunction::new(center, powers, &shell.exponents, &shell.coefficients);
            f.shell = shell_idx;
            f.local_index = out.len();
            out.push(f);
        }
    }
    out
}

/// The union atomic basis over all sites and allowed species.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub functions: Vec<BasisFunction>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Indices of the functions tagged (site, species), in basis order.
    pub fn block(&self, site: usize, species: usize) -> Vec<usize> {
        self.functions
            .iter()
            .enumerate()
            .filter(|(_, f)| f.site == site && f.species == species)
            .map(|(i, _)| i)
            .collect()
    }

    /// (site, species, shell, local index) tags in basis order.
    pub fn tags(&self) -> Vec<(usize, usize, usize, usize)> {
        self.functions
            .iter()
            .map(|f| (f.site, f.species, f.shell, f.local_index))
            .collect()
    }
}

pub fn build_union_basis(scaffold: &Scaffold) -> BasisSet {
    let mut functions = Vec::new();
    for (site_idx, site) in scaffold.sites().iter().enumerate() {
        let center = point_to_bohr(site.position);
        for (species_idx, species) in site.species.iter().enumerate() {
            for mut f in species_functions(species, center) {
                f.site = site_idx;
                f.species = species_idx;
                functions.push(f);
            }
        }
    }
    BasisSet { functions }
}
