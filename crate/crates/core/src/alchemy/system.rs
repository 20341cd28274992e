//! Scaffold geometry, external charge fields and alchemical weights.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::{load_sto3g, SpeciesBasis};
use crate::error::{Error, Result};

/// Tolerance on per-site weight sums and bounds.
pub const SIMPLEX_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    /// Position in ångström.
    pub position: [f64; 3],
    pub species: Vec<SpeciesBasis>,
}

impl Site {
    pub fn symbols(&self) -> Vec<&str> {
        self.species.iter().map(|s| s.symbol.as_str()).collect()
    }
}

/// Atomic sites with the species allowed at each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaffold {
    sites: Vec<Site>,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_coords(
    fields: &[&str],
    path: &Path,
    line: usize,
) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (k, field) in fields.iter().take(3).enumerate() {
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("invalid coordinate `{field}`"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("non-finite coordinate `{field}`"),
            });
        }
        out[k] = v;
    }
    Ok(out)
}

impl Scaffold {
    pub fn new(sites: Vec<([f64; 3], Vec<String>)>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Config("scaffold has no sites".into()));
        }
        let mut out = Vec::with_capacity(sites.len());
        for (i, (position, symbols)) in sites.into_iter().enumerate() {
            if symbols.is_empty() {
                return Err(Error::Config(format!("site {i} allows no species")));
            }
            if position.iter().any(|x| !x.is_finite()) {
                return Err(Error::Config(format!("site {i} has a non-finite position")));
            }
            let species = symbols
                .iter()
                .map(|s| load_sto3g(s))
                .collect::<Result<Vec<_>>>()?;
            out.push(Site { position, species });
        }
        Ok(Scaffold { sites: out })
    }

    /// A two-site scaffold along z, centered at the origin, with `bond`
    /// ångström between the sites.
    pub fn dimer(bond: f64, species: &[&str]) -> Result<Self> {
        let symbols: Vec<String> = species.iter().map(|s| s.to_string()).collect();
        Scaffold::new(vec![
            ([0.0, 0.0, -bond / 2.0], symbols.clone()),
            ([0.0, 0.0, bond / 2.0], symbols),
        ])
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::parse_with_path(text, Path::new("<inline>"))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse_with_path(&read_text(path)?, path)
    }

    fn parse_with_path(text: &str, path: &Path) -> Result<Self> {
        let mut sites = Vec::new();
        for (line, content) in data_lines(text) {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: "expected `x y z species1,species2,...`".into(),
                });
            }
            let position = parse_coords(&fields, path, line)?;
            let symbols: Vec<String> = fields[3]
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            for s in &symbols {
                if load_sto3g(s).is_err() {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line,
                        message: format!("unsupported species `{s}`"),
                    });
                }
            }
            sites.push((position, symbols));
        }
        Self::new(sites).map_err(|e| match e {
            Error::Config(message) => Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                message,
            },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# x y z species (angstrom)\n");
        for site in &self.sites {
            let [x, y, z] = site.position;
            out.push_str(&format!("{x} {y} {z} {}\n", site.symbols().join(",")));
        }
        out
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Number of allowed species per site.
    pub fn species_counts(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.species.len()).collect()
    }

    /// Human-readable name of a composition, e.g. `Li-H`.
    pub fn composition_label(&self, composition: &[usize]) -> String {
        composition
            .iter()
            .zip(&self.sites)
            .map(|(&s, site)| site.species[s].symbol.as_str())
            .collect::<Vec<_>>()
            .join("-")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointCharge {
    /// Position in ångström.
    pub position: [f64; 3],
    /// Charge in units of e.
    pub charge: f64,
}

/// External point charges. Empty means vacuum.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChargeField {
    pub charges: Vec<PointCharge>,
}

impl ChargeField {
    pub fn new(charges: Vec<PointCharge>) -> Result<Self> {
        if charges
            .iter()
            .any(|c| !c.charge.is_finite() || c.position.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::Config("charge field has non-finite entries".into()));
        }
        Ok(ChargeField { charges })
    }

    pub fn vacuum() -> Self {
        ChargeField::default()
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::parse_with_path(text, Path::new("<inline>"))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse_with_path(&read_text(path)?, path)
    }

    fn parse_with_path(text: &str, path: &Path) -> Result<Self> {
        let mut charges = Vec::new();
        for (line, content) in data_lines(text) {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: "expected `x y z q`".into(),
                });
            }
            let position = parse_coords(&fields, path, line)?;
            let charge: f64 = fields[3]
                .parse()
                .ok()
                .filter(|q: &f64| q.is_finite())
                .ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("invalid charge `{}`", fields[3]),
                })?;
            charges.push(PointCharge { position, charge });
        }
        Ok(ChargeField { charges })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# x y z q (angstrom, e)\n");
        for c in &self.charges {
            let [x, y, z] = c.position;
            out.push_str(&format!("{x} {y} {z} {}\n", c.charge));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    /// Copy with every charge multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ChargeField {
            charges: self
                .charges
                .iter()
                .map(|c| PointCharge {
                    position: c.position,
                    charge: c.charge * factor,
                })
                .collect(),
        }
    }
}

/// Per-site weights over the allowed species, each on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaWeights(Vec<Vec<f64>>);

impl AlphaWeights {
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        for (i, w) in weights.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidWeights(format!("site {i} has no weights")));
            }
            if w
                .iter()
                .any(|&a| !(-SIMPLEX_TOLERANCE..=1.0 + SIMPLEX_TOLERANCE).contains(&a))
            {
                return Err(Error::InvalidWeights(format!(
                    "site {i} has a weight outside [0, 1]: {w:?}"
                )));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
                return Err(Error::InvalidWeights(format!(
                    "site {i} weights sum to {sum}"
                )));
            }
        }
        Ok(AlphaWeights(weights))
    }

    pub fn uniform(scaffold: &Scaffold) -> Self {
        AlphaWeights(
            scaffold
                .species_counts()
                .into_iter()
                .map(|n| vec![1.0 / n as f64; n])
                .collect(),
        )
    }

    pub fn one_hot(scaffold: &Scaffold, composition: &[usize]) -> Result<Self> {
        let counts = scaffold.species_counts();
        if composition.len() != counts.len() {
            return Err(Error::Dimension(format!(
                "composition has {} entries for {} sites",
                composition.len(),
                counts.len()
            )));
        }
        let mut out = Vec::with_capacity(counts.len());
        for (&c, &n) in composition.iter().zip(&counts) {
            if c >= n {
                return Err(Error::Dimension(format!("species index {c} out of range {n}")));
            }
            let mut w = vec![0.0; n];
            w[c] = 1.0;
            out.push(w);
        }
        Ok(AlphaWeights(out))
    }

    pub fn sites(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Vec<f64>> {
        self.0
    }

    pub fn site(&self, i: usize) -> &[f64] {
        &self.0[i]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.0.iter().map(Vec::len).collect()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.0.iter().flatten().copied().collect()
    }

    /// Largest |Σα − 1| over sites.
    pub fn simplex_residual(&self) -> f64 {
        self.0
            .iter()
            .map(|w| (w.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of the [0, 1] bounds.
    pub fn bound_violation(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|&a| (-a).max(a - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Per-site index of the largest weight (ties go to the lowest index).
    pub fn argmax(&self) -> Vec<usize> {
        self.0
            .iter()
            .map(|w| {
                let mut best = 0;
                for (i, &a) in w.iter().enumerate() {
                    if a > w[best] {
                        best = i;
                    }
                }
                best
            })
            .collect()
    }

    /// One-hot composition when every site has a single unit weight.
    pub fn as_composition(&self) -> Option<Vec<usize>> {
        self.0
            .iter()
            .map(|w| {
                let hot: Vec<usize> = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| (a - 1.0).abs() <= SIMPLEX_TOLERANCE)
                    .map(|(i, _)| i)
                    .collect();
                let rest_zero = w.iter().filter(|a| a.abs() > SIMPLEX_TOLERANCE).count() == 1;
                (hot.len() == 1 && rest_zero).then(|| hot[0])
            })
            .collect()
    }

    /// Pointwise affine combination (1 − t)·self + t·other.
    pub fn lerp(&self, other: &AlphaWeights, t: f64) -> AlphaWeights {
        AlphaWeights(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect())
                .collect(),
        )
    }
}
