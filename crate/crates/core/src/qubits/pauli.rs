//! Pauli strings as (x, z) bit masks and real-weighted Pauli sums.
//!
//! A string is stored in letter form: on qubit q the pair (x_q, z_q) reads
//! (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y, with Y = iXZ. Qubit q is bit q of a
//! basis-state index.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Largest register handled by the Pauli algebra.
pub const MAX_PAULI_QUBITS: usize = 64;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// i^k for integer k.
#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    I_POW[(k & 3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    pub fn x(q: usize) -> Self {
        PauliString { x: 1 << q, z: 0 }
    }

    pub fn y(q: usize) -> Self {
        PauliString { x: 1 << q, z: 1 << q }
    }

    pub fn z(q: usize) -> Self {
        PauliString { x: 0, z: 1 << q }
    }

    /// Parse a string such as `"XIZY"`; the first letter acts on qubit 0.
    pub fn parse(s: &str) -> Result<Self> {
        if s.len() > MAX_PAULI_QUBITS {
            return Err(Error::Domain(format!("Pauli string longer than {MAX_PAULI_QUBITS}")));
        }
        let mut p = PauliString::IDENTITY;
        for (q, c) in s.chars().enumerate() {
            let bit = 1u64 << q;
            match c {
                'I' => {}
                'X' => p.x |= bit,
                'Y' => {
                    p.x |= bit;
                    p.z |= bit;
                }
                'Z' => p.z |= bit,
                _ => return Err(Error::Domain(format!("invalid Pauli letter {c:?}"))),
            }
        }
        Ok(p)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Number of Y factors.
    #[inline]
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Letter on qubit `q`.
    pub fn letter(&self, q: usize) -> char {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    pub fn to_letters(&self, qubits: usize) -> String {
        (0..qubits).map(|q| self.letter(q)).collect()
    }

    /// P|b⟩ = phase · |b ⊕ x⟩.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (Complex64, u64) {
        let sign = 2 * ((b & self.z).count_ones() & 1);
        (i_pow(self.y_count() + sign), b ^ self.x)
    }

    /// Product self · other = i^k · P, returned as (k mod 4, P).
    pub fn mul(&self, other: &PauliString) -> (u32, PauliString) {
        let p = PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        let k = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones() + 4
            - (p.y_count() & 3);
        (k & 3, p)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// True when the two strings agree on every qubit where both act.
    pub fn qubit_wise_commutes(&self, other: &PauliString) -> bool {
        let both = self.support() & other.support();
        (self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

/// Real linear combination of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(qubits: usize) -> Self {
        assert!(qubits <= MAX_PAULI_QUBITS);
        PauliSum {
            qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Self {
        let mut s = PauliSum::new(qubits);
        for (c, p) in terms {
            s.push(c, p);
        }
        s
    }

    pub fn identity(qubits: usize, c: f64) -> Self {
        PauliSum::from_terms(qubits, [(c, PauliString::IDENTITY)])
    }

    pub fn push(&mut self, coefficient: f64, string: PauliString) {
        debug_assert!(self.qubits == 64 || string.support() >> self.qubits == 0);
        self.terms.push(PauliTerm {
            coefficient,
            string,
        });
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the identity string.
    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.string.is_identity())
            .map(|t| t.coefficient)
            .sum()
    }

    /// Merge duplicate strings, drop near-zero terms, sort by string.
    pub fn simplify(&self) -> PauliSum {
        let mut map: BTreeMap<PauliString, f64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.string).or_default() += t.coefficient;
        }
        PauliSum {
            qubits: self.qubits,
            terms: map
                .into_iter()
                .filter(|(_, c)| c.abs() >= PRUNE_THRESHOLD)
                .map(|(string, coefficient)| PauliTerm {
                    coefficient,
                    string,
                })
                .collect(),
        }
    }

    pub fn scaled(&self, f: f64) -> PauliSum {
        PauliSum {
            qubits: self.qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coefficient: t.coefficient * f,
                    string: t.string,
                })
                .collect(),
        }
    }

    /// Σ_k w_k · sums_k, simplified.
    pub fn linear_combination<'a>(
        qubits: usize,
        parts: impl IntoIterator<Item = (f64, &'a PauliSum)>,
    ) -> PauliSum {
        let mut out = PauliSum::new(qubits);
        for (w, s) in parts {
            assert_eq!(s.qubits, qubits);
            if w != 0.0 {
                out.terms
                    .extend(s.terms.iter().map(|t| PauliTerm {
                        coefficient: t.coefficient * w,
                        string: t.string,
                    }));
            }
        }
        out.simplify()
    }

    /// Dense 2ⁿ×2ⁿ matrix, row index = output basis state.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.qubits > 14 {
            return Err(Error::Capacity {
                qubits: self.qubits,
                limit: 14,
            });
        }
        let dim = 1usize << self.qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            for b in 0..dim as u64 {
                let (ph, out) = t.string.apply_to_basis(b);
                m[(out as usize, b as usize)] += ph * t.coefficient;
            }
        }
        Ok(m)
    }

    /// One `coeff pauli-string` line per term.
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|t| format!("{:+.16e} {}\n", t.coefficient, t.string.to_letters(self.qubits)))
            .collect()
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
