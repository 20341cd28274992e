//! Experimental equilibrium bond lengths (Å) of ground-state diatomics,
//! as tabulated in standard spectroscopic compilations.

static BOND_LENGTHS: &[(&str, &str, f64)] = &[
    ("H", "H", 0.7414),
    ("H", "Li", 1.5949),
    ("H", "Na", 1.8874),
    ("Li", "Li", 2.6729),
    ("Li", "Na", 2.8854),
    ("Na", "Na", 3.0789),
    ("C", "C", 1.2425),
    ("C", "N", 1.1718),
    ("C", "O", 1.1283),
    ("C", "S", 1.5349),
    ("N", "N", 1.0977),
    ("N", "O", 1.1508),
    ("N", "S", 1.4940),
    ("O", "O", 1.2075),
    ("O", "S", 1.4811),
    ("S", "S", 1.8892),
];

/// Bond length in ångström for an unordered pair of element symbols.
pub fn bond_length(a: &str, b: &str) -> Option<f64> {
    BOND_LENGTHS
        .iter()
        .find(|(x, y, _)| (*x == a && *y == b) || (*x == b && *y == a))
        .map(|&(_, _, r)| r)
}
