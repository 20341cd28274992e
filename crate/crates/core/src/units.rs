//! Unit conversions. Everything inside the crate is in hartree and bohr.

pub const ANGSTROM_PER_BOHR: f64 = 0.52917721092;

pub fn angstrom_to_bohr(x: f64) -> f64 {
    x / ANGSTROM_PER_BOHR
}

pub fn point_to_bohr(p: [f64; 3]) -> [f64; 3] {
    p.map(angstrom_to_bohr)
}

pub(crate) fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}
