use super::*;
use crate::alchemy::{ChargeField, PointCharge, Scaffold};
use crate::basis::{build_union_basis, load_sto3g, species_functions, BasisFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use crate::testutil::composite;

fn s_value(f: &BasisFunction, r2: f64) -> f64 {
    f.primitives.iter().map(|p| p.coefficient * (-p.exponent * r2).exp()).sum()
}

fn s_laplacian(f: &BasisFunction, r2: f64) -> f64 {
    f.primitives
        .iter()
        .map(|p| {
            let b = p.exponent;
            p.coefficient * (4.0 * b * b * r2 - 6.0 * b) * (-b * r2).exp()
        })
        .sum()
}

fn hydrogen_pair(separation: f64) -> (BasisFunction, BasisFunction) {
    let h = load_sto3g("H").unwrap();
    let a = species_functions(&h, [0.0, 0.0, -separation / 2.0]).remove(0);
    let b = species_functions(&h, [0.0, 0.0, separation / 2.0]).remove(0);
    (a, b)
}

/// ∫ g(a(r), b(r)) d³r for functions on the z axis, by cylindrical quadrature.
fn cylindrical<F: Fn([f64; 3]) -> f64>(f: F) -> f64 {
    let rho = composite(0.0, 12.0, 48, 12);
    let z = composite(-13.0, 13.0, 104, 12);
    let mut sum = 0.0;
    for &(r, wr) in &rho {
        for &(zz, wz) in &z {
            sum += wr * wz * r * f([r, 0.0, zz]);
        }
    }
    2.0 * std::f64::consts::PI * sum
}

fn r2(p: [f64; 3], c: [f64; 3]) -> f64 {
    (0..3).map(|k| (p[k] - c[k]).powi(2)).sum()
}

fn small_union_basis() -> BasisSet {
    let sc = Scaffold::parse_str("0.1 -0.2 -0.7 H,Li\n-0.1 0.3 0.9 Li,H").unwrap();
    build_union_basis(&sc)
}

#[test]
fn self_overlap_is_one() {
    let sc = Scaffold::parse_str("0 0 -0.8 H,Li,Na\n0 0 0.8 H,Li,Na").unwrap();
    let basis = build_union_basis(&sc);
    for f in &basis.functions {
        assert!((overlap(f, f) - 1.0).abs() < 1e-10);
    }
    let cnos = Scaffold::parse_str("0 0 0 C,N,O,S").unwrap();
    for f in &build_union_basis(&cnos).functions {
        assert!((overlap(f, f) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn equal_exponent_s_overlap_closed_form() {
    for &(gamma, d) in &[(0.5, 1.0), (1.3, 0.4), (0.2, 3.0)] {
        let a = BasisFunction::new([0.0; 3], [0, 0, 0], &[gamma], &[1.0]);
        let b = BasisFunction::new([d, 0.0, 0.0], [0, 0, 0], &[gamma], &[1.0]);
        let expected = (-gamma * d * d / 2.0).exp();
        assert!((overlap(&a, &b) - expected).abs() < 1e-14);
    }
}

#[test]
fn hydrogen_overlap_and_kinetic_match_quadrature() {
    let (a, b) = hydrogen_pair(1.4);
    let s_quad = cylindrical(|p| s_value(&a, r2(p, a.center)) * s_value(&b, r2(p, b.center)));
    let t_quad = cylindrical(|p| {
        -0.5 * s_value(&a, r2(p, a.center)) * s_laplacian(&b, r2(p, b.center))
    });
    assert!((overlap(&a, &b) - s_quad).abs() < 1e-8, "{} vs {s_quad}", overlap(&a, &b));
    assert!((kinetic(&a, &b) - t_quad).abs() < 1e-8, "{} vs {t_quad}", kinetic(&a, &b));
    // Standard H2/STO-3G values at 1.4 bohr.
    assert!((overlap(&a, &b) - 0.6593).abs() < 1e-4);
    assert!((kinetic(&a, &a) - 0.7600).abs() < 1e-4);
}

#[test]
fn kinetic_of_s_primitive() {
    for gamma in [0.1, 0.8, 3.0, 40.0] {
        let f = BasisFunction::new([0.3, 0.1, -2.0], [0, 0, 0], &[gamma], &[1.0]);
        assert!((kinetic(&f, &f) - 1.5 * gamma).abs() < 1e-12 * gamma.max(1.0));
    }
}

#[test]
fn one_electron_symmetry() {
    let basis = small_union_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = [0.2, -0.4, 0.5];
    for _ in 0..40 {
        let i = rng.random_range(0..basis.len());
        let j = rng.random_range(0..basis.len());
        let (a, b) = (&basis.functions[i], &basis.functions[j]);
        assert!((kinetic(a, b) - kinetic(b, a)).abs() < 1e-13);
        assert!((overlap(a, b) - overlap(b, a)).abs() < 1e-14);
        assert!((point_attraction(a, b, c, 0.7) - point_attraction(b, a, c, 0.7)).abs() < 1e-13);
    }
}

#[test]
fn point_attraction_is_linear_in_charge() {
    let basis = small_union_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let i = rng.random_range(0..basis.len());
        let j = rng.random_range(0..basis.len());
        let c = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let q = rng.random_range(-1.0..1.0);
        let (a, b) = (&basis.functions[i], &basis.functions[j]);
        assert_eq!(point_attraction(a, b, c, 0.0), 0.0);
        let one = point_attraction(a, b, c, q);
        let two = point_attraction(a, b, c, 2.0 * q);
        assert!((two - 2.0 * one).abs() <= 1e-14 * one.abs().max(1.0));
    }
}

#[test]
fn hydrogen_attraction_matches_radial_quadrature() {
    let (a, _) = hydrogen_pair(0.0);
    let radial = composite(0.0, 15.0, 60, 16);
    let quad: f64 = -4.0 * std::f64::consts::PI
        * radial
            .iter()
            .map(|&(r, w)| w * r * s_value(&a, r * r).powi(2))
            .sum::<f64>();
    let v = point_attraction(&a, &a, a.center, 1.0);
    assert!(v < 0.0);
    assert!((v - quad).abs() < 1e-8, "{v} vs {quad}");
}

#[test]
fn eri_permutational_symmetry() {
    let basis = small_union_basis();
    let f = &basis.functions;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let [i, j, k, l] = [0; 4].map(|_| rng.random_range(0..f.len()));
        let v = eri(&f[i], &f[j], &f[k], &f[l]);
        for (a, b, c, d) in [
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            let w = eri(&f[a], &f[b], &f[c], &f[d]);
            assert!((v - w).abs() < 1e-12, "({i}{j}|{k}{l}) = {v} vs {w}");
        }
    }
}

#[test]
fn single_center_eri_matches_closed_form_and_quadrature() {
    let gamma: f64 = 0.75;
    let s = BasisFunction::new([0.4, 0.0, 0.0], [0, 0, 0], &[gamma], &[1.0]);
    let v = eri(&s, &s, &s, &s);
    let closed = (2.0 * gamma / std::f64::consts::PI).sqrt() * 2.0 / 2f64.sqrt();
    assert!((v - closed).abs() < 1e-13);

    // Coulomb self-energy of the spherical density φ², by nested radial quadrature.
    let four_pi = 4.0 * std::f64::consts::PI;
    let density = |r: f64| s_value(&s, r * r).powi(2);
    let outer = composite(0.0, 10.0, 40, 16);
    let mut quad = 0.0;
    for &(r, w) in &outer {
        let inner: f64 = composite(0.0, r, 4, 16)
            .iter()
            .map(|&(x, wx)| wx * four_pi * x * x * density(x))
            .sum();
        quad += 2.0 * w * four_pi * r * density(r) * inner;
    }
    assert!((v - quad).abs() < 1e-8, "{v} vs {quad}");
}

#[test]
fn distant_charge_clouds_repel_as_inverse_distance() {
    let d = 20.0;
    let a = BasisFunction::new([0.0; 3], [0, 0, 0], &[0.9], &[1.0]);
    let b = BasisFunction::new([0.0, 0.0, d], [0, 0, 0], &[1.1], &[1.0]);
    let v = eri(&a, &a, &b, &b);
    assert!(((v - 1.0 / d) * d).abs() < 1e-3);
}

fn two_site_setup() -> (Scaffold, BasisSet, ChargeField) {
    let sc = Scaffold::parse_str("0 0 -0.8 H,Li\n0 0 0.8 H,Li").unwrap();
    let basis = build_union_basis(&sc);
    let field = ChargeField::parse_str("2 0 0 0.06\n0 0 -2.5 -0.5\n0 0 2.5 0.5").unwrap();
    (sc, basis, field)
}

#[test]
fn field_block_is_sum_of_point_attractions() {
    let (sc, basis, _) = two_site_setup();
    let empty = compute_all(&basis, &sc, &ChargeField::vacuum(), &CorePotential::None).unwrap();
    assert!(empty.field.iter().all(|&x| x == 0.0));

    let single = ChargeField::new(vec![PointCharge { position: [0.5, 0.0, 1.5], charge: -0.3 }]).unwrap();
    let ints = compute_all(&basis, &sc, &single, &CorePotential::None).unwrap();
    let c = crate::units::point_to_bohr([0.5, 0.0, 1.5]);
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let direct = point_attraction(&basis.functions[i], &basis.functions[j], c, -0.3);
            assert!((ints.field[(i, j)] - direct).abs() < 1e-15);
        }
    }
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

#[test]
fn integral_set_invariants() {
    let (sc, basis, field) = two_site_setup();
    let ints = compute_all(&basis, &sc, &field, &CorePotential::FrozenCore).unwrap();
    let sym = |m: &DMatrix<f64>| max_abs_diff(m, &m.transpose());
    assert!(sym(&ints.overlap) < 1e-12);
    assert!(sym(&ints.kinetic) < 1e-12);
    assert!(sym(&ints.field) < 1e-12);
    for site in ints.nuclear.iter().chain(&ints.core) {
        for m in site {
            assert!(sym(m) < 1e-12);
        }
    }
    let eig = ints.overlap.clone().symmetric_eigenvalues();
    assert!(eig.min() >= -1e-12);
    let n = ints.dim();
    let g = &ints.eri;
    for i in 0..n {
        for j in 0..n {
            for k in (0..n).step_by(3) {
                for l in (0..n).step_by(2) {
                    let v = g.get(i, j, k, l);
                    assert!((v - g.get(j, i, k, l)).abs() < 1e-12);
                    assert!((v - g.get(i, j, l, k)).abs() < 1e-12);
                    assert!((v - g.get(k, l, i, j)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn translation_invariance() {
    let (sc, basis, field) = two_site_setup();
    let shift = [1.3, -0.7, 2.1];
    let moved_sites: Vec<([f64; 3], Vec<String>)> = sc
        .sites()
        .iter()
        .map(|s| {
            (
                [0, 1, 2].map(|k| s.position[k] + shift[k]),
                s.symbols().iter().map(|x| x.to_string()).collect(),
            )
        })
        .collect();
    let moved = Scaffold::new(moved_sites).unwrap();
    let moved_field = ChargeField::new(
        field
            .charges
            .iter()
            .map(|c| PointCharge {
                position: [0, 1, 2].map(|k| c.position[k] + shift[k]),
                charge: c.charge,
            })
            .collect(),
    )
    .unwrap();
    let a = compute_all(&basis, &sc, &field, &CorePotential::FrozenCore).unwrap();
    let b = compute_all(&build_union_basis(&moved), &moved, &moved_field, &CorePotential::FrozenCore)
        .unwrap();
    assert!(max_abs_diff(&a.overlap, &b.overlap) < 1e-12);
    assert!(max_abs_diff(&a.kinetic, &b.kinetic) < 1e-12);
    assert!(max_abs_diff(&a.field, &b.field) < 1e-12);
    for (x, y) in a.nuclear.iter().flatten().zip(b.nuclear.iter().flatten()) {
        assert!(max_abs_diff(x, y) < 1e-12);
    }
    for (x, y) in a.core.iter().flatten().zip(b.core.iter().flatten()) {
        assert!(max_abs_diff(x, y) < 1e-11 * x.abs().max().max(1.0));
    }
    let worst = a
        .eri
        .data()
        .iter()
        .zip(b.eri.data())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12);
}

#[test]
fn archive_round_trip_is_bit_exact() {
    let (sc, basis, field) = two_site_setup();
    let ints = compute_all(&basis, &sc, &field, &CorePotential::FrozenCore).unwrap();
    let bytes = ints.to_archive().to_bytes();
    let back = AlchemicalIntegrals::from_archive(&TensorArchive::from_bytes(&bytes).unwrap(), &sc)
        .unwrap();
    assert_eq!(back, ints);
    assert_eq!(back.to_archive().to_bytes(), bytes);
}

#[test]
fn ingested_core_blocks_are_shape_checked() {
    let (sc, basis, field) = two_site_setup();
    let n = basis.len();
    let mut archive = TensorArchive::default();
    archive.push(Tensor::new("V_ecp/0/1", vec![n, n], vec![0.25; n * n]));
    let ints = compute_all(&basis, &sc, &field, &CorePotential::Ingested(archive)).unwrap();
    assert!(ints.core[0][1].iter().all(|&x| x == 0.25));
    assert!(ints.core[1][1].iter().all(|&x| x == 0.0));

    let mut bad = TensorArchive::default();
    bad.push(Tensor::new("V_ecp/0/0", vec![n - 1, n - 1], vec![0.0; (n - 1) * (n - 1)]));
    let err = compute_all(&basis, &sc, &field, &CorePotential::Ingested(bad)).unwrap_err();
    assert!(matches!(err, Error::Shape { .. }));
}

#[test]
fn frozen_core_pushes_core_orbitals_up() {
    // Li at the origin: in the full Li potential the 1s function is pushed
    // above zero, while it is deeply bound without the core block.
    let sc = Scaffold::parse_str("0 0 0 Li").unwrap();
    let basis = build_union_basis(&sc);
    let ints = compute_all(&basis, &sc, &ChargeField::vacuum(), &CorePotential::FrozenCore).unwrap();
    let bare = &ints.kinetic + &ints.nuclear[0][0] * 3.0;
    let screened = &ints.kinetic + &ints.nuclear[0][0] + &ints.core[0][0];
    assert!(bare[(0, 0)] < -1.0);
    assert!(screened[(0, 0)] > 0.0);
    let h = load_sto3g("H").unwrap();
    assert_eq!(h.core_function_count(), 0);
}
