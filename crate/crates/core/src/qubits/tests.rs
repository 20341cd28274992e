use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::alchemy::FermionHamiltonian;
use crate::error::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_sum(rng: &mut ChaCha8Rng, qubits: usize, terms: usize) -> PauliSum {
    let mask = (1u64 << qubits) - 1;
    PauliSum::from_terms(
        qubits,
        (0..terms).map(|_| {
            (
                rng.random_range(-1.0..1.0),
                PauliString::new(rng.random::<u64>() & mask, rng.random::<u64>() & mask),
            )
        }),
    )
}

fn random_state(rng: &mut ChaCha8Rng, qubits: usize) -> Statevector {
    let mut a: Vec<Complex64> = (0..1 << qubits)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    a.iter_mut().for_each(|x| *x /= n);
    Statevector::from_amplitudes(a).unwrap()
}

fn dense_close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn pauli_products() {
    let (k, p) = PauliString::x(0).mul(&PauliString::y(0));
    assert_eq!((k, p), (1, PauliString::z(0)));
    let (k, p) = PauliString::y(0).mul(&PauliString::x(0));
    assert_eq!((k, p), (3, PauliString::z(0)));
    let (k, p) = PauliString::z(0).mul(&PauliString::x(0));
    assert_eq!((k, p), (1, PauliString::y(0)));
    let (k, p) = PauliString::y(2).mul(&PauliString::y(2));
    assert_eq!((k, p), (0, PauliString::IDENTITY));
    assert!(PauliString::x(0).commutes_with(&PauliString::x(0)));
    assert!(!PauliString::x(0).commutes_with(&PauliString::z(0)));
    let xx = PauliString::parse("XX").unwrap();
    let zz = PauliString::parse("ZZ").unwrap();
    assert!(xx.commutes_with(&zz));
    assert!(!xx.qubit_wise_commutes(&zz));
    assert_eq!(PauliString::parse("IXYZ").unwrap().to_letters(4), "IXYZ");
    assert!(PauliString::parse("XQ").is_err());
}

#[test]
fn product_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let a = PauliString::new(rng.random::<u64>() & 7, rng.random::<u64>() & 7);
        let b = PauliString::new(rng.random::<u64>() & 7, rng.random::<u64>() & 7);
        let (k, p) = a.mul(&b);
        let da = PauliSum::from_terms(3, [(1.0, a)]).to_dense().unwrap();
        let db = PauliSum::from_terms(3, [(1.0, b)]).to_dense().unwrap();
        let dp = PauliSum::from_terms(3, [(1.0, p)]).to_dense().unwrap() * super::pauli::i_pow(k);
        assert!(dense_close(&(da * db), &dp) < 1e-15);
    }
}

#[test]
fn number_and_hopping_operators() {
    let mut h = DMatrix::zeros(2, 2);
    h[(0, 0)] = 1.0;
    let n0 = one_body_to_pauli(&h).unwrap();
    let expected = PauliSum::from_terms(2, [(0.5, PauliString::IDENTITY), (-0.5, PauliString::z(0))]).simplify();
    assert_eq!(n0, expected);

    let mut h = DMatrix::zeros(2, 2);
    h[(0, 1)] = 1.0;
    h[(1, 0)] = 1.0;
    let hop = one_body_to_pauli(&h).unwrap();
    let expected = PauliSum::from_terms(
        2,
        [
            (0.5, PauliString::parse("XX").unwrap()),
            (0.5, PauliString::parse("YY").unwrap()),
        ],
    )
    .simplify();
    assert_eq!(hop, expected);
}

#[test]
fn simplify_preserves_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut s = random_sum(&mut rng, 4, 30);
    let dup: Vec<_> = s.terms().iter().take(10).copied().collect();
    for t in dup {
        s.push(-0.5 * t.coefficient, t.string);
    }
    s.push(1e-14, PauliString::x(1));
    let d1 = s.to_dense().unwrap();
    let simple = s.simplify();
    assert!(simple.len() < s.len());
    assert!(dense_close(&d1, &simple.to_dense().unwrap()) < 1e-13);
    let text = simple.to_text();
    assert_eq!(text.lines().count(), simple.len());
}

#[test]
fn quadratic_spectrum_is_subset_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for modes in 1..=6 {
        let a = DMatrix::from_fn(modes, modes, |_, _| rng.random_range(-1.0..1.0));
        let h = (&a + a.transpose()) * 0.5;
        let eps = SymmetricEigen::new(h.clone()).eigenvalues;
        let mut sums: Vec<f64> = (0..1u32 << modes)
            .map(|m| (0..modes).filter(|i| m >> i & 1 == 1).map(|i| eps[i]).sum())
            .collect();
        sums.sort_by(f64::total_cmp);
        let dense = one_body_to_pauli(&h).unwrap().to_dense().unwrap();
        assert!(dense.iter().all(|z| z.im.abs() < 1e-15));
        let mut spectrum: Vec<f64> = SymmetricEigen::new(dense.map(|z| z.re))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        spectrum.sort_by(f64::total_cmp);
        for (x, y) in sums.iter().zip(&spectrum) {
            assert!((x - y).abs() < 1e-12, "{modes}: {x} vs {y}");
        }
    }
}

#[test]
fn jw_constant_and_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k = 2;
    let a = DMatrix::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
    let h = (&a + a.transpose()) * 0.5;
    let mut g = crate::integrals::EriTensor::zeros(k);
    for p in 0..k {
        for q in 0..k {
            for r in 0..k {
                for s in 0..k {
                    if p >= q && r >= s && p * k + q >= r * k + s {
                        let v = rng.random_range(0.0..0.5);
                        for (i, j, l, m) in [
                            (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                            (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
                        ] {
                            g.set(i, j, l, m, v);
                        }
                    }
                }
            }
        }
    }
    let f = FermionHamiltonian::from_spatial(0.75, &h, &g);
    let pauli = jordan_wigner(&f).unwrap();
    let dense = pauli.to_dense().unwrap();
    assert!(dense_close(&dense, &dense.adjoint()) < 1e-13);
    // The vacuum |0…0⟩ has energy equal to the constant.
    assert!((dense[(0, 0)].re - 0.75).abs() < 1e-13);
    // One electron in spin orbital 0: h_00 + constant.
    assert!((dense[(1, 1)].re - 0.75 - h[(0, 0)]).abs() < 1e-13);
    // Spin orbitals 0 and 1 (same spatial orbital): h_00 twice plus (00|00).
    let e = 0.75 + 2.0 * h[(0, 0)] + g.get(0, 0, 0, 0);
    assert!((dense[(3, 3)].re - e).abs() < 1e-13);
}

#[test]
fn zero_angles_keep_initial_state() {
    let circuit = Circuit::new(4, 2, Rotation::Ry, Entangler::AllToAll).unwrap();
    assert_eq!(circuit.parameter_count(), 12);
    let theta = vec![0.0; 12];
    let s = circuit.apply(&theta, circuit.all_ones()).unwrap();
    // With θ = 0 only the CNOT permutations act on the basis state.
    let mut reference = Statevector::basis(4, 15).unwrap();
    for _ in 0..2 {
        for i in 0..4 {
            for j in i + 1..4 {
                reference.cnot(i, j);
            }
        }
    }
    assert_eq!(s, reference);
    let one = Circuit::new(1, 0, Rotation::Ry, Entangler::Linear).unwrap();
    let s = one.apply(&[0.0], 1).unwrap();
    assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);
    assert!(one.apply(&[0.0, 1.0], 1).is_err());
}

#[test]
fn ry_pi_flips_one_to_zero() {
    let circuit = Circuit::new(1, 0, Rotation::Ry, Entangler::AllToAll).unwrap();
    let s = circuit.apply(&[PI], 1).unwrap();
    assert!((s.amplitudes()[0] - c(-1.0)).norm() < 1e-15);
    assert!(s.amplitudes()[1].norm() < 1e-15);
}

#[test]
fn circuits_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (rotation, entangler) in [
        (Rotation::Ry, Entangler::AllToAll),
        (Rotation::RyRz, Entangler::Linear),
    ] {
        let circuit = Circuit::new(8, 3, rotation, entangler).unwrap();
        let theta: Vec<f64> = (0..circuit.parameter_count())
            .map(|_| rng.random_range(0.0..2.0 * PI))
            .collect();
        let s = circuit.apply(&theta, circuit.all_ones()).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-13);
        if rotation == Rotation::Ry {
            assert!(s.amplitudes().iter().all(|a| a.im == 0.0));
        }
    }
}

#[test]
fn capacity_limit() {
    assert!(matches!(
        Statevector::basis(25, 0),
        Err(Error::Capacity { qubits: 25, .. })
    ));
    assert!(Circuit::new(25, 1, Rotation::Ry, Entangler::Linear).is_err());
}

#[test]
fn simple_expectations() {
    let s = Statevector::basis(3, 0b101).unwrap();
    assert_eq!(expectation(&PauliSum::identity(3, 2.5), &s).unwrap(), 2.5);
    let z0 = PauliSum::from_terms(3, [(1.0, PauliString::z(0))]);
    assert_eq!(expectation(&z0, &s).unwrap(), -1.0);
    let z1 = PauliSum::from_terms(3, [(1.0, PauliString::z(1))]);
    assert_eq!(expectation(&z1, &s).unwrap(), 1.0);
    assert!(expectation(&PauliSum::identity(2, 1.0), &s).is_err());
}

#[test]
fn expectation_matches_dense_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let raw = random_sum(&mut rng, 6, 40);
        let dense = raw.to_dense().unwrap();
        let herm = raw.clone();
        let state = random_state(&mut rng, 6);
        let v = DVector::from_column_slice(state.amplitudes());
        let exact = (v.adjoint() * &dense * &v)[(0, 0)];
        let value = expectation(&herm, &state).unwrap();
        assert!((value - exact.re).abs() < 1e-10);
        let hv = state.apply_sum(&herm).unwrap();
        let dv = &dense * &v;
        for (a, b) in hv.amplitudes().iter().zip(dv.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn eigenstate_sampling_is_exact() {
    let s = Statevector::basis(3, 0b011).unwrap();
    let h = PauliSum::from_terms(
        3,
        [
            (0.3, PauliString::IDENTITY),
            (0.7, PauliString::z(0)),
            (-0.2, PauliString::parse("ZZZ").unwrap()),
        ],
    );
    let (mean, err) = sampled_expectation(&h, &s, 100, 1).unwrap();
    assert!((mean - expectation(&h, &s).unwrap()).abs() < 1e-14);
    assert_eq!(err, 0.0);
    assert!(sampled_expectation(&h, &s, 0, 1).is_err());
}

#[test]
fn sampling_within_five_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = random_sum(&mut rng, 4, 20).simplify();
    let circuit = Circuit::new(4, 2, Rotation::Ry, Entangler::AllToAll).unwrap();
    let theta: Vec<f64> = (0..circuit.parameter_count())
        .map(|_| rng.random_range(0.0..PI))
        .collect();
    let state = circuit.apply(&theta, circuit.all_ones()).unwrap();
    let exact = expectation(&h, &state).unwrap();
    let hits = (0..100)
        .filter(|&seed| {
            let (m, e) = sampled_expectation(&h, &state, 8192, seed).unwrap();
            (m - exact).abs() < 5.0 * e
        })
        .count();
    assert!(hits >= 99, "{hits}");
    let (m, _) = sampled_expectation(&h, &state, 1_000_000, 99).unwrap();
    assert!((m - exact).abs() < 1e-2);
    assert_eq!(
        sampled_expectation(&h, &state, 8192, 5).unwrap(),
        sampled_expectation(&h, &state, 8192, 5).unwrap()
    );
}

#[test]
fn groups_are_qubit_wise_commuting() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let h = random_sum(&mut rng, 5, 60).simplify();
    let groups = qubit_wise_groups(&h);
    let total: usize = groups.iter().map(Vec::len).sum();
    assert_eq!(total, h.terms().iter().filter(|t| !t.string.is_identity()).count());
    for g in &groups {
        for a in g {
            for b in g {
                assert!(a.string.qubit_wise_commutes(&b.string));
            }
        }
    }
}

#[test]
fn penalty_is_diagonal_square() {
    let p = number_penalty(4, 2.0, 0.5);
    let d = p.to_dense().unwrap();
    for b in 0..16usize {
        let n = b.count_ones() as f64;
        assert!((d[(b, b)].re - 0.5 * (n - 2.0).powi(2)).abs() < 1e-14);
    }
    assert_eq!(p.terms().iter().filter(|t| t.string.x != 0).count(), 0);
    let n = number_operator(3).to_dense().unwrap();
    assert!((n[(5, 5)].re - 2.0).abs() < 1e-15);
}
