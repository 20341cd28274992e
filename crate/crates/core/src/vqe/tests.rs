use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::vqe::{ProjectedBfgs, StepStatus};
use crate::alchemy::{
    AlchemicalSystem, AlphaWeights, ChargeField, PointCharge, Scaffold, DEFAULT_OVERLAP_THRESHOLD,
};
use crate::integrals::CorePotential;
use crate::oracle::dense_real;
use crate::qubits::jordan_wigner;

pub(crate) fn hnl_case(axial: [f64; 2]) -> AlchemicalSystem {
    let sp = || vec!["H".to_string(), "Li".to_string(), "Na".to_string()];
    let s = Scaffold::new(vec![([0.0, 0.0, -1.5], sp()), ([0.0, 0.0, 1.5], sp())]).unwrap();
    let mut c = vec![
        PointCharge { position: [0.0, 0.0, -3.0], charge: axial[0] },
        PointCharge { position: [0.0, 0.0, 3.0], charge: axial[1] },
    ];
    for p in [[3.0, 0.0, 0.0], [-3.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, -3.0, 0.0]] {
        c.push(PointCharge { position: p, charge: 0.06 });
    }
    AlchemicalSystem::new(s, ChargeField::new(c).unwrap(), &CorePotential::FrozenCore).unwrap()
}

#[test]
fn components_reassemble_the_hamiltonian() {
    let sys = hnl_case([0.1, 0.2]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let problem = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let raw: Vec<Vec<f64>> = (0..2).map(|_| (0..3).map(|_| rng.random::<f64>()).collect()).collect();
        let alpha = project_simplex(&raw);
        for charged in [false, true] {
            let a = dense_real(&problem.hamiltonian(&alpha, charged).unwrap()).unwrap().unwrap();
            let f = sys.second_quantize(&active, &alpha, charged).unwrap();
            let b = dense_real(&jordan_wigner(&f).unwrap()).unwrap().unwrap();
            assert!((a - b).abs().max() < 1e-12);
        }
    }
}

use crate::oracle::{ground_state, Solver};
use crate::qubits::{expectation, Circuit, Entangler, PauliString, PauliSum, Rotation, Statevector};
use num_complex::Complex64;

fn grid_projection(v: &[f64]) -> Vec<f64> {
    let steps = 400;
    let mut best = (f64::INFINITY, vec![]);
    for i in 0..=steps {
        for j in 0..=steps - i {
            let p = [i as f64 / steps as f64, j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64];
            let d: f64 = p.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
            if d < best.0 {
                best = (d, p.to_vec());
            }
        }
    }
    best.1
}

#[test]
fn simplex_projection() {
    let valid = vec![0.2, 0.5, 0.3];
    assert_eq!(project_vector(&valid), valid);
    let equal = project_vector(&[4.0, 4.0, 4.0]);
    assert!(equal.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
    let raw = [1.2, -0.1, 0.3];
    let p = project_vector(&raw);
    let grid = grid_projection(&raw);
    for (a, b) in p.iter().zip(&grid) {
        assert!((a - b).abs() <= 1.0 / 400.0, "{p:?} vs {grid:?}");
    }
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    assert!(p.iter().all(|&x| x >= 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p = project_vector(&v);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14 && p.iter().all(|&x| x >= 0.0));
        // Variational inequality: (v − p)·(q − p) ≤ 0 at the vertices q.
        for k in 0..3 {
            let mut q = [0.0; 3];
            q[k] = 1.0;
            let s: f64 = (0..3).map(|i| (v[i] - p[i]) * (q[i] - p[i])).sum();
            assert!(s <= 1e-12);
        }
    }
}

fn h2_problem(field: ChargeField) -> (AlchemicalSystem, AlchemicalProblem) {
    let s = Scaffold::dimer(0.7414, &["H", "H"]).unwrap();
    let sys = AlchemicalSystem::new(s, field, &CorePotential::None).unwrap();
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    (sys, p)
}

#[test]
fn empty_field_costs_nothing() {
    let (sys, p) = h2_problem(ChargeField::vacuum());
    let circuit = Circuit::new(4, 1, Rotation::Ry, Entangler::AllToAll).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let alpha = AlphaWeights::uniform(&sys.scaffold);
    for _ in 0..5 {
        let theta: Vec<f64> = (0..8).map(|_| rng.random_range(0.0..6.0)).collect();
        assert_eq!(cost(&p, &circuit, &theta, &alpha, 1e3).unwrap(), 0.0);
    }
}

#[test]
fn cost_scaling_and_reporting() {
    let sys = hnl_case([-0.5, 0.5]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let circuit = Circuit::new(4, 2, Rotation::Ry, Entangler::AllToAll).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..5 {
        let theta: Vec<f64> = (0..12).map(|_| rng.random_range(0.0..6.0)).collect();
        let raw: Vec<Vec<f64>> = (0..2).map(|_| (0..3).map(|_| rng.random::<f64>()).collect()).collect();
        let alpha = project_simplex(&raw);
        let c1 = cost(&p, &circuit, &theta, &alpha, 1000.0).unwrap();
        let c2 = cost(&p, &circuit, &theta, &alpha, 2000.0).unwrap();
        assert!((c2 - 2.0 * c1).abs() <= 1e-12 * c1.abs().max(1.0));
        assert_eq!(reported_binding_energy(c1, 1000.0), c1 / 1000.0);
        // The gap is ⟨H_C⟩ − ⟨H⟩ on the same state.
        let state = circuit.apply(&theta, circuit.all_ones()).unwrap();
        let gap = expectation(&p.hamiltonian(&alpha, true).unwrap(), &state).unwrap()
            - expectation(&p.hamiltonian(&alpha, false).unwrap(), &state).unwrap();
        assert!((c1 / 1000.0 - gap).abs() < 1e-12);
    }
    assert_eq!(reported_binding_energy(0.0, 1000.0), 0.0);
}

#[test]
fn cost_at_gap_ground_state() {
    let sys = hnl_case([-0.5, 0.5]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let alpha = AlphaWeights::one_hot(&sys.scaffold, &[0, 0]).unwrap();
    let gap_op = PauliSum::linear_combination(
        4,
        [
            (1.0, &p.hamiltonian(&alpha, true).unwrap()),
            (-1.0, &p.hamiltonian(&alpha, false).unwrap()),
        ],
    );
    let (e, state) = ground_state(&gap_op, Solver::Dense).unwrap();
    let c = cost_on_state(&p, &state, &alpha, 1e3).unwrap();
    assert!((c / 1e3 - e).abs() < 1e-8);
}

#[test]
fn penalty_values() {
    let s = Statevector::basis(4, 0b0011).unwrap();
    assert_eq!(number_penalty(&s, 2.0, 0.0), 0.0);
    assert_eq!(number_penalty(&s, 2.0, 3.0), 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mixed = Statevector::from_amplitudes(vec![
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
    ])
    .unwrap();
    // Half weight on N = 0, half on N = 2, target 1: penalty = weight.
    assert!((number_penalty(&mixed, 1.0, 0.7) - 0.7).abs() < 1e-15);
    let op = crate::qubits::number_penalty(2, 1.0, 0.7);
    assert!((expectation(&op, &mixed).unwrap() - 0.7).abs() < 1e-15);
}

#[test]
fn single_qubit_toy_converges() {
    let circuit = Circuit::new(1, 0, Rotation::Ry, Entangler::AllToAll).unwrap();
    let h = PauliSum::from_terms(1, [(1.0, PauliString::z(0))]);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let theta0 = vec![rng.random_range(0.1..std::f64::consts::PI)];
        let mut objective = |t: &[f64]| -> crate::Result<(f64, Vec<f64>)> {
            let e = |x: f64| expectation(&h, &circuit.apply(&[x], 1).unwrap()).unwrap();
            Ok((e(t[0]), vec![(e(t[0] + 1e-4) - e(t[0] - 1e-4)) / 2e-4]))
        };
        let clamp = |x: &mut [f64]| x.iter_mut().for_each(|v| *v = v.clamp(0.0, std::f64::consts::TAU));
        let mut opt = ProjectedBfgs::new(theta0, clamp, &mut objective, 1e-10).unwrap();
        let mut iterations = 0;
        while opt.step(&mut objective).unwrap() == StepStatus::Moved {
            iterations += 1;
            assert!(iterations < 50);
        }
        assert!((opt.value + 1.0).abs() < 1e-8, "{}", opt.value);
    }
}

#[test]
fn plain_vqe_reaches_h2_fci() {
    let (sys, p) = h2_problem(ChargeField::vacuum());
    let circuit = Circuit::new(4, 2, Rotation::Ry, Entangler::AllToAll).unwrap();
    let config = OptimizerConfig { seed: 3, theta_starts: 4, ..Default::default() };
    let trace = optimize(&p, &circuit, &config, None, None).unwrap();
    let alpha = AlphaWeights::uniform(&sys.scaffold);
    let fci = crate::oracle::exact_ground_energy(&p.hamiltonian(&alpha, false).unwrap()).unwrap();
    assert!((trace.e_vac - fci).abs() < 1e-4, "{} vs {fci}", trace.e_vac);
    assert_eq!(trace.delta_e, 0.0);
    assert!(trace.records.len() <= 500);
}

#[test]
fn traces_are_deterministic_and_feasible() {
    let sys = hnl_case([-0.5, 0.5]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let circuit = Circuit::new(4, 2, Rotation::Ry, Entangler::AllToAll).unwrap();
    let config = OptimizerConfig { seed: 5, max_iterations: 60, restarts: 2, ..Default::default() };
    let a = optimize(&p, &circuit, &config, None, None).unwrap();
    let b = optimize(&p, &circuit, &config, None, None).unwrap();
    assert_eq!(a, b);
    let mut best = f64::INFINITY;
    for r in &a.records {
        assert!(r.simplex_residual <= 1e-10 && r.bound_violation <= 1e-10);
        assert!(r.best_cost <= best);
        best = r.best_cost;
    }
    assert!(a.records.iter().any(|r| r.restart == 1));
}

#[test]
fn one_state_mode_respects_constraints() {
    let sys = hnl_case([0.1, 0.2]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let circuit = Circuit::new(4, 1, Rotation::Ry, Entangler::Linear).unwrap();
    let config = OptimizerConfig {
        mode: CostMode::OneState,
        max_iterations: 100,
        seed: 2,
        ..Default::default()
    };
    let t = optimize(&p, &circuit, &config, None, None).unwrap();
    for r in &t.records {
        assert!(r.simplex_residual <= 1e-10 && r.bound_violation <= 1e-10);
    }
    assert!(t.theta_charged.is_none());
    let direct = cost(&p, &circuit, &t.theta_opt, &t.alpha_opt, config.scale).unwrap();
    assert!((direct - t.cost).abs() < 1e-9);
    assert!(t.records.windows(2).all(|w| w[1].cost <= w[0].cost + 1e-12));
}

#[test]
fn selection_invariant_under_scale() {
    let sys = hnl_case([-0.5, 0.5]);
    let active = sys.uniform_active_space(2, DEFAULT_OVERLAP_THRESHOLD).unwrap();
    let p = AlchemicalProblem::new(&sys, &active, None).unwrap();
    let circuit = Circuit::new(4, 0, Rotation::Ry, Entangler::AllToAll).unwrap();
    let theta = vec![0.3, 1.1, 2.0, 0.7];
    let argmin = |f: f64| {
        crate::oracle::enumerate_compositions(&sys.scaffold)
            .into_iter()
            .map(|a| (cost(&p, &circuit, &theta, &a, f).unwrap(), a.argmax()))
            .min_by(|x, y| x.0.total_cmp(&y.0))
            .unwrap()
            .1
    };
    assert_eq!(argmin(1.0), argmin(1e3));
    assert_eq!(argmin(1e3), argmin(1e6));
}

#[test]
fn config_validation() {
    assert!(OptimizerConfig::default().validate().is_ok());
    let bad = OptimizerConfig { scale: 0.0, ..Default::default() };
    assert!(bad.validate().is_err());
    let bad = OptimizerConfig { restarts: 0, ..Default::default() };
    assert!(bad.validate().is_err());
}
