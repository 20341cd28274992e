//! Cost functions and the joint (θ, α) optimization driver.

use std::cell::Cell;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bfgs::{ProjectedBfgs, StepStatus};
use super::problem::{AlchemicalProblem, Estimator};
use super::simplex::{project_simplex, project_vector};
use crate::alchemy::AlphaWeights;
use crate::error::{Error, Result};
use crate::qubits::{expectation, sampled_expectation, Circuit, PauliSum, Statevector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CostMode {
    /// One ansatz state: f·⟨H_C(α) − H(α)⟩.
    OneState,
    /// Separate states for H(α) and H_C(α); α descends on their energy gap.
    #[default]
    TwoState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UpdateScheme {
    /// One θ step and one α step per iteration.
    #[default]
    Joint,
    /// θ relaxed for up to `inner_iterations` steps before each α step.
    Alternating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Scale factor f applied to the energy gap.
    pub scale: f64,
    pub restarts: usize,
    /// Central-difference step on θ.
    pub theta_step: f64,
    /// Convergence tolerance on the projected gradient and on α movement.
    pub tolerance: f64,
    pub seed: u64,
    pub mode: CostMode,
    pub update: UpdateScheme,
    pub inner_iterations: usize,
    /// Step length of the two-state α update per unit scaled-cost gradient.
    pub alpha_rate: f64,
    /// Largest change of any α component in one two-state update.
    pub max_alpha_change: f64,
    /// 0 for exact expectations.
    pub shots: u64,
    /// Random angle sets relaxed at α₀ before the first restart; the best is kept.
    pub theta_starts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 500,
            scale: 1e3,
            restarts: 1,
            theta_step: 1e-4,
            tolerance: 1e-8,
            seed: 0,
            mode: CostMode::TwoState,
            update: UpdateScheme::Joint,
            inner_iterations: 20,
            alpha_rate: 2e-3,
            max_alpha_change: 0.05,
            shots: 0,
            theta_starts: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Config("scale factor must be positive".into()));
        }
        if self.max_iterations == 0
            || self.restarts == 0
            || self.inner_iterations == 0
            || self.theta_starts == 0
        {
            return Err(Error::Config("iteration and restart counts must be at least 1".into()));
        }
        if !(self.theta_step > 0.0) || !(self.alpha_rate > 0.0) || !(self.max_alpha_change > 0.0) {
            return Err(Error::Config("step sizes must be positive".into()));
        }
        Ok(())
    }
}

/// One logged iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub restart: usize,
    pub iteration: usize,
    pub alpha: Vec<Vec<f64>>,
    /// Scaled cost f·ΔE (plus penalty in one-state mode).
    pub cost: f64,
    pub delta_e: f64,
    pub e_vac: f64,
    pub e_charged: f64,
    pub best_cost: f64,
    pub simplex_residual: f64,
    pub bound_violation: f64,
    pub gradient_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    /// Angles of the vacuum state (the single state in one-state mode).
    pub theta_opt: Vec<f64>,
    /// Angles of the charged state in two-state mode.
    pub theta_charged: Option<Vec<f64>>,
    pub alpha_opt: AlphaWeights,
    pub cost: f64,
    pub delta_e: f64,
    pub e_vac: f64,
    pub e_charged: f64,
    pub converged: bool,
    pub best_restart: usize,
}

/// weight · Σ_b |ψ_b|² (popcount(b) − target)².
pub fn number_penalty(state: &Statevector, target: f64, weight: f64) -> f64 {
    if weight == 0.0 {
        return 0.0;
    }
    weight
        * state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * (b.count_ones() as f64 - target).powi(2))
            .sum::<f64>()
}

/// f·(⟨H_C(α)⟩ − ⟨H(α)⟩) on one state.
pub fn cost_on_state(
    problem: &AlchemicalProblem,
    state: &Statevector,
    alpha: &AlphaWeights,
    scale: f64,
) -> Result<f64> {
    let gap = expectation(problem.field_operator(), state)? + problem.nuclear(alpha).1;
    if !gap.is_finite() {
        return Err(Error::Numerical(format!("energy gap {gap} at α = {:?}", alpha.sites())));
    }
    Ok(scale * gap)
}

/// f·(⟨H_C(α)⟩ − ⟨H(α)⟩) on the ansatz state |ψ(θ)⟩.
pub fn cost(
    problem: &AlchemicalProblem,
    circuit: &Circuit,
    theta: &[f64],
    alpha: &AlphaWeights,
    scale: f64,
) -> Result<f64> {
    let state = circuit.apply(theta, circuit.all_ones())?;
    cost_on_state(problem, &state, alpha, scale)
}

/// The cost divided by f, in hartree.
pub fn reported_binding_energy(cost: f64, scale: f64) -> f64 {
    cost / scale
}

/// Two-state iterations over which both energies must change by less than
/// the tolerance, with α fixed, to count as converged.
const STALL_WINDOW: usize = 10;

/// Growth of the two-state α rate while consecutive steps stay aligned
/// (cosine above `RATE_ALIGNMENT`); reversals halve it, down to the configured rate.
const RATE_GROWTH: f64 = 1.1;
const RATE_ALIGNMENT: f64 = 0.5;
const MAX_RATE_FACTOR: f64 = 1e3;

/// Expectation evaluations with deterministic shot seeds.
struct Evaluator<'a> {
    circuit: &'a Circuit,
    shots: u64,
    seed: u64,
    counter: Cell<u64>,
    step: f64,
}

impl Evaluator<'_> {
    fn next_seed(&self) -> u64 {
        let c = self.counter.get() + 1;
        self.counter.set(c);
        self.seed ^ c.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }

    fn estimator(&self) -> Estimator {
        if self.shots == 0 {
            Estimator::Exact
        } else {
            Estimator::Shots {
                shots: self.shots,
                seed: self.next_seed(),
            }
        }
    }

    fn state(&self, theta: &[f64]) -> Result<Statevector> {
        self.circuit.apply(theta, self.circuit.all_ones())
    }

    fn energy_seeded(&self, theta: &[f64], h: &PauliSum, seed: u64) -> Result<f64> {
        let state = self.state(theta)?;
        let e = if self.shots == 0 {
            expectation(h, &state)?
        } else {
            sampled_expectation(h, &state, self.shots, seed)?.0
        };
        if !e.is_finite() {
            return Err(Error::Numerical(format!("energy {e} at θ = {theta:?}")));
        }
        Ok(e)
    }

    /// Value and central-difference gradient of ⟨h⟩(θ), common seeds per probe pair.
    fn value_and_gradient(&self, theta: &[f64], h: &PauliSum, scale: f64) -> Result<(f64, Vec<f64>)> {
        let value = scale * self.energy_seeded(theta, h, self.next_seed())?;
        let mut g = Vec::with_capacity(theta.len());
        let mut probe = theta.to_vec();
        for i in 0..theta.len() {
            let seed = self.next_seed();
            probe[i] = theta[i] + self.step;
            let up = self.energy_seeded(&probe, h, seed)?;
            probe[i] = theta[i] - self.step;
            let down = self.energy_seeded(&probe, h, seed)?;
            probe[i] = theta[i];
            g.push(scale * (up - down) / (2.0 * self.step));
        }
        Ok((value, g))
    }
}

/// Relax each candidate at fixed `h` and return the lowest-energy angles.
fn best_start(
    eval: &Evaluator,
    h: &PauliSum,
    candidates: Vec<Vec<f64>>,
    config: &OptimizerConfig,
) -> Result<Vec<f64>> {
    if candidates.len() == 1 {
        return Ok(candidates.into_iter().next().unwrap_or_default());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for theta in candidates {
        let mut objective = |t: &[f64]| eval.value_and_gradient(t, h, 1.0);
        let mut opt = ProjectedBfgs::new(theta, clamp_angles, &mut objective, config.tolerance)?;
        for _ in 0..config.max_iterations {
            let n = opt.x.len();
            unpin_angles(&mut opt, n);
            if opt.step(&mut objective)? == StepStatus::Converged {
                break;
            }
        }
        if best.as_ref().is_none_or(|(v, _)| opt.value < *v) {
            best = Some((opt.value, opt.x));
        }
    }
    Ok(best.map(|(_, x)| x).unwrap_or_default())
}

fn clamp_angles(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(0.0, TAU);
    }
}

/// Move angles pinned at 0 or 2π with an outward gradient to the opposite
/// bound. Energies are 2π-periodic in every angle, so value, gradient and
/// curvature are unchanged.
fn unpin_angles(opt: &mut ProjectedBfgs, count: usize) {
    for i in 0..count {
        if opt.x[i] <= 0.0 && opt.gradient[i] > 0.0 {
            opt.x[i] = TAU;
        } else if opt.x[i] >= TAU && opt.gradient[i] < 0.0 {
            opt.x[i] = 0.0;
        }
    }
}

fn record(
    restart: usize,
    iteration: usize,
    alpha: &AlphaWeights,
    values: (f64, f64, f64, f64),
    best: f64,
    gradient_norm: Option<f64>,
) -> IterationRecord {
    let (cost, delta_e, e_vac, e_charged) = values;
    IterationRecord {
        restart,
        iteration,
        alpha: alpha.sites().to_vec(),
        cost,
        delta_e,
        e_vac,
        e_charged,
        best_cost: best,
        simplex_residual: alpha.simplex_residual(),
        bound_violation: alpha.bound_violation(),
        gradient_norm,
    }
}

struct RestartResult {
    records: Vec<IterationRecord>,
    theta: Vec<f64>,
    theta_charged: Option<Vec<f64>>,
    alpha: AlphaWeights,
    values: (f64, f64, f64, f64),
    converged: bool,
}

fn two_state(
    problem: &AlchemicalProblem,
    eval: &Evaluator,
    config: &OptimizerConfig,
    restart: usize,
    theta: (Vec<f64>, Vec<f64>),
    alpha0: &AlphaWeights,
    best: &mut f64,
) -> Result<RestartResult> {
    let mut alpha = alpha0.clone();
    let mut h_vac = problem.hamiltonian(&alpha, false)?;
    let mut h_chg = problem.hamiltonian(&alpha, true)?;
    let tol = config.tolerance;
    let mut vac = ProjectedBfgs::new(
        theta.0,
        clamp_angles,
        &mut |t: &[f64]| eval.value_and_gradient(t, &h_vac, 1.0),
        tol,
    )?;
    let mut chg = ProjectedBfgs::new(
        theta.1,
        clamp_angles,
        &mut |t: &[f64]| eval.value_and_gradient(t, &h_chg, 1.0),
        tol,
    )?;
    let inner = match config.update {
        UpdateScheme::Joint => 1,
        UpdateScheme::Alternating => config.inner_iterations,
    };
    let mut records = Vec::new();
    let mut converged = false;
    let mut values = (0.0, 0.0, 0.0, 0.0);
    let mut history = Vec::new();
    let mut rate = config.alpha_rate;
    let mut previous_step: Option<Vec<f64>> = None;
    for iteration in 0..config.max_iterations {
        let mut settled = true;
        for (opt, h) in [(&mut vac, &h_vac), (&mut chg, &h_chg)] {
            let mut objective = |t: &[f64]| eval.value_and_gradient(t, h, 1.0);
            let mut done = false;
            for _ in 0..inner {
                unpin_angles(opt, opt.x.len());
                if opt.step(&mut objective)? == StepStatus::Converged {
                    done = true;
                    break;
                }
            }
            settled &= done;
        }
        let cv = problem.components(&eval.state(&vac.x)?, eval.estimator())?;
        let cc = problem.components(&eval.state(&chg.x)?, eval.estimator())?;
        let e_vac = problem.energy(&cv, &alpha, false);
        let e_chg = problem.energy(&cc, &alpha, true);
        let delta = e_chg - e_vac;
        if !delta.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite energies (E = {e_vac}, E_C = {e_chg}) at iteration {iteration}"
            )));
        }
        let gv = problem.alpha_gradient(&cv, &alpha, false);
        let gc = problem.alpha_gradient(&cc, &alpha, true);
        let grad: Vec<Vec<f64>> = gc
            .iter()
            .zip(&gv)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| config.scale * (x - y)).collect())
            .collect();
        let raw: Vec<Vec<f64>> = alpha
            .sites()
            .iter()
            .zip(&grad)
            .map(|(w, g)| w.iter().zip(g).map(|(a, d)| a - rate * d).collect())
            .collect();
        let target = project_simplex(&raw);
        let flat_old = alpha.flatten();
        let flat_new = target.flatten();
        let movement = flat_old
            .iter()
            .zip(&flat_new)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let cost = config.scale * delta;
        *best = best.min(cost);
        values = (cost, delta, e_vac, e_chg);
        let grad_norm = (movement / rate).max(vac.projected_gradient_norm()).max(chg.projected_gradient_norm());
        records.push(record(restart, iteration, &alpha, values, *best, Some(grad_norm)));
        history.push((e_vac, e_chg));
        let stalled = history.len() > STALL_WINDOW && {
            let (a, b) = history[history.len() - 1 - STALL_WINDOW];
            (e_vac - a).abs() < tol && (e_chg - b).abs() < tol
        };
        if (settled || stalled) && movement < tol {
            converged = true;
            break;
        }
        let step: Vec<f64> = flat_new.iter().zip(&flat_old).map(|(a, b)| a - b).collect();
        if let Some(prev) = &previous_step {
            let dot: f64 = step.iter().zip(prev).map(|(a, b)| a * b).sum();
            let norms = step.iter().map(|x| x * x).sum::<f64>().sqrt()
                * prev.iter().map(|x| x * x).sum::<f64>().sqrt();
            if dot > RATE_ALIGNMENT * norms {
                rate = (rate * RATE_GROWTH).min(config.alpha_rate * MAX_RATE_FACTOR);
            } else if dot < 0.0 {
                rate = (rate * 0.5).max(config.alpha_rate);
            }
        }
        previous_step = Some(step);
        let t = if movement > config.max_alpha_change {
            config.max_alpha_change / movement
        } else {
            1.0
        };
        alpha = if t < 1.0 { alpha.lerp(&target, t) } else { target };
        // Keep the iterate exactly on the simplex after interpolation.
        alpha = project_simplex(alpha.sites());
        h_vac = problem.hamiltonian(&alpha, false)?;
        h_chg = problem.hamiltonian(&alpha, true)?;
        vac.refresh(&mut |t: &[f64]| eval.value_and_gradient(t, &h_vac, 1.0))?;
        chg.refresh(&mut |t: &[f64]| eval.value_and_gradient(t, &h_chg, 1.0))?;
    }
    Ok(RestartResult {
        records,
        theta: vac.x,
        theta_charged: Some(chg.x),
        alpha,
        values,
        converged,
    })
}

fn one_state(
    problem: &AlchemicalProblem,
    eval: &Evaluator,
    config: &OptimizerConfig,
    restart: usize,
    theta: Vec<f64>,
    alpha0: &AlphaWeights,
    best: &mut f64,
) -> Result<RestartResult> {
    let shape = alpha0.shape();
    let n_theta = theta.len();
    let split = |z: &[f64]| -> AlphaWeights {
        let mut sites = Vec::new();
        let mut i = n_theta;
        for &n in &shape {
            sites.push(z[i..i + n].to_vec());
            i += n;
        }
        project_simplex(&sites)
    };
    let project = |z: &mut [f64]| {
        clamp_angles(&mut z[..n_theta]);
        let mut i = n_theta;
        for &n in &shape {
            let p = project_vector(&z[i..i + n]);
            z[i..i + n].copy_from_slice(&p);
            i += n;
        }
    };
    let penalty = problem.penalty_operator().cloned();
    let gap_op = match &penalty {
        Some(p) => PauliSum::linear_combination(
            problem.qubits(),
            [(config.scale, problem.field_operator()), (1.0, p)],
        ),
        None => problem.field_operator().scaled(config.scale),
    };
    let mut objective = |z: &[f64]| -> Result<(f64, Vec<f64>)> {
        let alpha = split(z);
        let (value, mut g) = eval.value_and_gradient(&z[..n_theta], &gap_op, 1.0)?;
        let (_, v_nq) = problem.nuclear(&alpha);
        for row in problem.field_nuclear_gradient() {
            g.extend(row.iter().map(|d| config.scale * d));
        }
        Ok((value + config.scale * v_nq, g))
    };
    let mut z = theta;
    z.extend(alpha0.flatten());
    let mut opt = ProjectedBfgs::new(z, project, &mut objective, config.tolerance)?;
    let mut records = Vec::new();
    let mut converged = false;
    let mut best_point = (opt.x.clone(), opt.value);
    let mut values = (0.0, 0.0, 0.0, 0.0);
    for iteration in 0..config.max_iterations {
        unpin_angles(&mut opt, n_theta);
        let status = opt.step(&mut objective)?;
        let alpha = split(&opt.x);
        let state = eval.state(&opt.x[..n_theta])?;
        let c = problem.components(&state, eval.estimator())?;
        let e_vac = problem.energy(&c, &alpha, false);
        let e_chg = problem.energy(&c, &alpha, true);
        *best = best.min(opt.value);
        if opt.value <= best_point.1 {
            best_point = (opt.x.clone(), opt.value);
        }
        let cost = opt.value;
        values = (cost, e_chg - e_vac, e_vac, e_chg);
        records.push(record(
            restart,
            iteration,
            &alpha,
            values,
            *best,
            Some(opt.projected_gradient_norm()),
        ));
        if status == StepStatus::Converged {
            converged = true;
            break;
        }
    }
    if !converged {
        let alpha = split(&best_point.0);
        let state = eval.state(&best_point.0[..n_theta])?;
        let c = problem.components(&state, eval.estimator())?;
        let e_vac = problem.energy(&c, &alpha, false);
        let e_chg = problem.energy(&c, &alpha, true);
        values = (best_point.1, e_chg - e_vac, e_vac, e_chg);
        opt.x = best_point.0;
    }
    Ok(RestartResult {
        records,
        theta: opt.x[..n_theta].to_vec(),
        theta_charged: None,
        alpha: split(&opt.x),
        values,
        converged,
    })
}

/// Minimize the configured cost from `theta0` (random in [0, π] when absent)
/// and `alpha0` (uniform when absent). Later restarts reuse the previous angles.
pub fn optimize(
    problem: &AlchemicalProblem,
    circuit: &Circuit,
    config: &OptimizerConfig,
    theta0: Option<Vec<f64>>,
    alpha0: Option<AlphaWeights>,
) -> Result<RunTrace> {
    config.validate()?;
    if circuit.qubits != problem.qubits() {
        return Err(Error::Dimension(format!(
            "circuit on {} qubits, Hamiltonian on {}",
            circuit.qubits,
            problem.qubits()
        )));
    }
    let n = circuit.parameter_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let theta0 = match theta0 {
        Some(t) if t.len() == n => t,
        Some(t) => {
            return Err(Error::Dimension(format!("expected {n} angles, got {}", t.len())));
        }
        None => (0..n).map(|_| rng.random_range(0.0..PI)).collect(),
    };
    let alpha0 = match alpha0 {
        Some(a) => a,
        None => AlphaWeights::new(problem.shape().iter().map(|&k| vec![1.0 / k as f64; k]).collect())?,
    };
    if alpha0.shape() != problem.shape() {
        return Err(Error::Dimension("initial weights do not match the problem".into()));
    }
    let eval = Evaluator {
        circuit,
        shots: config.shots,
        seed: config.seed,
        counter: Cell::new(0),
        step: config.theta_step,
    };
    let mut candidates = vec![theta0];
    for _ in 1..config.theta_starts {
        candidates.push((0..n).map(|_| rng.random_range(0.0..PI)).collect());
    }
    let mut warm = match config.mode {
        CostMode::TwoState => (
            best_start(&eval, &problem.hamiltonian(&alpha0, false)?, candidates.clone(), config)?,
            best_start(&eval, &problem.hamiltonian(&alpha0, true)?, candidates, config)?,
        ),
        CostMode::OneState => {
            let gap = problem.field_operator().scaled(config.scale);
            let t = best_start(&eval, &gap, candidates, config)?;
            (t.clone(), t)
        }
    };
    let mut best = f64::INFINITY;
    let mut records = Vec::new();
    let mut chosen: Option<(usize, RestartResult)> = None;
    let mut alpha_warm = alpha0;
    for restart in 0..config.restarts {
        let mut result = match config.mode {
            CostMode::TwoState => two_state(problem, &eval, config, restart, warm.clone(), &alpha_warm, &mut best)?,
            CostMode::OneState => one_state(problem, &eval, config, restart, warm.0.clone(), &alpha_warm, &mut best)?,
        };
        alpha_warm = result.alpha.clone();
        records.append(&mut result.records);
        warm = (
            result.theta.clone(),
            result.theta_charged.clone().unwrap_or_else(|| result.theta.clone()),
        );
        let better = chosen
            .as_ref()
            .is_none_or(|(_, c)| result.values.0 < c.values.0);
        if better {
            chosen = Some((restart, result));
        }
    }
    let (best_restart, r) = chosen.expect("at least one restart");
    Ok(RunTrace {
        records,
        theta_opt: r.theta,
        theta_charged: r.theta_charged,
        alpha_opt: r.alpha,
        cost: r.values.0,
        delta_e: r.values.1,
        e_vac: r.values.2,
        e_charged: r.values.3,
        converged: r.converged,
        best_restart,
    })
}
