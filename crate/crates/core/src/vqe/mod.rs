//! Joint variational optimization of circuit angles and alchemical weights.

mod bfgs;
mod optimize;
mod problem;
mod simplex;

pub use bfgs::{Objective, ProjectedBfgs, StepStatus};
pub use optimize::{
    cost, cost_on_state, number_penalty, optimize, reported_binding_energy, CostMode,
    IterationRecord, OptimizerConfig, RunTrace, UpdateScheme,
};
pub use problem::{AlchemicalProblem, Components, Estimator, NumberPenalty};
pub use simplex::{project_simplex, project_vector};

#[cfg(test)]
mod tests;
