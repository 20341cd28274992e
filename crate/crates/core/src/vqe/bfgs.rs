//! Projected quasi-Newton minimization over a convex feasible set given by
//! its Euclidean projection.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;

/// Outcome of a single iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Moved,
    /// Projected gradient or step below tolerance.
    Converged,
}

/// Stateful projected BFGS with Armijo backtracking along the projection arc.
pub struct ProjectedBfgs<'a> {
    project: Box<dyn Fn(&mut [f64]) + 'a>,
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    inverse_hessian: DMatrix<f64>,
    pub tolerance: f64,
}

/// Objective returning value and gradient.
pub type Objective<'a> = dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)> + 'a;

impl<'a> ProjectedBfgs<'a> {
    pub fn new(
        mut x: Vec<f64>,
        project: impl Fn(&mut [f64]) + 'a,
        objective: &mut Objective<'_>,
        tolerance: f64,
    ) -> Result<Self> {
        project(&mut x);
        let (value, gradient) = objective(&x)?;
        let n = x.len();
        Ok(ProjectedBfgs {
            project: Box::new(project),
            x,
            value,
            gradient,
            inverse_hessian: DMatrix::identity(n, n),
            tolerance,
        })
    }

    /// Re-evaluate at the current point, e.g. after the objective changed.
    pub fn refresh(&mut self, objective: &mut Objective<'_>) -> Result<()> {
        let (v, g) = objective(&self.x)?;
        self.value = v;
        self.gradient = g;
        Ok(())
    }

    pub fn reset_curvature(&mut self) {
        let n = self.x.len();
        self.inverse_hessian = DMatrix::identity(n, n);
    }

    /// Norm of P(x − g) − x.
    pub fn projected_gradient_norm(&self) -> f64 {
        let mut y: Vec<f64> = self.x.iter().zip(&self.gradient).map(|(x, g)| x - g).collect();
        (self.project)(&mut y);
        y.iter().zip(&self.x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    /// Coordinates held in place by the constraints: P(x − g) leaves them unchanged.
    fn binding(&self) -> Vec<bool> {
        let mut y: Vec<f64> = self.x.iter().zip(&self.gradient).map(|(x, g)| x - g).collect();
        (self.project)(&mut y);
        y.iter()
            .zip(&self.x)
            .zip(&self.gradient)
            .map(|((a, b), g)| *g != 0.0 && a == b)
            .collect()
    }

    /// −H g on the free coordinates, −g on the binding ones.
    fn reduced_direction(&self, g: &DVector<f64>) -> DVector<f64> {
        let binding = self.binding();
        let n = g.len();
        DVector::from_fn(n, |i, _| {
            if binding[i] {
                -g[i]
            } else {
                -(0..n)
                    .filter(|&j| !binding[j])
                    .map(|j| self.inverse_hessian[(i, j)] * g[j])
                    .sum::<f64>()
            }
        })
    }

    fn trial(&self, direction: &DVector<f64>, t: f64) -> Vec<f64> {
        let mut y: Vec<f64> = self
            .x
            .iter()
            .zip(direction.iter())
            .map(|(x, d)| x + t * d)
            .collect();
        (self.project)(&mut y);
        y
    }

    fn search(
        &self,
        direction: &DVector<f64>,
        objective: &mut Objective<'_>,
    ) -> Result<Option<(Vec<f64>, f64, Vec<f64>)>> {
        let mut t = 1.0;
        for _ in 0..40 {
            let y = self.trial(direction, t);
            let decrease: f64 = y
                .iter()
                .zip(&self.x)
                .zip(&self.gradient)
                .map(|((a, b), g)| (a - b) * g)
                .sum();
            if decrease >= 0.0 {
                t *= 0.5;
                continue;
            }
            let (v, g) = objective(&y)?;
            if v <= self.value + 1e-4 * decrease {
                return Ok(Some((y, v, g)));
            }
            t *= 0.5;
        }
        Ok(None)
    }

    pub fn step(&mut self, objective: &mut Objective<'_>) -> Result<StepStatus> {
        if self.projected_gradient_norm() < self.tolerance {
            return Ok(StepStatus::Converged);
        }
        let g = DVector::from_column_slice(&self.gradient);
        let quasi_newton = self.reduced_direction(&g);
        let found = match self.search(&quasi_newton, objective)? {
            Some(r) => Some(r),
            None => {
                self.reset_curvature();
                self.search(&(-&g), objective)?
            }
        };
        let Some((y, v, gy)) = found else {
            return Ok(StepStatus::Converged);
        };
        let s = DVector::from_iterator(y.len(), y.iter().zip(&self.x).map(|(a, b)| a - b));
        let dg = DVector::from_iterator(y.len(), gy.iter().zip(&self.gradient).map(|(a, b)| a - b));
        let sy = s.dot(&dg);
        if sy > 1e-12 * s.norm() * dg.norm() && sy > 0.0 {
            let n = y.len();
            let rho = 1.0 / sy;
            let i = DMatrix::<f64>::identity(n, n);
            let left = &i - rho * &s * dg.transpose();
            let right = &i - rho * &dg * s.transpose();
            self.inverse_hessian = &left * &self.inverse_hessian * &right + rho * &s * s.transpose();
        }
        let moved = s.amax();
        let improvement = self.value - v;
        self.x = y;
        self.value = v;
        self.gradient = gy;
        if moved < 1e-12 || improvement.abs() < 1e-15 * (1.0 + v.abs()) {
            return Ok(StepStatus::Converged);
        }
        Ok(StepStatus::Moved)
    }
}
