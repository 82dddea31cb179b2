//! Optimization algorithms for penalized linear regression.
//!
//! All solvers operate on the precomputed `(Q, l)` of a [`RegressionProblem`]
//! and stop on the coordinate-scaled squared-change statistic
//! `max_j (β_j^{old} - β_j^{new})^2 Σ_k x_{k,j}^2 <= δ`.

pub(crate) mod ccd;
mod hpp;
mod hybrid;
pub(crate) mod lla;
mod lqa;

pub use ccd::{solve_ccd, CcdState};
pub use hpp::{hpp_factor_update, solve_hpp};
pub use hybrid::{solve_hpcd, solve_lqcd};
pub use lla::solve_lla;
pub use lqa::{lqa_weight, solve_lqa};

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{HppError, Result};
use crate::linalg::{spd_solve, Cholesky};
use crate::model::RegressionProblem;
use crate::trace::SolverTrace;

/// Stopping rule shared by every iterative solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergenceConfig {
    pub delta: f64,
    pub max_iterations: usize,
    /// Run exactly `max_iterations` iterations, ignoring `delta`.
    pub fixed_iterations: bool,
    /// Keep a copy of every iterate in the trace.
    pub record_iterates: bool,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            delta: 1e-6,
            max_iterations: 10_000,
            fixed_iterations: false,
            record_iterates: false,
        }
    }
}

impl ConvergenceConfig {
    pub fn new(delta: f64, max_iterations: usize) -> Result<Self> {
        let c = ConvergenceConfig {
            delta,
            max_iterations,
            ..Default::default()
        };
        c.validate()?;
        Ok(c)
    }

    /// Runs for exactly `n` iterations.
    pub fn fixed(n: usize) -> Self {
        ConvergenceConfig {
            max_iterations: n,
            fixed_iterations: true,
            ..Default::default()
        }
    }

    pub fn recording(mut self) -> Self {
        self.record_iterates = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(HppError::arg(format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }
}

/// Perturbation for local quadratic approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LqaConfig {
    pub epsilon: f64,
}

impl Default for LqaConfig {
    fn default() -> Self {
        LqaConfig { epsilon: 1e-12 }
    }
}

impl LqaConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(HppError::arg("epsilon must be positive"));
        }
        Ok(LqaConfig { epsilon })
    }
}

/// `max_j (β_j^{prev} - β_j^{next})^2 · column_norms_sq_j`.
pub fn convergence_statistic(
    beta_prev: ArrayView1<f64>,
    beta_next: ArrayView1<f64>,
    column_norms_sq: ArrayView1<f64>,
) -> f64 {
    assert_eq!(beta_prev.len(), beta_next.len());
    assert_eq!(beta_prev.len(), column_norms_sq.len());
    beta_prev
        .iter()
        .zip(beta_next.iter())
        .zip(column_norms_sq.iter())
        .map(|((a, b), c)| (a - b) * (a - b) * c)
        .fold(0.0, f64::max)
}

/// Shared starting point: least squares when `n > p`, otherwise the ridge
/// estimate `(Q + (λ/2) I)^{-1} l`.
pub fn default_start(problem: &RegressionProblem, lambda: f64) -> Result<Array1<f64>> {
    let p = problem.p();
    if problem.n() > p {
        if let Ok(chol) = Cholesky::factor(problem.q().view()) {
            return Ok(chol.solve(problem.l().view()));
        }
    }
    let ridge = if lambda > 0.0 { lambda / 2.0 } else { 1e-8 };
    let mut a = problem.q().clone();
    for j in 0..p {
        a[[j, j]] += ridge;
    }
    spd_solve(a.view(), problem.l().view())
}

/// Book-keeping for the iteration loop of a solver.
pub(crate) struct Recorder {
    pub trace: SolverTrace,
    conv: ConvergenceConfig,
    norms: Array1<f64>,
}

impl Recorder {
    pub fn new(
        algorithm: &str,
        conv: &ConvergenceConfig,
        norms: Array1<f64>,
        initial_beta: Array1<f64>,
        initial_objective: f64,
    ) -> Result<Self> {
        conv.validate()?;
        Ok(Recorder {
            trace: SolverTrace::new(algorithm, initial_beta, initial_objective),
            conv: *conv,
            norms,
        })
    }

    pub fn done(&self) -> bool {
        self.trace.converged || self.trace.iterations >= self.conv.max_iterations
    }

    /// Records one iteration that moved `prev` to `next`; returns the statistic.
    pub fn step(&mut self, prev: ArrayView1<f64>, next: &Array1<f64>, objective: f64) -> f64 {
        let stat = convergence_statistic(prev, next.view(), self.norms.view());
        let t = &mut self.trace;
        t.iterations += 1;
        t.objective_per_iteration.push(objective);
        t.statistic_per_iteration.push(stat);
        t.ridge_solves_per_iteration.push(t.ridge_solves);
        if self.conv.record_iterates {
            t.iterates.push(next.clone());
        }
        t.final_beta = next.clone();
        stat
    }

    /// Records an iteration and applies the stopping rule.
    pub fn step_and_test(&mut self, prev: ArrayView1<f64>, next: &Array1<f64>, objective: f64) -> bool {
        let stat = self.step(prev, next, objective);
        if !self.conv.fixed_iterations && stat <= self.conv.delta {
            self.trace.converged = true;
        }
        self.trace.converged
    }

    pub fn push_factor_objective(&mut self, g: f64) {
        self.trace
            .factor_objective_per_iteration
            .get_or_insert_with(Vec::new)
            .push(g);
    }

    pub fn finish(mut self) -> SolverTrace {
        if self.conv.fixed_iterations {
            // a fixed-length run reports convergence by the final statistic
            self.trace.converged = self
                .trace
                .statistic_per_iteration
                .last()
                .is_some_and(|s| *s <= self.conv.delta);
        }
        self.trace
    }
}
