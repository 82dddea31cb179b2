//! Per-run iteration traces shared by every solver family.

use ndarray::Array1;
use serde::Serialize;

use crate::model::FactorState;

/// Everything a solver records about one run.
#[derive(Debug, Clone, Serialize)]
pub struct SolverTrace {
    pub algorithm: String,
    /// Objective before the first iteration.
    pub initial_objective: f64,
    /// Objective in the coefficient parametrization after each iteration.
    pub objective_per_iteration: Vec<f64>,
    /// Factor objective `g` after each iteration, for factor-based algorithms.
    pub factor_objective_per_iteration: Option<Vec<f64>>,
    /// Convergence statistic between consecutive iterates.
    pub statistic_per_iteration: Vec<f64>,
    /// Cumulative ridge solves at the end of each iteration.
    pub ridge_solves_per_iteration: Vec<usize>,
    pub ridge_solves: usize,
    pub coordinate_sweeps: usize,
    /// Inner Newton or IRLS steps, where applicable.
    pub inner_steps: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Set when a diagonal weight was clamped or an inner loop hit its cap.
    pub numerical_warning: bool,
    pub final_beta: Array1<f64>,
    pub final_factors: Option<FactorState>,
    /// Iterates after each iteration, when requested by the convergence config.
    #[serde(skip)]
    pub iterates: Vec<Array1<f64>>,
}

impl SolverTrace {
    pub fn new(algorithm: impl Into<String>, initial_beta: Array1<f64>, initial_objective: f64) -> Self {
        SolverTrace {
            algorithm: algorithm.into(),
            initial_objective,
            objective_per_iteration: Vec::new(),
            factor_objective_per_iteration: None,
            statistic_per_iteration: Vec::new(),
            ridge_solves_per_iteration: Vec::new(),
            ridge_solves: 0,
            coordinate_sweeps: 0,
            inner_steps: 0,
            iterations: 0,
            converged: false,
            numerical_warning: false,
            final_beta: initial_beta,
            final_factors: None,
            iterates: Vec::new(),
        }
    }

    pub fn final_objective(&self) -> f64 {
        self.objective_per_iteration
            .last()
            .copied()
            .unwrap_or(self.initial_objective)
    }

    /// Largest relative increase between consecutive entries of `values`.
    pub fn max_relative_increase(values: &[f64]) -> f64 {
        values
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].abs().max(1e-300))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `iteration,objective,ridge_solves,statistic` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,objective,ridge_solves,statistic\n");
        for i in 0..self.objective_per_iteration.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                fmt_f64(self.objective_per_iteration[i]),
                self.ridge_solves_per_iteration.get(i).copied().unwrap_or(0),
                fmt_f64(self.statistic_per_iteration.get(i).copied().unwrap_or(f64::NAN)),
            ));
        }
        out
    }

    /// Compact JSON summary of the run.
    pub fn summary_json(&self, kkt_max_violation: Option<f64>) -> serde_json::Value {
        serde_json::json!({
            "algorithm": self.algorithm,
            "converged": self.converged,
            "iterations": self.iterations,
            "ridge_solves": self.ridge_solves,
            "coordinate_sweeps": self.coordinate_sweeps,
            "inner_steps": self.inner_steps,
            "final_objective": json_f64(self.final_objective()),
            "kkt_max_violation": kkt_max_violation.map(json_f64),
            "numerical_warning": self.numerical_warning,
        })
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn json_f64(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}
