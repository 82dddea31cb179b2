//! L_q-penalized generalized linear models.
//!
//! All objectives are scaled negative log-likelihoods
//! `2 Σ_i A(β^T x_i) - 2 β^T X^T y + λ ||β||_q^q`, so the gaussian family
//! coincides with the linear problem up to the constant `y^T y`.

mod family;
mod newton;
mod solvers;

pub use family::GlmFamily;
pub use newton::{
    factor_gradient_hessian, factor_objective, newton_inner, NewtonConfig, NewtonOutcome,
};
pub use solvers::{solve_hpp_glm, solve_lla_glm, solve_lqa_glm};

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{HppError, Result};
use crate::model::{column_sum_sq, FactorState, PenaltySpec};

/// GLM data with the sufficient statistic `X^T y` precomputed.
#[derive(Debug, Clone)]
pub struct GlmProblem {
    x: Array2<f64>,
    y: Array1<f64>,
    family: GlmFamily,
    ly: Array1<f64>,
    norms: Array1<f64>,
}

impl GlmProblem {
    pub fn new(x: Array2<f64>, y: Array1<f64>, family: GlmFamily) -> Result<Self> {
        let (n, p) = x.dim();
        if n == 0 || p == 0 {
            return Err(HppError::arg("design must have n >= 1 and p >= 1"));
        }
        if y.len() != n {
            return Err(HppError::dims(format!("X has {n} rows but y has {}", y.len())));
        }
        family.check_response(y.as_slice().unwrap_or(&y.to_vec()))?;
        let ly = x.t().dot(&y);
        let norms = column_sum_sq(&x);
        Ok(GlmProblem {
            x,
            y,
            family,
            ly,
            norms,
        })
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn family(&self) -> GlmFamily {
        self.family
    }

    /// `X^T y`.
    pub fn ly(&self) -> &Array1<f64> {
        &self.ly
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// `Σ_i x_{ij}^2`, the scaling of the convergence statistic.
    pub fn column_norms_sq(&self) -> &Array1<f64> {
        &self.norms
    }

    pub(crate) fn check_len(&self, beta: ArrayView1<f64>) -> Result<()> {
        if beta.len() != self.p() {
            return Err(HppError::dims(format!(
                "coefficient vector has length {}, p = {}",
                beta.len(),
                self.p()
            )));
        }
        Ok(())
    }

    /// Unpenalized part `2 Σ_i A(β^T x_i) - 2 β^T X^T y`.
    pub fn loss(&self, beta: ArrayView1<f64>) -> Result<f64> {
        self.check_len(beta)?;
        let eta = self.x.dot(&beta);
        let mut a = 0.0;
        for &e in eta.iter() {
            let v = self.family.cumulant(e);
            if !v.is_finite() {
                return Err(HppError::Overflow { eta: e });
            }
            a += v;
        }
        Ok(2.0 * a - 2.0 * beta.dot(&self.ly))
    }
}

/// Ridge-penalized fit minimizing `2 Σ A - 2 β^T X^T y + ridge ||β||^2`,
/// started from zero; a finite starting point even for separable data.
pub fn ridge_start(problem: &GlmProblem, ridge: f64, cfg: &NewtonConfig) -> Result<Array1<f64>> {
    if !(ridge > 0.0) {
        return Err(HppError::arg("ridge must be positive"));
    }
    let working = newton::DiagPenalized::new(
        problem.family(),
        problem.x().clone(),
        problem.y().view(),
        Array1::from_elem(problem.p(), ridge),
    );
    Ok(working.minimize(Array1::zeros(problem.p()), cfg)?.u)
}

/// `2 Σ_i A(β^T x_i) - 2 β^T X^T y + λ ||β||_q^q`.
pub fn glm_objective(problem: &GlmProblem, spec: &PenaltySpec, beta: ArrayView1<f64>) -> Result<f64> {
    if spec.structure().is_some() {
        return Err(HppError::Unsupported("structured GLM penalties".into()));
    }
    Ok(problem.loss(beta)? + spec.penalty(beta))
}

/// Factor form `2 Σ A - 2 β^T X^T y + (λ/K) Σ_k ||u_k||^2`.
pub fn glm_factor_objective(problem: &GlmProblem, spec: &PenaltySpec, state: &FactorState) -> Result<f64> {
    if state.k() != spec.factors() {
        return Err(HppError::arg("factor count does not match the penalty"));
    }
    Ok(problem.loss(state.beta().view())? + spec.lambda() / spec.factors() as f64 * state.sum_sq())
}
