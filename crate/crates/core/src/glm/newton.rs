use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use super::{GlmFamily, GlmProblem};
use crate::error::{HppError, Result};
use crate::linalg::Cholesky;

/// Stopping rule for damped Newton inner solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonConfig {
    /// Stop when the gradient sup-norm falls to this value.
    pub tol: f64,
    pub max_steps: usize,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-8,
            max_steps: 50,
            max_halvings: 30,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub u: Array1<f64>,
    /// Newton directions computed (one linear solve each).
    pub steps: usize,
    /// Step cap reached, or the line search stalled away from a stationary point.
    pub warning: bool,
    pub gradient_norm: f64,
}

/// `2 Σ_i A(z_i^T w) - 2 w^T Z^T y + Σ_j c_j w_j^2`: a GLM in the working
/// design `Z` with a diagonal quadratic penalty.
pub(crate) struct DiagPenalized<'a> {
    pub family: GlmFamily,
    pub z: Array2<f64>,
    pub y: ArrayView1<'a, f64>,
    pub zy: Array1<f64>,
    pub c: Array1<f64>,
}

impl<'a> DiagPenalized<'a> {
    pub fn new(family: GlmFamily, z: Array2<f64>, y: ArrayView1<'a, f64>, c: Array1<f64>) -> Self {
        let zy = z.t().dot(&y);
        DiagPenalized { family, z, y, zy, c }
    }

    /// Objective value, `+∞` when the cumulant overflows.
    pub fn value(&self, w: ArrayView1<f64>) -> f64 {
        let eta = self.z.dot(&w);
        let a: f64 = eta.iter().map(|e| self.family.cumulant(*e)).sum();
        let pen: f64 = w.iter().zip(self.c.iter()).map(|(w, c)| c * w * w).sum();
        let v = 2.0 * a - 2.0 * w.dot(&self.zy) + pen;
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }

    fn overflow_at(&self, w: ArrayView1<f64>) -> HppError {
        let eta = self.z.dot(&w);
        let bad = eta
            .iter()
            .copied()
            .find(|e| !self.family.cumulant(*e).is_finite())
            .unwrap_or(f64::NAN);
        HppError::Overflow { eta: bad }
    }

    pub fn gradient_hessian(&self, w: ArrayView1<f64>) -> (Array1<f64>, Array2<f64>) {
        let eta = self.z.dot(&w);
        let resid: Array1<f64> = eta
            .iter()
            .zip(self.y.iter())
            .map(|(e, y)| self.family.mean(*e) - y)
            .collect();
        let d = 2.0 * (self.z.t().dot(&resid) + &self.c * &w);
        let root_w = eta.mapv(|e| self.family.variance(e).max(0.0).sqrt());
        let zs = &self.z * &root_w.insert_axis(Axis(1));
        let mut h = zs.t().dot(&zs);
        for j in 0..h.nrows() {
            h[[j, j]] += self.c[j];
        }
        h *= 2.0;
        (d, h)
    }

    /// Damped Newton from `w0`; each step is halved until the objective does
    /// not increase.
    pub fn minimize(&self, w0: Array1<f64>, cfg: &NewtonConfig) -> Result<NewtonOutcome> {
        let mut w = w0;
        let mut f = self.value(w.view());
        if !f.is_finite() {
            return Err(self.overflow_at(w.view()));
        }
        let scale = 1.0 + self.zy.iter().fold(0.0f64, |m, v| m.max(2.0 * v.abs()));
        let mut steps = 0;
        loop {
            let (d, h) = self.gradient_hessian(w.view());
            let gnorm = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if gnorm <= cfg.tol {
                return Ok(NewtonOutcome { u: w, steps, warning: false, gradient_norm: gnorm });
            }
            if steps >= cfg.max_steps {
                return Ok(NewtonOutcome { u: w, steps, warning: true, gradient_norm: gnorm });
            }
            let chol = Cholesky::factor(h.view())
                .map_err(|e| HppError::Numerical(format!("Newton Hessian: {e}")))?;
            let dir = chol.solve(d.view());
            steps += 1;
            let slack = 1e-14 * f.abs().max(1.0);
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..=cfg.max_halvings {
                let cand = &w - &(t * &dir);
                let fc = self.value(cand.view());
                if fc <= f + slack {
                    accepted = Some((cand, fc));
                    break;
                }
                t *= 0.5;
            }
            match accepted {
                Some((cand, fc)) => {
                    w = cand;
                    f = fc;
                }
                None => {
                    // no representable descent left: accept the point unless it
                    // is clearly not stationary
                    let warning = gnorm > 1e-6 * scale;
                    return Ok(NewtonOutcome { u: w, steps, warning, gradient_norm: gnorm });
                }
            }
        }
    }
}

fn check_factor_args(problem: &GlmProblem, v: ArrayView1<f64>, u: ArrayView1<f64>, ridge: f64) -> Result<()> {
    problem.check_len(v)?;
    problem.check_len(u)?;
    if !(ridge > 0.0) {
        return Err(HppError::arg("the factor ridge λ/K must be positive"));
    }
    Ok(())
}

fn factor_working<'a>(problem: &'a GlmProblem, v: ArrayView1<f64>, ridge: f64, support: &[usize]) -> DiagPenalized<'a> {
    let x = problem.x();
    let mut z = Array2::zeros((problem.n(), support.len()));
    for (a, &j) in support.iter().enumerate() {
        z.column_mut(a).assign(&(&x.column(j) * v[j]));
    }
    DiagPenalized::new(problem.family(), z, problem.y().view(), Array1::from_elem(support.len(), ridge))
}

/// `f(u : X̃, λ/K) = 2 Σ_i A((u∘v)^T x_i) - 2 (u∘v)^T X^T y + (λ/K) ||u||^2`.
pub fn factor_objective(problem: &GlmProblem, v: ArrayView1<f64>, u: ArrayView1<f64>, ridge: f64) -> Result<f64> {
    check_factor_args(problem, v, u, ridge)?;
    let beta = &u * &v;
    Ok(problem.loss(beta.view())? + ridge * u.dot(&u))
}

/// Gradient `d = 2(v ∘ Σ_i x_i (Ȧ(η_i) - y_i) + (λ/K) u)` and Hessian
/// `H = 2(v v^T ∘ Σ_i Ä(η_i) x_i x_i^T + (λ/K) I)` of [`factor_objective`].
pub fn factor_gradient_hessian(
    problem: &GlmProblem,
    v: ArrayView1<f64>,
    u: ArrayView1<f64>,
    ridge: f64,
) -> Result<(Array1<f64>, Array2<f64>)> {
    check_factor_args(problem, v, u, ridge)?;
    let all: Vec<usize> = (0..problem.p()).collect();
    Ok(factor_working(problem, v, ridge, &all).gradient_hessian(u))
}

/// Minimizes [`factor_objective`] over `u` by damped Newton.
///
/// Coordinates with `v_j = 0` have minimizer `u_j = 0` and are excluded from
/// the solve.
pub fn newton_inner(
    problem: &GlmProblem,
    v: ArrayView1<f64>,
    u_init: ArrayView1<f64>,
    ridge: f64,
    cfg: &NewtonConfig,
) -> Result<NewtonOutcome> {
    check_factor_args(problem, v, u_init, ridge)?;
    let support: Vec<usize> = (0..problem.p()).filter(|&j| v[j] != 0.0).collect();
    let mut u = Array1::zeros(problem.p());
    if support.is_empty() {
        return Ok(NewtonOutcome { u, steps: 0, warning: false, gradient_norm: 0.0 });
    }
    let working = factor_working(problem, v, ridge, &support);
    let w0: Array1<f64> = support.iter().map(|&j| u_init[j]).collect();
    let out = working.minimize(w0, cfg)?;
    for (a, &j) in support.iter().enumerate() {
        u[j] = out.u[a];
    }
    Ok(NewtonOutcome { u, ..out })
}
