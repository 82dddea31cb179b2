use ndarray::{Array1, ArrayView1, ArrayView2};

use super::{ConvergenceConfig, Recorder};
use crate::error::{HppError, Result};
use crate::linalg::soft_threshold;
use crate::model::RegressionProblem;
use crate::trace::SolverTrace;

/// Coefficients plus the maintained residual gradient `r = l - Qβ`.
#[derive(Debug, Clone)]
pub struct CcdState {
    pub beta: Array1<f64>,
    resid: Array1<f64>,
    sweeps_since_refresh: usize,
}

/// Sweeps between exact recomputations of the residual.
const REFRESH_EVERY: usize = 16;

impl CcdState {
    pub fn new(q: ArrayView2<f64>, l: ArrayView1<f64>, beta: Array1<f64>) -> Self {
        let resid = &l - &q.dot(&beta);
        CcdState {
            beta,
            resid,
            sweeps_since_refresh: 0,
        }
    }

    /// Recomputes `r = l - Qβ` using only the nonzero coefficients.
    pub fn refresh(&mut self, q: ArrayView2<f64>, l: ArrayView1<f64>) {
        let mut r = l.to_owned();
        for (j, &b) in self.beta.iter().enumerate() {
            if b != 0.0 {
                r.scaled_add(-b, &q.row(j));
            }
        }
        self.resid = r;
        self.sweeps_since_refresh = 0;
    }

    pub fn set_beta(&mut self, q: ArrayView2<f64>, l: ArrayView1<f64>, beta: Array1<f64>) {
        self.beta = beta;
        self.refresh(q, l);
    }

    /// One ascending sweep `β_j ← S(l_j - Σ_{k≠j} Q_jk β_k, t_j) / Q_jj`.
    pub fn sweep(&mut self, q: ArrayView2<f64>, l: ArrayView1<f64>, thresholds: ArrayView1<f64>) {
        if self.sweeps_since_refresh >= REFRESH_EVERY {
            self.refresh(q, l);
        }
        let p = self.beta.len();
        for j in 0..p {
            let qjj = q[[j, j]];
            let old = self.beta[j];
            let z = self.resid[j] + qjj * old;
            let new = soft_threshold(z, thresholds[j]) / qjj;
            if new != old {
                self.resid.scaled_add(old - new, &q.row(j));
                self.beta[j] = new;
            }
        }
        self.sweeps_since_refresh += 1;
    }

    /// `β^T Q β - 2 β^T l`, from the maintained residual.
    pub fn quadratic_loss(&self, l: ArrayView1<f64>) -> f64 {
        -self.beta.dot(&l) - self.beta.dot(&self.resid)
    }
}

pub(crate) fn check_diagonal(problem: &RegressionProblem) -> Result<()> {
    for (j, d) in problem.q().diag().iter().enumerate() {
        if !(*d > 0.0) {
            return Err(HppError::arg(format!("column {j} is degenerate: Q_jj = {d}")));
        }
    }
    Ok(())
}

/// `λ Σ_j w_j |β_j|`, skipping zero coefficients so infinite weights are allowed.
pub(crate) fn weighted_l1(beta: ArrayView1<f64>, weights: ArrayView1<f64>, lambda: f64) -> f64 {
    lambda
        * beta
            .iter()
            .zip(weights.iter())
            .filter(|(b, _)| **b != 0.0)
            .map(|(b, w)| w * b.abs())
            .sum::<f64>()
}

/// Cyclic ("shooting") coordinate descent for the weighted lasso
/// `β^T Q β - 2 β^T l + λ Σ_j w_j |β_j|`. One iteration is one full sweep.
pub fn solve_ccd(
    problem: &RegressionProblem,
    lambda: f64,
    weights: Option<&Array1<f64>>,
    init_beta: Array1<f64>,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    check_diagonal(problem)?;
    let p = problem.p();
    if init_beta.len() != p {
        return Err(HppError::dims("initial coefficients have the wrong length"));
    }
    let weights = match weights {
        Some(w) if w.len() != p => return Err(HppError::dims("weights have the wrong length")),
        Some(w) => w.clone(),
        None => Array1::ones(p),
    };
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(HppError::arg("weights must be nonnegative"));
    }
    if !(lambda >= 0.0) {
        return Err(HppError::arg("lambda must be nonnegative"));
    }
    let thresholds = weights.mapv(|w| w * lambda / 2.0);
    let (q, l) = (problem.q().view(), problem.l().view());
    let mut state = CcdState::new(q, l, init_beta);
    let objective = |s: &CcdState| s.quadratic_loss(l) + weighted_l1(s.beta.view(), weights.view(), lambda);
    let mut rec = Recorder::new(
        "ccd",
        conv,
        problem.column_norms_sq(),
        state.beta.clone(),
        objective(&state),
    )?;
    while !rec.done() {
        let prev = state.beta.clone();
        state.sweep(q, l, thresholds.view());
        rec.trace.coordinate_sweeps += 1;
        let f = objective(&state);
        rec.step_and_test(prev.view(), &state.beta, f);
    }
    Ok(rec.finish())
}
