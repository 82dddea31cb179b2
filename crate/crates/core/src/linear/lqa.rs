use ndarray::Array1;

use super::{ConvergenceConfig, LqaConfig, Recorder};
use crate::error::{HppError, Result};
use crate::linalg::spd_solve;
use crate::model::{objective_beta, PenaltySpec, RegressionProblem};
use crate::trace::SolverTrace;

/// Perturbed diagonal weight `|β|^{q-2} · |β|/(|β| + ε)`, capped at `1/ε²`.
/// The flag reports whether the cap was applied.
pub fn lqa_weight(beta: f64, q: f64, epsilon: f64) -> (f64, bool) {
    let a = beta.abs();
    let raw = if q == 1.0 {
        1.0 / (a + epsilon)
    } else {
        a.powf(q - 1.0) / (a + epsilon)
    };
    let cap = 1.0 / (epsilon * epsilon);
    if !(raw <= cap) {
        (cap, true)
    } else {
        (raw, false)
    }
}

/// Local quadratic approximation: `β ← (Q + (qλ/2) D)^{-1} l`, one ridge
/// solve per iteration.
pub fn solve_lqa(
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    init_beta: Array1<f64>,
    lqa: &LqaConfig,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    if spec.structure().is_some() {
        return Err(HppError::arg("LQA does not support structured penalties"));
    }
    if !(spec.lambda() > 0.0) {
        return Err(HppError::arg("LQA needs lambda > 0"));
    }
    let p = problem.p();
    if init_beta.len() != p {
        return Err(HppError::dims("initial coefficients have the wrong length"));
    }
    let q = spec.q();
    let scale = q * spec.lambda() / 2.0;
    let f0 = objective_beta(problem, spec, init_beta.view())?;
    let mut rec = Recorder::new("lqa", conv, problem.column_norms_sq(), init_beta.clone(), f0)?;
    let mut beta = init_beta;
    while !rec.done() {
        let mut a = problem.q().clone();
        for j in 0..p {
            let (d, clamped) = lqa_weight(beta[j], q, lqa.epsilon);
            rec.trace.numerical_warning |= clamped;
            a[[j, j]] += scale * d;
        }
        let next = spd_solve(a.view(), problem.l().view())?;
        rec.trace.ridge_solves += 1;
        let f = objective_beta(problem, spec, next.view())?;
        rec.step_and_test(beta.view(), &next, f);
        beta = next;
    }
    Ok(rec.finish())
}
