use ndarray::{Array1, Axis};

use super::newton::{newton_inner, DiagPenalized, NewtonConfig};
use super::{glm_factor_objective, glm_objective, GlmFamily, GlmProblem};
use crate::error::{HppError, Result};
use crate::linear::ccd::{weighted_l1, CcdState};
use crate::linear::lla::lla_weights;
use crate::linear::{convergence_statistic, lqa_weight, ConvergenceConfig, LqaConfig, Recorder};
use crate::model::{FactorState, PenaltySpec};
use crate::trace::SolverTrace;

/// Working-weight floor for IRLS.
const MIN_WEIGHT: f64 = 1e-10;

fn check_spec(spec: &PenaltySpec, what: &str) -> Result<()> {
    if spec.structure().is_some() {
        return Err(HppError::Unsupported(format!("{what} with a structured penalty")));
    }
    if !(spec.lambda() > 0.0) {
        return Err(HppError::arg(format!("{what} needs lambda > 0")));
    }
    Ok(())
}

/// HPP for GLMs: cycles over the factors, minimizing the factor objective in
/// each one by damped Newton.
pub fn solve_hpp_glm(
    problem: &GlmProblem,
    spec: &PenaltySpec,
    init: FactorState,
    conv: &ConvergenceConfig,
    newton: &NewtonConfig,
) -> Result<SolverTrace> {
    check_spec(spec, "HPP-GLM")?;
    let k = spec.factors();
    if k < 2 {
        return Err(HppError::arg("HPP needs K >= 2"));
    }
    if init.k() != k || init.p() != problem.p() {
        return Err(HppError::dims("initial factors do not match the penalty and design"));
    }
    let ridge = spec.lambda() / k as f64;
    let mut state = init;
    let f0 = glm_objective(problem, spec, state.beta().view())?;
    let mut rec = Recorder::new(
        "hpp-glm",
        conv,
        problem.column_norms_sq().clone(),
        state.beta().clone(),
        f0,
    )?;
    while !rec.done() {
        let prev = state.beta().clone();
        for kk in 0..k {
            let v = state.leave_one_out(kk);
            let out = newton_inner(problem, v.view(), state.factor(kk).view(), ridge, newton)?;
            rec.trace.inner_steps += out.steps;
            rec.trace.numerical_warning |= out.warning;
            rec.trace.ridge_solves += 1;
            state.set_factor(kk, out.u);
        }
        let f = glm_objective(problem, spec, state.beta().view())?;
        rec.push_factor_objective(glm_factor_objective(problem, spec, &state)?);
        rec.step_and_test(prev.view(), state.beta(), f);
    }
    let mut trace = rec.finish();
    trace.final_factors = Some(state);
    Ok(trace)
}

/// LQA for GLMs: each iteration fixes `D` at the current `β` and minimizes
/// `2 Σ A - 2 β^T X^T y + (qλ/2) β^T D β` by damped Newton.
pub fn solve_lqa_glm(
    problem: &GlmProblem,
    spec: &PenaltySpec,
    init_beta: Array1<f64>,
    lqa: &LqaConfig,
    conv: &ConvergenceConfig,
    newton: &NewtonConfig,
) -> Result<SolverTrace> {
    check_spec(spec, "LQA-GLM")?;
    problem.check_len(init_beta.view())?;
    let q = spec.q();
    let scale = q * spec.lambda() / 2.0;
    let mut working = DiagPenalized::new(
        problem.family(),
        problem.x().clone(),
        problem.y().view(),
        Array1::zeros(problem.p()),
    );
    let f0 = glm_objective(problem, spec, init_beta.view())?;
    let mut rec = Recorder::new(
        "lqa-glm",
        conv,
        problem.column_norms_sq().clone(),
        init_beta.clone(),
        f0,
    )?;
    let mut beta = init_beta;
    while !rec.done() {
        for j in 0..beta.len() {
            let (d, clamped) = lqa_weight(beta[j], q, lqa.epsilon);
            rec.trace.numerical_warning |= clamped;
            working.c[j] = scale * d;
        }
        let out = working.minimize(beta.clone(), newton)?;
        rec.trace.inner_steps += out.steps;
        rec.trace.numerical_warning |= out.warning;
        rec.trace.ridge_solves += 1;
        let f = glm_objective(problem, spec, out.u.view())?;
        rec.step_and_test(beta.view(), &out.u, f);
        beta = out.u;
    }
    Ok(rec.finish())
}

/// Weighted-lasso GLM objective, `+∞` on cumulant overflow.
fn weighted_objective(problem: &GlmProblem, beta: &Array1<f64>, weights: &Array1<f64>, lambda: f64) -> f64 {
    match problem.loss(beta.view()) {
        Ok(v) => v + weighted_l1(beta.view(), weights.view(), lambda),
        Err(_) => f64::INFINITY,
    }
}

/// LLA for GLMs with `q < 1`. Each weighted-L_1 subproblem is solved by
/// IRLS: a quadratic expansion `β^T X^T W X β - 2 β^T X^T W z` at the current
/// point, minimized by weighted coordinate descent, with step halving on the
/// exact subproblem objective.
pub fn solve_lla_glm(
    problem: &GlmProblem,
    spec: &PenaltySpec,
    init_beta: Array1<f64>,
    conv: &ConvergenceConfig,
    inner: &ConvergenceConfig,
    newton: &NewtonConfig,
) -> Result<SolverTrace> {
    check_spec(spec, "LLA-GLM")?;
    let q = spec.q();
    if !(q < 1.0) {
        return Err(HppError::arg("LLA is only defined here for q < 1"));
    }
    problem.check_len(init_beta.view())?;
    inner.validate()?;
    let norms = problem.column_norms_sq().clone();
    if let Some(j) = norms.iter().position(|v| !(*v > 0.0)) {
        return Err(HppError::arg(format!("column {j} of the design is zero")));
    }
    let lambda = spec.lambda();
    let x = problem.x();
    let family = problem.family();
    let f0 = glm_objective(problem, spec, init_beta.view())?;
    let mut rec = Recorder::new("lla-glm", conv, norms.clone(), init_beta.clone(), f0)?;
    let mut beta = init_beta;
    while !rec.done() {
        let prev = beta.clone();
        let weights = lla_weights(&prev, q);
        let thresholds = weights.mapv(|w| w * lambda / 2.0);
        let mut f_cur = weighted_objective(problem, &beta, &weights, lambda);
        if !f_cur.is_finite() {
            problem.loss(beta.view())?;
        }
        for _ in 0..newton.max_steps.max(1) {
            let eta = x.dot(&beta);
            let mut w = Array1::zeros(eta.len());
            let mut z = Array1::zeros(eta.len());
            for i in 0..eta.len() {
                let mut a = family.variance(eta[i]);
                if !(a >= MIN_WEIGHT) {
                    a = MIN_WEIGHT;
                    rec.trace.numerical_warning = true;
                }
                w[i] = a;
                z[i] = eta[i] + (problem.y()[i] - family.mean(eta[i])) / a;
            }
            let xw = x * &w.view().insert_axis(Axis(1));
            let qw = xw.t().dot(x);
            let lw = xw.t().dot(&z);
            let mut state = CcdState::new(qw.view(), lw.view(), beta.clone());
            for _ in 0..inner.max_iterations {
                let before = state.beta.clone();
                state.sweep(qw.view(), lw.view(), thresholds.view());
                rec.trace.coordinate_sweeps += 1;
                if convergence_statistic(before.view(), state.beta.view(), norms.view()) <= inner.delta {
                    break;
                }
            }
            rec.trace.inner_steps += 1;
            rec.trace.ridge_solves += 1;
            if family == GlmFamily::Gaussian {
                // the expansion is exact
                beta = state.beta;
                break;
            }
            let dir = &state.beta - &beta;
            let slack = 1e-14 * f_cur.abs().max(1.0);
            let mut t = 1.0;
            let mut moved = None;
            for _ in 0..=newton.max_halvings {
                let cand = &beta + &(t * &dir);
                let fc = weighted_objective(problem, &cand, &weights, lambda);
                if fc <= f_cur + slack {
                    moved = Some((cand, fc));
                    break;
                }
                t *= 0.5;
            }
            let Some((cand, fc)) = moved else { break };
            let stat = convergence_statistic(beta.view(), cand.view(), norms.view());
            beta = cand;
            f_cur = fc;
            if stat <= inner.delta {
                break;
            }
        }
        let f = glm_objective(problem, spec, beta.view())?;
        rec.step_and_test(prev.view(), &beta, f);
    }
    Ok(rec.finish())
}
