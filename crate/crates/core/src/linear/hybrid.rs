//! Hybrids that alternate a coordinate-descent sweep (which creates and
//! removes exact zeros) with a block update restricted to the current support.

use ndarray::Array1;

use super::ccd::{check_diagonal, weighted_l1, CcdState};
use super::hpp::hpp_factor_update;
use super::{lqa_weight, ConvergenceConfig, LqaConfig, Recorder};
use crate::error::{HppError, Result};
use crate::linalg::{spd_solve, submatrix, subvector};
use crate::model::RegressionProblem;
use crate::trace::SolverTrace;

#[derive(Clone, Copy)]
enum SupportStep {
    Hpp,
    Lqa(LqaConfig),
}

/// HPP update on the support of a lasso iterate: `ṽ = sqrt|β̃|`, then one
/// `ũ` and one `ṽ` ridge solve. Returns the number of ridge solves.
fn hpp_on_support(
    problem: &RegressionProblem,
    lambda: f64,
    support: &[usize],
    beta: &mut Array1<f64>,
) -> Result<usize> {
    let qs = submatrix(problem.q().view(), support);
    let ls = subvector(problem.l().view(), support);
    let bs = subvector(beta.view(), support);
    let v = bs.mapv(|b| b.abs().sqrt());
    let u = hpp_factor_update(qs.view(), ls.view(), v.view(), lambda / 2.0)?;
    let v = hpp_factor_update(qs.view(), ls.view(), u.view(), lambda / 2.0)?;
    for (a, &j) in support.iter().enumerate() {
        beta[j] = u[a] * v[a];
    }
    Ok(2)
}

/// One perturbed LQA update on the support.
fn lqa_on_support(
    problem: &RegressionProblem,
    lambda: f64,
    lqa: &LqaConfig,
    support: &[usize],
    beta: &mut Array1<f64>,
) -> Result<usize> {
    let mut a = submatrix(problem.q().view(), support);
    let ls = subvector(problem.l().view(), support);
    for (i, &j) in support.iter().enumerate() {
        a[[i, i]] += lambda / 2.0 * lqa_weight(beta[j], 1.0, lqa.epsilon).0;
    }
    let bs = spd_solve(a.view(), ls.view())?;
    for (i, &j) in support.iter().enumerate() {
        beta[j] = bs[i];
    }
    Ok(1)
}

fn solve_hybrid(
    name: &str,
    step: SupportStep,
    problem: &RegressionProblem,
    lambda: f64,
    init_beta: Array1<f64>,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    check_diagonal(problem)?;
    if !(lambda > 0.0) {
        return Err(HppError::arg(format!("{name} needs lambda > 0")));
    }
    let p = problem.p();
    if init_beta.len() != p {
        return Err(HppError::dims("initial coefficients have the wrong length"));
    }
    let (q, l) = (problem.q().view(), problem.l().view());
    let ones = Array1::<f64>::ones(p);
    let thresholds = Array1::from_elem(p, lambda / 2.0);
    let mut state = CcdState::new(q, l, init_beta);
    let objective = |s: &CcdState| s.quadratic_loss(l) + weighted_l1(s.beta.view(), ones.view(), lambda);
    let mut rec = Recorder::new(name, conv, problem.column_norms_sq(), state.beta.clone(), objective(&state))?;
    // Each half step (sweep or support update) counts as one iteration; the
    // stopping rule is applied after sweeps, so a stop always certifies that
    // coordinate descent itself has stalled.
    while !rec.done() {
        let prev = state.beta.clone();
        state.sweep(q, l, thresholds.view());
        rec.trace.coordinate_sweeps += 1;
        let f = objective(&state);
        if rec.step_and_test(prev.view(), &state.beta, f) || rec.done() {
            break;
        }

        let support: Vec<usize> = (0..p).filter(|&j| state.beta[j] != 0.0).collect();
        let prev = state.beta.clone();
        if !support.is_empty() {
            let mut beta = state.beta.clone();
            rec.trace.ridge_solves += match step {
                SupportStep::Hpp => hpp_on_support(problem, lambda, &support, &mut beta)?,
                SupportStep::Lqa(cfg) => lqa_on_support(problem, lambda, &cfg, &support, &mut beta)?,
            };
            state.set_beta(q, l, beta);
        }
        let f = objective(&state);
        rec.step(prev.view(), &state.beta, f);
    }
    Ok(rec.finish())
}

/// Alternates a coordinate-descent sweep with an HPP update on the nonzero
/// coefficients (lasso only).
pub fn solve_hpcd(
    problem: &RegressionProblem,
    lambda: f64,
    init_beta: Array1<f64>,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    solve_hybrid("hpcd", SupportStep::Hpp, problem, lambda, init_beta, conv)
}

/// Alternates a coordinate-descent sweep with a perturbed LQA update on the
/// nonzero coefficients (lasso only).
pub fn solve_lqcd(
    problem: &RegressionProblem,
    lambda: f64,
    init_beta: Array1<f64>,
    lqa: &LqaConfig,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    solve_hybrid("lqcd", SupportStep::Lqa(*lqa), problem, lambda, init_beta, conv)
}
