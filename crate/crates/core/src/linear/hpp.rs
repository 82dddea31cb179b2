use ndarray::{Array1, ArrayView1, ArrayView2};

use super::{ConvergenceConfig, Recorder};
use crate::error::{HppError, Result};
use crate::linalg::{hadamard_ridge_matrix, spd_solve, submatrix, subvector};
use crate::model::{objective_beta, objective_factors, FactorState, PenaltySpec, RegressionProblem};
use crate::trace::SolverTrace;

/// One block update `u = (Q ∘ v v^T + ridge · I)^{-1} (l ∘ v)`.
///
/// Rows with `v_j = 0` decouple into `ridge · u_j = 0`, so the solve is done
/// on the support of `v` only and those entries of `u` are exactly zero.
pub fn hpp_factor_update(
    q: ArrayView2<f64>,
    l: ArrayView1<f64>,
    v: ArrayView1<f64>,
    ridge: f64,
) -> Result<Array1<f64>> {
    let p = v.len();
    let support: Vec<usize> = (0..p).filter(|&j| v[j] != 0.0).collect();
    if support.len() == p {
        let a = hadamard_ridge_matrix(q, v, ridge);
        let b = &l * &v;
        return spd_solve(a.view(), b.view());
    }
    let mut u = Array1::zeros(p);
    if support.is_empty() {
        if !(ridge > 0.0) {
            return Err(HppError::NotPositiveDefinite { index: 0, pivot: ridge });
        }
        return Ok(u);
    }
    let qs = submatrix(q, &support);
    let vs = subvector(v, &support);
    let ls = subvector(l, &support);
    let a = hadamard_ridge_matrix(qs.view(), vs.view(), ridge);
    let us = spd_solve(a.view(), (&ls * &vs).view())?;
    for (a, &j) in support.iter().enumerate() {
        u[j] = us[a];
    }
    Ok(u)
}

/// Alternating ridge regression over the `K` Hadamard factors.
///
/// One iteration is one cycle `k = 1..K`; each block update is an exact
/// minimization of the factor objective, so `g` never increases.
pub fn solve_hpp(
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    init: FactorState,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    if spec.structure().is_some() {
        return Err(HppError::arg(
            "structured penalties are solved by structured::solve_shpp_dense",
        ));
    }
    let k = spec.factors();
    if init.k() != k {
        return Err(HppError::arg(format!(
            "initial state has {} factors, penalty has K = {k}",
            init.k()
        )));
    }
    if init.p() != problem.p() {
        return Err(HppError::dims(format!(
            "initial factors have length {}, p = {}",
            init.p(),
            problem.p()
        )));
    }
    let ridge = spec.lambda() / k as f64;
    let mut state = init;
    let f0 = objective_beta(problem, spec, state.beta().view())?;
    let mut rec = Recorder::new(
        "hpp",
        conv,
        problem.column_norms_sq(),
        state.beta().clone(),
        f0,
    )?;
    while !rec.done() {
        let prev = state.beta().clone();
        for kk in 0..k {
            let v = state.leave_one_out(kk);
            let u = hpp_factor_update(problem.q().view(), problem.l().view(), v.view(), ridge)?;
            state.set_factor(kk, u);
            rec.trace.ridge_solves += 1;
        }
        let f = objective_beta(problem, spec, state.beta().view())?;
        let g = objective_factors(problem, spec, &state)?;
        rec.push_factor_objective(g);
        rec.step_and_test(prev.view(), state.beta(), f);
    }
    let mut trace = rec.finish();
    trace.final_factors = Some(state);
    Ok(trace)
}
