use ndarray::Array1;

use super::ccd::{check_diagonal, CcdState};
use super::{ConvergenceConfig, Recorder};
use crate::error::{HppError, Result};
use crate::model::{objective_beta, PenaltySpec, RegressionProblem};
use crate::trace::SolverTrace;

/// Weighted-lasso weights of the local linear approximation:
/// `q |β_j|^{q-1}`, infinite (frozen) where `β_j = 0`.
pub(crate) fn lla_weights(beta: &Array1<f64>, q: f64) -> Array1<f64> {
    beta.mapv(|b| {
        if b == 0.0 {
            f64::INFINITY
        } else {
            q * b.abs().powf(q - 1.0)
        }
    })
}

/// Local linear approximation for `0 < q < 1`: each outer iteration solves
/// `β^T Q β - 2 β^T l + qλ Σ_j |β_j^{cur}|^{q-1} |β_j|` by coordinate descent.
pub fn solve_lla(
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    init_beta: Array1<f64>,
    conv: &ConvergenceConfig,
    inner: &ConvergenceConfig,
) -> Result<SolverTrace> {
    if spec.structure().is_some() {
        return Err(HppError::arg("LLA does not support structured penalties"));
    }
    let q = spec.q();
    if !(q < 1.0) {
        return Err(HppError::arg("LLA is only defined here for q < 1"));
    }
    if !(spec.lambda() > 0.0) {
        return Err(HppError::arg("LLA needs lambda > 0"));
    }
    if init_beta.len() != problem.p() {
        return Err(HppError::dims("initial coefficients have the wrong length"));
    }
    check_diagonal(problem)?;
    inner.validate()?;
    let (qm, l) = (problem.q().view(), problem.l().view());
    let norms = problem.column_norms_sq();
    let f0 = objective_beta(problem, spec, init_beta.view())?;
    let mut rec = Recorder::new("lla", conv, norms.clone(), init_beta.clone(), f0)?;
    let mut state = CcdState::new(qm, l, init_beta);
    while !rec.done() {
        let prev = state.beta.clone();
        let thresholds = lla_weights(&prev, q).mapv(|w| w * spec.lambda() / 2.0);
        for _ in 0..inner.max_iterations {
            let before = state.beta.clone();
            state.sweep(qm, l, thresholds.view());
            rec.trace.coordinate_sweeps += 1;
            let stat = super::convergence_statistic(before.view(), state.beta.view(), norms.view());
            if stat <= inner.delta {
                break;
            }
        }
        let f = objective_beta(problem, spec, state.beta.view())?;
        rec.step_and_test(prev.view(), &state.beta, f);
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zero_start_is_frozen() {
        let pr = RegressionProblem::from_gram(array![[1.0, 0.1], [0.1, 1.0]], array![1.0, 1.0], 2).unwrap();
        let spec = PenaltySpec::new(4, 1.0).unwrap();
        let t = solve_lla(&pr, &spec, Array1::zeros(2), &ConvergenceConfig::default(), &ConvergenceConfig::default()).unwrap();
        assert!(t.converged);
        assert_eq!(t.iterations, 1);
        assert_eq!(t.final_beta, Array1::<f64>::zeros(2));
    }

    #[test]
    fn rejects_convex_penalty() {
        let pr = RegressionProblem::from_gram(array![[1.0]], array![1.0], 1).unwrap();
        let spec = PenaltySpec::lasso(1.0).unwrap();
        assert!(solve_lla(&pr, &spec, array![1.0], &ConvergenceConfig::default(), &ConvergenceConfig::default()).is_err());
    }
}
