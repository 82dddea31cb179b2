use std::sync::Arc;

use ndarray::{Array1, Array2};

use super::graph::{car_precision_apply, CarSpec, GridGraph};
use super::penalty::{Precision, Structure};
use crate::error::{HppError, Result};
use crate::linalg::{hadamard_precision_matrix, spd_solve};
use crate::linear::{ConvergenceConfig, Recorder};
use crate::model::{objective_factors, FactorState, PenaltySpec, RegressionProblem};
use crate::trace::SolverTrace;

/// Scores `z ~ N(θ, I)` on a grid, with `θ = u ∘ v` penalized by a CAR model.
#[derive(Debug, Clone)]
pub struct SignalProblem {
    pub z: Array1<f64>,
    pub graph: Arc<GridGraph>,
    pub car: CarSpec,
}

impl SignalProblem {
    pub fn new(z: Array1<f64>, graph: Arc<GridGraph>, car: CarSpec) -> Result<Self> {
        if z.len() != graph.len() {
            return Err(HppError::dims(format!(
                "{} scores for {} active sites",
                z.len(),
                graph.len()
            )));
        }
        car.check_positive_definite(&graph)?;
        Ok(SignalProblem { z, graph, car })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `g(u, v) = ||z - u∘v||² + u^T Σ^{-1} u + v^T Σ^{-1} v`.
    pub fn objective(&self, u: &Array1<f64>, v: &Array1<f64>) -> f64 {
        let r = &self.z - &(u * v);
        r.dot(&r)
            + u.dot(&car_precision_apply(&self.graph, &self.car, u.view()))
            + v.dot(&car_precision_apply(&self.graph, &self.car, v.view()))
    }

    /// `u_i = |z_i|`, `v_i = sign(z_i)` with `v_i = 1` where `z_i = 0`.
    pub fn default_init(&self) -> (Array1<f64>, Array1<f64>) {
        (
            self.z.mapv(f64::abs),
            self.z.mapv(|x| if x < 0.0 { -1.0 } else { 1.0 }),
        )
    }
}

/// One Gauss–Seidel pass over the sites in raster order, updating `u_i` then
/// `v_i` at each site to the exact minimizer of `g` in that coordinate:
///
/// `u_i = (z_i v_i + ρ m_i(u)/τ²) / (v_i² + 1/τ²)`
///
/// where `m_i` is the neighbor average under the symmetrized weights
/// `(G + G^T)/2`. On graphs where neighboring sites have equal degree this is
/// the plain neighbor mean.
pub fn shpp_site_sweep(problem: &SignalProblem, u: &mut Array1<f64>, v: &mut Array1<f64>) {
    let (g, rho, inv_tau) = (&problem.graph, problem.car.rho, 1.0 / problem.car.tau_sq);
    for i in 0..problem.len() {
        let zi = problem.z[i];
        let mu = g.symmetric_mean(i, u.view());
        u[i] = (zi * v[i] + rho * mu * inv_tau) / (v[i] * v[i] + inv_tau);
        let mv = g.symmetric_mean(i, v.view());
        v[i] = (zi * u[i] + rho * mv * inv_tau) / (u[i] * u[i] + inv_tau);
    }
}

pub const DEFAULT_SHPP_REL_TOL: f64 = 1e-10;
const REL_DEN_FLOOR: f64 = 1e-300;

/// Repeats [`shpp_site_sweep`] until `||θ_new - θ_old||² / ||θ_old||² < rel_tol`.
pub fn solve_shpp(
    problem: &SignalProblem,
    init: Option<(Array1<f64>, Array1<f64>)>,
    rel_tol: f64,
    max_sweeps: usize,
) -> Result<SolverTrace> {
    let (mut u, mut v) = init.unwrap_or_else(|| problem.default_init());
    if u.len() != problem.len() || v.len() != problem.len() {
        return Err(HppError::dims("initial factors do not match the grid"));
    }
    let mut theta = &u * &v;
    let mut trace = SolverTrace::new("shpp", theta.clone(), problem.objective(&u, &v));
    let mut gs = Vec::new();
    while trace.iterations < max_sweeps {
        shpp_site_sweep(problem, &mut u, &mut v);
        let next = &u * &v;
        let diff = &next - &theta;
        let rel = diff.dot(&diff) / theta.dot(&theta).max(REL_DEN_FLOOR);
        let g = problem.objective(&u, &v);
        trace.iterations += 1;
        trace.coordinate_sweeps += 1;
        trace.objective_per_iteration.push(g);
        trace.statistic_per_iteration.push(rel);
        trace.ridge_solves_per_iteration.push(0);
        gs.push(g);
        theta = next;
        if rel < rel_tol {
            trace.converged = true;
            break;
        }
    }
    trace.factor_objective_per_iteration = Some(gs);
    trace.final_beta = theta;
    trace.final_factors = Some(FactorState::new(vec![u, v])?);
    Ok(trace)
}

/// Largest dimension accepted by the dense structured solver.
pub const DENSE_MAX_P: usize = 5000;

/// Alternating ridge updates with general precisions:
/// `u = (Q ∘ vv^T + Σ_u^{-1})^{-1} (l ∘ v)`, then the same for `v`.
pub fn solve_structured_hpp(
    problem: &RegressionProblem,
    structure: &Structure,
    init: FactorState,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    let p = problem.p();
    if p > DENSE_MAX_P {
        return Err(HppError::Unsupported(format!(
            "dense structured solve limited to p <= {DENSE_MAX_P}"
        )));
    }
    if structure.dim() != p || init.p() != p || init.k() != 2 {
        return Err(HppError::dims("structure, factors and problem must agree (K = 2)"));
    }
    let spec = PenaltySpec::lasso(0.0)?.with_structure(structure.clone())?;
    let pu = structure.u.to_dense();
    let pv = structure.v.to_dense();
    let mut state = init;
    let g0 = objective_factors(problem, &spec, &state)?;
    let mut rec = Recorder::new("shpp-dense", conv, problem.column_norms_sq(), state.beta().clone(), g0)?;
    while !rec.done() {
        let prev = state.beta().clone();
        for (k, prec) in [(0usize, &pu), (1, &pv)] {
            let other = state.factor(1 - k).clone();
            let a = hadamard_precision_matrix(problem.q().view(), other.view(), prec.view());
            let b = problem.l() * &other;
            state.set_factor(k, spd_solve(a.view(), b.view())?);
            rec.trace.ridge_solves += 1;
        }
        let g = objective_factors(problem, &spec, &state)?;
        rec.push_factor_objective(g);
        rec.step_and_test(prev.view(), state.beta(), g);
    }
    let mut trace = rec.finish();
    trace.final_factors = Some(state);
    Ok(trace)
}

/// Dense structured HPP from covariance matrices `Σ_u`, `Σ_v`.
pub fn solve_shpp_dense(
    problem: &RegressionProblem,
    sigma_u: &Array2<f64>,
    sigma_v: &Array2<f64>,
    init: FactorState,
    conv: &ConvergenceConfig,
) -> Result<SolverTrace> {
    if sigma_u.nrows() > DENSE_MAX_P {
        return Err(HppError::Unsupported(format!(
            "dense structured solve limited to p <= {DENSE_MAX_P}"
        )));
    }
    let structure = Structure::new(
        Precision::from_covariance(sigma_u)?,
        Precision::from_covariance(sigma_v)?,
    )?;
    solve_structured_hpp(problem, &structure, init, conv)
}
