//! Problem data, penalty description, factor state and the objective functions
//! in both the coefficient and the Hadamard-factor parametrization.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::Serialize;

use crate::error::{HppError, Result};
use crate::linalg::sign;
use crate::structured::Structure;

/// Linear regression data with the Gram matrix `Q = X^T X` and moment vector
/// `l = X^T y` computed once at construction.
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    design: Option<(Array2<f64>, Array1<f64>)>,
    gram: Array2<f64>,
    moments: Array1<f64>,
    n: usize,
    noise_variance: f64,
}

impl RegressionProblem {
    pub fn from_data(x: Array2<f64>, y: Array1<f64>) -> Result<Self> {
        let (n, p) = x.dim();
        if n == 0 || p == 0 {
            return Err(HppError::arg("design must have n >= 1 and p >= 1"));
        }
        if y.len() != n {
            return Err(HppError::dims(format!("X has {n} rows but y has {}", y.len())));
        }
        let gram = x.t().dot(&x);
        let moments = x.t().dot(&y);
        Ok(RegressionProblem {
            design: Some((x, y)),
            gram,
            moments,
            n,
            noise_variance: 1.0,
        })
    }

    /// Builds a problem directly from `(Q, l)`; `n` is the number of
    /// observations the Gram matrix summarizes.
    pub fn from_gram(q: Array2<f64>, l: Array1<f64>, n: usize) -> Result<Self> {
        let p = l.len();
        if p == 0 || n == 0 {
            return Err(HppError::arg("need n >= 1 and p >= 1"));
        }
        if q.dim() != (p, p) {
            return Err(HppError::dims(format!(
                "Q is {:?} but l has length {p}",
                q.dim()
            )));
        }
        let scale = q.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..p {
            for j in 0..i {
                if (q[[i, j]] - q[[j, i]]).abs() > 1e-10 * scale {
                    return Err(HppError::arg(format!("Q is not symmetric at ({i}, {j})")));
                }
            }
            if q[[i, i]] < 0.0 {
                return Err(HppError::arg(format!("Q has negative diagonal at {i}")));
            }
        }
        Ok(RegressionProblem {
            design: None,
            gram: q,
            moments: l,
            n,
            noise_variance: 1.0,
        })
    }

    pub fn with_noise_variance(mut self, sigma_sq: f64) -> Result<Self> {
        if !(sigma_sq > 0.0) {
            return Err(HppError::arg("noise variance must be positive"));
        }
        self.noise_variance = sigma_sq;
        Ok(self)
    }

    pub fn q(&self) -> &Array2<f64> {
        &self.gram
    }

    pub fn l(&self) -> &Array1<f64> {
        &self.moments
    }

    pub fn x(&self) -> Option<&Array2<f64>> {
        self.design.as_ref().map(|d| &d.0)
    }

    pub fn y(&self) -> Option<&Array1<f64>> {
        self.design.as_ref().map(|d| &d.1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.moments.len()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// `Σ_k x_{k,j}^2`, i.e. the diagonal of `Q`.
    pub fn column_norms_sq(&self) -> Array1<f64> {
        self.gram.diag().to_owned()
    }

    /// `h(β) = β^T Q β - 2 β^T l`.
    pub fn quadratic_loss(&self, beta: ArrayView1<f64>) -> f64 {
        let qb = self.gram.dot(&beta);
        beta.dot(&qb) - 2.0 * beta.dot(&self.moments)
    }

    fn check_len(&self, beta: ArrayView1<f64>) -> Result<()> {
        if beta.len() != self.p() {
            return Err(HppError::dims(format!(
                "coefficient vector has length {} but p = {}",
                beta.len(),
                self.p()
            )));
        }
        Ok(())
    }
}

/// Penalty `λ ||β||_q^q` with `q = 2/K`, optionally replaced by a structured
/// Gaussian-precision penalty on the two Hadamard factors.
#[derive(Debug, Clone)]
pub struct PenaltySpec {
    factors: usize,
    lambda: f64,
    structure: Option<Structure>,
}

impl PenaltySpec {
    pub fn new(factors: usize, lambda: f64) -> Result<Self> {
        if factors == 0 {
            return Err(HppError::arg("number of factors K must be >= 1"));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(HppError::arg(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(PenaltySpec {
            factors,
            lambda,
            structure: None,
        })
    }

    pub fn lasso(lambda: f64) -> Result<Self> {
        Self::new(2, lambda)
    }

    /// Parses `q`, requiring `q = 2/K` for an integer `K >= 1`.
    pub fn from_q(q: f64, lambda: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(HppError::arg(format!("q must be positive, got {q}")));
        }
        let k = (2.0 / q).round();
        if k < 1.0 || (2.0 / k - q).abs() > 1e-12 {
            return Err(HppError::arg(format!("q = {q} is not of the form 2/K")));
        }
        Self::new(k as usize, lambda)
    }

    pub fn with_structure(mut self, structure: Structure) -> Result<Self> {
        if self.factors != 2 {
            return Err(HppError::arg("structured penalties require K = 2"));
        }
        self.structure = Some(structure);
        Ok(self)
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q(&self) -> f64 {
        2.0 / self.factors as f64
    }

    pub fn structure(&self) -> Option<&Structure> {
        self.structure.as_ref()
    }

    /// `λ Σ_j |β_j|^q`, with `|0|^q = 0`.
    pub fn penalty(&self, beta: ArrayView1<f64>) -> f64 {
        self.lambda * lq_norm_q(beta, self.q())
    }
}

/// `Σ_j |β_j|^q` with zero entries contributing nothing.
pub fn lq_norm_q(beta: ArrayView1<f64>, q: f64) -> f64 {
    beta.iter()
        .filter(|b| **b != 0.0)
        .map(|b| if q == 1.0 { b.abs() } else { b.abs().powf(q) })
        .sum()
}

/// The `K` Hadamard factors together with their cached product `β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorState {
    factors: Vec<Array1<f64>>,
    beta: Array1<f64>,
}

impl FactorState {
    pub fn new(factors: Vec<Array1<f64>>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| HppError::arg("need at least one factor"))?;
        let p = first.len();
        if factors.iter().any(|f| f.len() != p) {
            return Err(HppError::dims("factors have different lengths"));
        }
        let mut state = FactorState {
            beta: Array1::zeros(p),
            factors,
        };
        state.refresh();
        Ok(state)
    }

    /// Exact split `u_{1,j} = sign(β_j)|β_j|^{1/K}`, `u_{k,j} = |β_j|^{1/K}`
    /// for `k > 1`. Zero coefficients give zero factors.
    pub fn split(beta: ArrayView1<f64>, k: usize) -> Result<Self> {
        Self::split_with_floor(beta, k, 0.0)
    }

    /// Solver starting point: the exact split, except that zero coefficients
    /// are given factor entries of `1e-3` so the iteration does not start on
    /// the absorbing all-zero stationary point.
    pub fn initial(beta0: ArrayView1<f64>, k: usize) -> Result<Self> {
        Self::split_with_floor(beta0, k, 1e-3)
    }

    fn split_with_floor(beta: ArrayView1<f64>, k: usize, zero_fill: f64) -> Result<Self> {
        if k == 0 {
            return Err(HppError::arg("K must be >= 1"));
        }
        let root = |b: f64| {
            if b == 0.0 {
                zero_fill
            } else if k == 2 {
                b.abs().sqrt()
            } else {
                b.abs().powf(1.0 / k as f64)
            }
        };
        let mut factors = Vec::with_capacity(k);
        factors.push(beta.mapv(|b| if b < 0.0 { -root(b) } else { root(b) }));
        for _ in 1..k {
            factors.push(beta.mapv(root));
        }
        Self::new(factors)
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn p(&self) -> usize {
        self.beta.len()
    }

    pub fn factors(&self) -> &[Array1<f64>] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &Array1<f64> {
        &self.factors[k]
    }

    pub fn beta(&self) -> &Array1<f64> {
        &self.beta
    }

    /// Replaces factor `k` and refreshes `β`.
    pub fn set_factor(&mut self, k: usize, u: Array1<f64>) {
        assert_eq!(u.len(), self.p());
        self.factors[k] = u;
        self.refresh();
    }

    /// Product of every factor except `k`, by direct multiplication.
    pub fn leave_one_out(&self, k: usize) -> Array1<f64> {
        let mut v = Array1::ones(self.p());
        for (i, f) in self.factors.iter().enumerate() {
            if i != k {
                v *= f;
            }
        }
        v
    }

    /// `Σ_k u_k^T u_k`.
    pub fn sum_sq(&self) -> f64 {
        self.factors.iter().map(|f| f.dot(f)).sum()
    }

    fn refresh(&mut self) {
        let mut b = self.factors[0].clone();
        for f in &self.factors[1..] {
            b *= f;
        }
        self.beta = b;
    }
}

/// `f(β) = β^T Q β - 2 β^T l + λ ||β||_q^q`.
pub fn objective_beta(
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    beta: ArrayView1<f64>,
) -> Result<f64> {
    if spec.structure().is_some() {
        return Err(HppError::arg(
            "structured penalties have no closed form in beta; use objective_factors",
        ));
    }
    problem.check_len(beta)?;
    Ok(problem.quadratic_loss(beta) + spec.penalty(beta))
}

/// Factor objective `g`: `h(β) + (λ/K) Σ_k u_k^T u_k`, or with a structured
/// penalty `h(β) + u^T Σ_u^{-1} u + v^T Σ_v^{-1} v`.
pub fn objective_factors(
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    state: &FactorState,
) -> Result<f64> {
    problem.check_len(state.beta().view())?;
    let h = problem.quadratic_loss(state.beta().view());
    match spec.structure() {
        None => {
            if state.k() != spec.factors() {
                return Err(HppError::arg(format!(
                    "state has {} factors but the penalty uses K = {}",
                    state.k(),
                    spec.factors()
                )));
            }
            Ok(h + spec.lambda() / spec.factors() as f64 * state.sum_sq())
        }
        Some(s) => {
            if state.k() != 2 {
                return Err(HppError::arg("structured penalties require K = 2"));
            }
            Ok(h + s.u.quad_form(state.factor(0).view())? + s.v.quad_form(state.factor(1).view())?)
        }
    }
}

/// Per-coordinate lasso optimality report.
#[derive(Debug, Clone, Serialize)]
pub struct KktReport {
    pub max_violation: f64,
    pub is_optimal: bool,
    pub per_coordinate: Array1<f64>,
}

pub const DEFAULT_KKT_TOL: f64 = 1e-6;

/// Lasso optimality conditions: with `s_j = 2(l_j - [Qβ]_j)/λ`, require
/// `s_j = sign(β_j)` on the support and `|s_j| <= 1` off it.
pub fn kkt_check(
    problem: &RegressionProblem,
    lambda: f64,
    beta: ArrayView1<f64>,
    tol: f64,
) -> Result<KktReport> {
    kkt_check_with_zero_tol(problem, lambda, beta, tol, 0.0)
}

/// As [`kkt_check`], but coordinates with `|β_j| <= zero_tol` are treated as
/// zero. Algorithms that never produce exact zeros (HPP, LQA) need this.
pub fn kkt_check_with_zero_tol(
    problem: &RegressionProblem,
    lambda: f64,
    beta: ArrayView1<f64>,
    tol: f64,
    zero_tol: f64,
) -> Result<KktReport> {
    if !(lambda > 0.0) {
        return Err(HppError::arg("KKT conditions need lambda > 0"));
    }
    problem.check_len(beta)?;
    let qb = problem.q().dot(&beta);
    let per_coordinate: Array1<f64> = beta
        .iter()
        .zip(problem.l().iter().zip(qb.iter()))
        .map(|(&b, (&l, &qbj))| {
            let s = 2.0 * (l - qbj) / lambda;
            if b.abs() > zero_tol {
                (s - sign(b)).abs()
            } else {
                (s.abs() - 1.0).max(0.0)
            }
        })
        .collect();
    let max_violation = per_coordinate.iter().fold(0.0f64, |m, v| m.max(*v));
    Ok(KktReport {
        max_violation,
        is_optimal: max_violation <= tol,
        per_coordinate,
    })
}

/// Magnitude below which a coefficient cannot be told apart from zero once a
/// solver has stopped at convergence level `delta`.
///
/// A coordinate whose optimum is zero with `|s_j| = 1 - η` shrinks by at
/// least a factor `1 - η` per HPP or LQA iteration. Stopping bounds its
/// change by `sqrt(δ/Q_jj)`, so any such coordinate with KKT gap `η > tol`
/// is already below `sqrt(δ/Q_jj)/tol`.
pub fn kkt_zero_tolerance(problem: &RegressionProblem, delta: f64, tol: f64) -> f64 {
    let min_diag = problem.q().diag().iter().copied().fold(f64::INFINITY, f64::min);
    (delta / min_diag.max(1e-300)).sqrt() / tol
}

/// Minimizer over `v` of `||β/v||^2 + ||v||^2`.
#[derive(Debug, Clone)]
pub struct InnerMin {
    pub v: Array1<f64>,
    pub value: f64,
}

/// Analytic inner minimum: `v_j = sqrt|β_j|`, value `2||β||_1`.
pub fn inner_min_closed_form(beta: ArrayView1<f64>) -> InnerMin {
    InnerMin {
        v: beta.mapv(|b| b.abs().sqrt()),
        value: 2.0 * beta.iter().map(|b| b.abs()).sum::<f64>(),
    }
}

/// Row sums of squares of a matrix's columns, `Σ_i x_{ij}^2`.
pub fn column_sum_sq(x: &Array2<f64>) -> Array1<f64> {
    x.map(|v| v * v).sum_axis(Axis(0))
}
