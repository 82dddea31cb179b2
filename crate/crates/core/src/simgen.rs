//! Seeded simulation designs: sparse coefficients, iid or low-rank-plus-noise
//! designs, and gaussian/logistic/poisson responses.

use std::path::Path;

use ndarray::{Array1, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, Normal, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{HppError, Result};
use crate::glm::GlmFamily;
use crate::io;
use crate::linalg::Cholesky;
use crate::model::RegressionProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    IidNormal,
    /// Column-standardized `U V^T + E` with `r = round(p · rank_fraction)`.
    LowRankPlusNoise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDesign {
    pub n: usize,
    pub p: usize,
    /// Probability that a true coefficient is exactly zero.
    #[serde(default = "half")]
    pub sparsity: f64,
    #[serde(default = "half")]
    pub beta_sd: f64,
    #[serde(default = "iid")]
    pub design_kind: DesignKind,
    #[serde(default = "tenth")]
    pub rank_fraction: f64,
    #[serde(default = "gaussian")]
    pub family: GlmFamily,
    #[serde(default)]
    pub seed: u64,
}

fn half() -> f64 {
    0.5
}
fn tenth() -> f64 {
    0.1
}
fn iid() -> DesignKind {
    DesignKind::IidNormal
}
fn gaussian() -> GlmFamily {
    GlmFamily::Gaussian
}

impl SimDesign {
    pub fn new(n: usize, p: usize, seed: u64) -> Self {
        SimDesign {
            n,
            p,
            sparsity: 0.5,
            beta_sd: 0.5,
            design_kind: DesignKind::IidNormal,
            rank_fraction: 0.1,
            family: GlmFamily::Gaussian,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SimDesign { seed, ..self.clone() }
    }

    pub fn rank(&self) -> usize {
        ((self.p as f64 * self.rank_fraction).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(HppError::arg("n and p must be positive"));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(HppError::arg("sparsity must lie in [0, 1]"));
        }
        if !(self.beta_sd > 0.0) {
            return Err(HppError::arg("beta_sd must be positive"));
        }
        if self.design_kind == DesignKind::LowRankPlusNoise {
            if !(self.rank_fraction > 0.0) {
                return Err(HppError::arg("rank_fraction must be positive"));
            }
            if self.n < 2 {
                return Err(HppError::arg("standardization needs n >= 2"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub design: SimDesign,
    pub x: Array2<f64>,
    pub y: Array1<f64>,
    pub beta_true: Array1<f64>,
}

fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.sample::<f64, _>(StandardNormal))
}

/// Draws `β`, then `X`, then `y`, all from one ChaCha8 stream seeded by
/// `design.seed`.
pub fn generate_dataset(design: &SimDesign) -> Result<Dataset> {
    design.validate()?;
    let (n, p) = (design.n, design.p);
    let mut rng = ChaCha8Rng::seed_from_u64(design.seed);
    let coef = Normal::new(0.0, design.beta_sd).map_err(|e| HppError::arg(e.to_string()))?;
    let zero = Bernoulli::new(design.sparsity).map_err(|e| HppError::arg(e.to_string()))?;
    let beta_true: Array1<f64> = (0..p)
        .map(|_| {
            let is_zero = zero.sample(&mut rng);
            let value = coef.sample(&mut rng);
            if is_zero {
                0.0
            } else {
                value
            }
        })
        .collect();
    let x = match design.design_kind {
        DesignKind::IidNormal => normal_matrix(&mut rng, n, p),
        DesignKind::LowRankPlusNoise => {
            let r = design.rank();
            let u = normal_matrix(&mut rng, n, r);
            let v = normal_matrix(&mut rng, p, r);
            let e = normal_matrix(&mut rng, n, p);
            column_standardize(&(u.dot(&v.t()) + e))?
        }
    };
    let eta = x.dot(&beta_true);
    let y: Array1<f64> = match design.family {
        GlmFamily::Gaussian => eta.mapv(|m| m + rng.sample::<f64, _>(StandardNormal)),
        GlmFamily::Logistic => eta.mapv(|m| {
            let prob = GlmFamily::Logistic.mean(m);
            if rng.random::<f64>() < prob {
                1.0
            } else {
                0.0
            }
        }),
        GlmFamily::Poisson => {
            let mut out = Array1::zeros(n);
            for (o, m) in out.iter_mut().zip(eta.iter()) {
                let rate = m.exp();
                *o = if rate > 0.0 && rate.is_finite() {
                    Poisson::new(rate)
                        .map_err(|e| HppError::arg(e.to_string()))?
                        .sample(&mut rng)
                } else if rate == 0.0 {
                    0.0
                } else {
                    return Err(HppError::Overflow { eta: *m });
                };
            }
            out
        }
    };
    Ok(Dataset {
        design: design.clone(),
        x,
        y,
        beta_true,
    })
}

/// Centers each column and scales it so that `Σ_i x_ij^2 = n`.
pub fn column_standardize(x: &Array2<f64>) -> Result<Array2<f64>> {
    let n = x.nrows();
    if n < 2 {
        return Err(HppError::arg("standardization needs at least two rows"));
    }
    let mut out = x.clone();
    for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
        let ss = col.dot(&col);
        let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(mean.abs());
        if !(ss > 0.0) || ss.sqrt() <= 1e-12 * scale * (n as f64).sqrt() {
            return Err(HppError::arg(format!("column {j} is constant")));
        }
        let f = (n as f64 / ss).sqrt();
        col.mapv_inplace(|v| v * f);
    }
    Ok(out)
}

/// Moment-matching λ for the L_q penalty.
///
/// Treats `β_j` as draws from the prior `∝ exp(-λ|β|^q / (2σ²))`, a
/// generalized Gaussian whose second moment is `α² Γ(3/q)/Γ(1/q)` with
/// `α^{-q} = λ/(2σ²)`. The second moment is estimated from least squares as
/// `m₂ = max(mean(β̂²) - σ̂² tr((X^T X)^{-1})/p, 1e-8)`, giving
/// `λ̂ = 2σ̂² (Γ(3/q) / (Γ(1/q) m₂))^{q/2}`; for `q = 1` this is `σ̂² √(8/m₂)`.
///
/// This is a heuristic default, not a calibrated empirical-Bayes procedure.
pub fn moment_lambda_q(problem: &RegressionProblem, q: f64) -> Result<f64> {
    let (n, p) = (problem.n(), problem.p());
    if n <= p {
        return Err(HppError::Unsupported(format!(
            "automatic lambda needs n > p (n = {n}, p = {p}); supply lambda explicitly"
        )));
    }
    let k = 2.0 / q;
    if !(q > 0.0) || (k - k.round()).abs() > 1e-12 {
        return Err(HppError::arg(format!("q = {q} is not of the form 2/K")));
    }
    let chol = Cholesky::factor(problem.q().view())?;
    let beta = chol.solve(problem.l().view());
    let trace_inv: f64 = chol.inverse().diag().sum();
    // RSS = y^T y - 2 β^T l + β^T Q β; needs y when available
    let rss = match problem.y() {
        Some(y) => {
            let x = problem.x().expect("design stored with response");
            let r = y - &x.dot(&beta);
            r.dot(&r)
        }
        None => {
            return Err(HppError::Unsupported(
                "automatic lambda needs the raw response, not just (Q, l)".into(),
            ))
        }
    };
    let sigma_sq = rss / (n - p) as f64;
    let m2 = (beta.dot(&beta) / p as f64 - sigma_sq * trace_inv / p as f64).max(1e-8);
    let ratio = generalized_gaussian_moment_ratio(k.round() as usize);
    Ok(2.0 * sigma_sq * (ratio / m2).powf(q / 2.0))
}

/// [`moment_lambda_q`] at `q = 1`.
pub fn moment_lambda(problem: &RegressionProblem) -> Result<f64> {
    moment_lambda_q(problem, 1.0)
}

/// `Γ(3K/2) / Γ(K/2) = Π_{i<K} (K/2 + i)`.
fn generalized_gaussian_moment_ratio(k: usize) -> f64 {
    let a = k as f64 / 2.0;
    (0..k).map(|i| a + i as f64).product()
}

/// Writes `X.csv`, `y.csv`, `beta_true.csv` and `manifest.json` into `dir`.
pub fn write_dataset(dir: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let dir = dir.as_ref();
    io::create_dir(dir)?;
    io::write_matrix(dir.join("X.csv"), &data.x)?;
    io::write_vector(dir.join("y.csv"), &data.y)?;
    io::write_vector(dir.join("beta_true.csv"), &data.beta_true)?;
    let manifest = serde_json::json!({
        "design": data.design,
        "rng": "ChaCha8",
        "files": { "x": "X.csv", "y": "y.csv", "beta_true": "beta_true.csv" },
    });
    io::write_text(
        dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )
}
