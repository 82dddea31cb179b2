//! Synthetic grid-signal experiment and slice renderings.

use std::fmt::Write;
use std::sync::Arc;

use ndarray::Array1;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::graph::{CarSpec, GridGraph};
use super::shpp::{solve_shpp, SignalProblem, DEFAULT_SHPP_REL_TOL};
use crate::error::{HppError, Result};
use crate::linalg::soft_threshold;

/// Entries below this magnitude count as zero in reports and renderings.
pub const ZERO_TOL: f64 = 1e-6;

/// Axis-aligned block of constant signal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalBlock {
    pub origin: [usize; 3],
    pub size: [usize; 3],
    pub height: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridExperimentConfig {
    pub dims: [usize; 3],
    pub blocks: Vec<SignalBlock>,
    pub car: CarSpec,
    pub seed: u64,
    #[serde(default = "default_noise")]
    pub noise_sd: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_sweeps")]
    pub max_sweeps: usize,
}

fn default_noise() -> f64 {
    1.0
}
fn default_rel_tol() -> f64 {
    DEFAULT_SHPP_REL_TOL
}
fn default_max_sweeps() -> usize {
    10_000
}

/// Summary of one estimate against the true signal.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateSummary {
    /// Fraction of sites with `|θ̂_i| < 1e-6`.
    pub sparsity: f64,
    pub support_precision: f64,
    pub support_recall: f64,
    /// Fraction of nonzero sites with at least one nonzero neighbor.
    pub contiguity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub sweeps: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub structured: EstimateSummary,
    /// Unstructured lasso `S(z, λ/2)` with `λ = 2/τ²`, the `ρ = 0` counterpart.
    pub unstructured: EstimateSummary,
}

#[derive(Debug, Clone)]
pub struct GridExperiment {
    pub graph: Arc<GridGraph>,
    pub z: Array1<f64>,
    pub theta_true: Array1<f64>,
    pub theta_hat: Array1<f64>,
    pub lasso_hat: Array1<f64>,
    pub objective_trace: Vec<f64>,
    pub report: GridReport,
}

pub fn summarize(graph: &GridGraph, theta_true: &Array1<f64>, est: &Array1<f64>) -> EstimateSummary {
    let active: Vec<bool> = est.iter().map(|x| x.abs() >= ZERO_TOL).collect();
    let truth: Vec<bool> = theta_true.iter().map(|x| *x != 0.0).collect();
    let n_active = active.iter().filter(|a| **a).count();
    let n_true = truth.iter().filter(|a| **a).count();
    let hits = active.iter().zip(&truth).filter(|(a, t)| **a && **t).count();
    EstimateSummary {
        sparsity: 1.0 - n_active as f64 / est.len().max(1) as f64,
        support_precision: if n_active == 0 { 1.0 } else { hits as f64 / n_active as f64 },
        support_recall: if n_true == 0 { 1.0 } else { hits as f64 / n_true as f64 },
        contiguity: graph.contiguity(&active),
    }
}

/// Simulates `z = θ + noise` on a full grid, fits the structured estimate and
/// the unstructured lasso on the same `z`, and compares them.
pub fn synthetic_grid_experiment(cfg: &GridExperimentConfig) -> Result<GridExperiment> {
    let [d1, d2, d3] = cfg.dims;
    let graph = Arc::new(GridGraph::full(d1, d2, d3)?);
    let mut theta = Array1::<f64>::zeros(graph.len());
    for b in &cfg.blocks {
        for (idx, s) in graph.sites().iter().enumerate() {
            if (0..3).all(|a| s[a] >= b.origin[a] && s[a] < b.origin[a] + b.size[a]) {
                theta[idx] = b.height;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let z: Array1<f64> = theta
        .iter()
        .map(|t| {
            let e: f64 = StandardNormal.sample(&mut rng);
            t + cfg.noise_sd * e
        })
        .collect();
    let problem = SignalProblem::new(z.clone(), graph.clone(), cfg.car)?;
    let trace = solve_shpp(&problem, None, cfg.rel_tol, cfg.max_sweeps)?;
    let threshold = 1.0 / cfg.car.tau_sq;
    let lasso_hat = z.mapv(|x| soft_threshold(x, threshold));
    let report = GridReport {
        sweeps: trace.iterations,
        converged: trace.converged,
        final_objective: trace.final_objective(),
        structured: summarize(&graph, &theta, &trace.final_beta),
        unstructured: summarize(&graph, &theta, &lasso_hat),
    };
    Ok(GridExperiment {
        graph,
        z,
        theta_true: theta,
        theta_hat: trace.final_beta.clone(),
        lasso_hat,
        objective_trace: trace.objective_per_iteration.clone(),
        report,
    })
}

/// Color convention for slice renderings.
#[derive(Debug, Clone, Copy)]
pub enum SliceStyle {
    /// Raw scores: strong green/blue beyond `strong`, light beyond `weak`.
    Scores { strong: f64, weak: f64 },
    /// Estimates: green positive, blue negative, pink zero.
    Estimates,
}

impl SliceStyle {
    /// Two-sided normal quantiles `z_{.975}` and `z_{.9}`.
    pub fn default_scores() -> Self {
        SliceStyle::Scores {
            strong: 1.959963984540054,
            weak: 1.2815515655446004,
        }
    }

    fn color(&self, x: f64) -> &'static str {
        match *self {
            SliceStyle::Scores { strong, weak } => {
                if x > strong {
                    "#1a9641"
                } else if x > weak {
                    "#a6d96a"
                } else if x < -strong {
                    "#2b5fb3"
                } else if x < -weak {
                    "#9ecae1"
                } else {
                    "#f0f0f0"
                }
            }
            SliceStyle::Estimates => {
                if x >= ZERO_TOL {
                    "#1a9641"
                } else if x <= -ZERO_TOL {
                    "#2b5fb3"
                } else {
                    "#f7c6d9"
                }
            }
        }
    }
}

/// SVG heatmap of the `k`-th horizontal slice; inactive sites are left blank.
pub fn render_slice_svg(graph: &GridGraph, values: &Array1<f64>, k: usize, style: SliceStyle) -> Result<String> {
    let [d1, d2, d3] = graph.dims();
    if k >= d3 {
        return Err(HppError::arg(format!("slice {k} outside depth {d3}")));
    }
    if values.len() != graph.len() {
        return Err(HppError::dims("values do not match the graph"));
    }
    let cell = 12;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        d2 * cell,
        d1 * cell,
        d2 * cell,
        d1 * cell
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (idx, s) in graph.sites().iter().enumerate() {
        if s[2] != k {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="{}"/>"#,
            s[1] * cell,
            s[0] * cell,
            style.color(values[idx])
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
