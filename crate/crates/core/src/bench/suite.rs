use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::Array1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::plot::progress_svg;
use super::progress::{average_curves, progress_normalize, RunCurve};
use crate::error::{HppError, Result};
use crate::glm::{self, GlmFamily, GlmProblem, NewtonConfig};
use crate::io;
use crate::linear::{self, ConvergenceConfig, LqaConfig};
use crate::model::{kkt_check_with_zero_tol, kkt_zero_tolerance, FactorState, PenaltySpec, RegressionProblem};
use crate::simgen::{generate_dataset, moment_lambda_q, Dataset, SimDesign};
use crate::trace::{fmt_f64, SolverTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Hpp,
    Lqa,
    Ccd,
    Lla,
    Hpcd,
    Lqcd,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hpp => "hpp",
            Algorithm::Lqa => "lqa",
            Algorithm::Ccd => "ccd",
            Algorithm::Lla => "lla",
            Algorithm::Hpcd => "hpcd",
            Algorithm::Lqcd => "lqcd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hpp" => Ok(Algorithm::Hpp),
            "lqa" => Ok(Algorithm::Lqa),
            "ccd" => Ok(Algorithm::Ccd),
            "lla" => Ok(Algorithm::Lla),
            "hpcd" => Ok(Algorithm::Hpcd),
            "lqcd" => Ok(Algorithm::Lqcd),
            other => Err(HppError::arg(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tolerance of the per-row KKT check.
pub const KKT_TOL: f64 = 1e-4;

/// How the penalty multiplier is chosen for each dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaChoice {
    Fixed(f64),
    /// Moment-matching heuristic (`simgen::moment_lambda_q`); linear, `n > p`.
    Moment,
    /// Multiple of `λ_max = 2 max_j |x_j^T (y - Ȧ(0))|`, the smallest lasso
    /// penalty with an all-zero solution.
    FractionOfMax(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub name: String,
    pub design: SimDesign,
    pub repetitions: usize,
    pub algorithms: Vec<Algorithm>,
    /// Number of Hadamard factors; `q = 2/K`.
    pub factors: usize,
    pub lambda: LambdaChoice,
    #[serde(default)]
    pub conv: ConvergenceConfig,
    #[serde(default)]
    pub lqa: LqaConfig,
    #[serde(default)]
    pub newton: NewtonConfig,
    /// Stopping rule of the LLA coordinate-descent subproblem.
    #[serde(default = "default_lla_inner")]
    pub lla_inner: ConvergenceConfig,
    /// When set, progress curves come from separate fixed-length runs.
    #[serde(default)]
    pub progress_iterations: Option<usize>,
    /// Coefficients at most this large count as zero in the KKT check;
    /// derived from `conv.delta` by `kkt_zero_tolerance` when absent.
    #[serde(default)]
    pub kkt_zero_tol: Option<f64>,
}

fn default_lla_inner() -> ConvergenceConfig {
    ConvergenceConfig {
        delta: 1e-10,
        ..Default::default()
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.design.validate()?;
        if self.repetitions == 0 {
            return Err(HppError::arg("repetitions must be >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(HppError::arg("no algorithms selected"));
        }
        PenaltySpec::new(self.factors, 0.0)?;
        self.conv.validate()?;
        self.lla_inner.validate()?;
        match self.lambda {
            LambdaChoice::Fixed(l) | LambdaChoice::FractionOfMax(l) if !(l > 0.0) => {
                Err(HppError::arg("lambda must be positive"))
            }
            LambdaChoice::Moment if self.design.family != GlmFamily::Gaussian => Err(HppError::arg(
                "moment lambda is only available for gaussian designs",
            )),
            _ => Ok(()),
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| HppError::Parse {
            path: "<suite config>".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One `(dataset, algorithm)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub dataset: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub lambda: f64,
    pub converged: bool,
    pub iterations: usize,
    pub ridge_solves: usize,
    pub inner_steps: usize,
    pub coordinate_sweeps: usize,
    pub final_objective: f64,
    /// Lasso rows only.
    pub kkt_max_violation: Option<f64>,
    pub relative_mse: f64,
    pub relative_prediction_error: f64,
    pub numerical_warning: bool,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl SuiteRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSummary {
    pub runs: usize,
    pub failures: usize,
    pub converged: usize,
    pub median_iterations: f64,
    pub mean_iterations: f64,
    pub median_ridge_solves: f64,
    pub median_objective: f64,
    pub mean_relative_mse: f64,
    pub mean_relative_prediction_error: f64,
    pub max_kkt_violation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairwiseSummary {
    pub a: Algorithm,
    pub b: Algorithm,
    pub datasets: usize,
    pub max_relative_difference: f64,
    pub median_relative_difference: f64,
    /// Datasets on which `a`'s final objective is `<=` `b`'s.
    pub a_not_worse: usize,
    pub b_not_worse: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub suite: String,
    pub config_hash: String,
    pub lambda_source: String,
    pub algorithms: BTreeMap<Algorithm, AlgorithmSummary>,
    pub pairwise: Vec<PairwiseSummary>,
    /// Mean normalized progress per iteration.
    pub progress: BTreeMap<Algorithm, Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub rows: Vec<SuiteRow>,
    pub aggregate: Aggregate,
}

impl SuiteReport {
    pub fn rows_for(&self, alg: Algorithm) -> impl Iterator<Item = &SuiteRow> {
        self.rows.iter().filter(move |r| r.algorithm == alg)
    }

    pub fn pair(&self, a: Algorithm, b: Algorithm) -> Option<&PairwiseSummary> {
        self.aggregate.pairwise.iter().find(|p| p.a == a && p.b == b)
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// The problem a dataset defines, in linear or GLM form.
enum Prepared {
    Linear(RegressionProblem),
    Glm(GlmProblem),
}

fn choose_lambda(cfg: &SuiteConfig, data: &Dataset, prepared: &Prepared) -> Result<f64> {
    match cfg.lambda {
        LambdaChoice::Fixed(l) => Ok(l),
        LambdaChoice::Moment => match prepared {
            Prepared::Linear(p) => moment_lambda_q(p, 2.0 / cfg.factors as f64),
            Prepared::Glm(_) => Err(HppError::arg("moment lambda needs a gaussian design")),
        },
        LambdaChoice::FractionOfMax(frac) => {
            let family = cfg.design.family;
            let resid = data.y.mapv(|y| y - family.mean(0.0));
            let g = data.x.t().dot(&resid);
            Ok(frac * 2.0 * g.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        }
    }
}

/// Solver settings other than the stopping rule.
#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub lqa: LqaConfig,
    pub lla_inner: ConvergenceConfig,
    pub newton: NewtonConfig,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            lqa: LqaConfig::default(),
            lla_inner: default_lla_inner(),
            newton: NewtonConfig::default(),
        }
    }
}

impl SuiteConfig {
    fn settings(&self) -> SolverSettings {
        SolverSettings {
            lqa: self.lqa,
            lla_inner: self.lla_inner,
            newton: self.newton,
        }
    }
}

/// Runs one linear-model algorithm from the coefficient start `start`.
/// CCD, HPCD and LQCD are restricted to the lasso (`K = 2`).
pub fn run_linear(
    alg: Algorithm,
    problem: &RegressionProblem,
    spec: &PenaltySpec,
    start: &Array1<f64>,
    conv: &ConvergenceConfig,
    settings: &SolverSettings,
) -> Result<SolverTrace> {
    let lasso = spec.factors() == 2;
    let need_lasso = |name: &str| {
        if lasso {
            Ok(())
        } else {
            Err(HppError::Unsupported(format!("{name} solves the lasso only")))
        }
    };
    match alg {
        Algorithm::Hpp => linear::solve_hpp(problem, spec, FactorState::initial(start.view(), spec.factors())?, conv),
        Algorithm::Lqa => linear::solve_lqa(problem, spec, start.clone(), &settings.lqa, conv),
        Algorithm::Lla => linear::solve_lla(problem, spec, start.clone(), conv, &settings.lla_inner),
        Algorithm::Ccd => {
            need_lasso("CCD")?;
            linear::solve_ccd(problem, spec.lambda(), None, start.clone(), conv)
        }
        Algorithm::Hpcd => {
            need_lasso("HPCD")?;
            linear::solve_hpcd(problem, spec.lambda(), start.clone(), conv)
        }
        Algorithm::Lqcd => {
            need_lasso("LQCD")?;
            linear::solve_lqcd(problem, spec.lambda(), start.clone(), &settings.lqa, conv)
        }
    }
}

/// Runs one GLM algorithm (HPP, LQA or LLA) from the coefficient start `start`.
pub fn run_glm(
    alg: Algorithm,
    problem: &GlmProblem,
    spec: &PenaltySpec,
    start: &Array1<f64>,
    conv: &ConvergenceConfig,
    settings: &SolverSettings,
) -> Result<SolverTrace> {
    match alg {
        Algorithm::Hpp => glm::solve_hpp_glm(
            problem,
            spec,
            FactorState::initial(start.view(), spec.factors())?,
            conv,
            &settings.newton,
        ),
        Algorithm::Lqa => glm::solve_lqa_glm(problem, spec, start.clone(), &settings.lqa, conv, &settings.newton),
        Algorithm::Lla => glm::solve_lla_glm(problem, spec, start.clone(), conv, &settings.lla_inner, &settings.newton),
        other => Err(HppError::Unsupported(format!("{other} is not available for GLMs"))),
    }
}

struct DatasetOutcome {
    rows: Vec<SuiteRow>,
    curves: BTreeMap<String, RunCurve>,
}

fn failed_rows(cfg: &SuiteConfig, index: usize, seed: u64, err: &HppError) -> DatasetOutcome {
    let rows = cfg
        .algorithms
        .iter()
        .map(|&algorithm| SuiteRow {
            dataset: index,
            seed,
            algorithm,
            lambda: f64::NAN,
            converged: false,
            iterations: 0,
            ridge_solves: 0,
            inner_steps: 0,
            coordinate_sweeps: 0,
            final_objective: f64::NAN,
            kkt_max_violation: None,
            relative_mse: f64::NAN,
            relative_prediction_error: f64::NAN,
            numerical_warning: false,
            error: Some(err.to_string()),
            wall_time_s: 0.0,
        })
        .collect();
    DatasetOutcome {
        rows,
        curves: BTreeMap::new(),
    }
}

fn run_dataset(cfg: &SuiteConfig, index: usize) -> DatasetOutcome {
    let seed = cfg.design.seed.wrapping_add(index as u64);
    let setup = || -> Result<(Dataset, Prepared, f64, Array1<f64>)> {
        let data = generate_dataset(&cfg.design.with_seed(seed))?;
        let prepared = match cfg.design.family {
            GlmFamily::Gaussian => Prepared::Linear(RegressionProblem::from_data(data.x.clone(), data.y.clone())?),
            family => Prepared::Glm(GlmProblem::new(data.x.clone(), data.y.clone(), family)?),
        };
        let lambda = choose_lambda(cfg, &data, &prepared)?;
        let start = match &prepared {
            Prepared::Linear(p) => linear::default_start(p, lambda)?,
            Prepared::Glm(p) => glm::ridge_start(p, lambda / 2.0, &cfg.newton)?,
        };
        Ok((data, prepared, lambda, start))
    };
    let (data, prepared, lambda, start) = match setup() {
        Ok(v) => v,
        Err(e) => return failed_rows(cfg, index, seed, &e),
    };
    let spec = match PenaltySpec::new(cfg.factors, lambda) {
        Ok(s) => s,
        Err(e) => return failed_rows(cfg, index, seed, &e),
    };
    let settings = cfg.settings();
    let truth_sq = data.beta_true.dot(&data.beta_true);
    let fit_true = data.x.dot(&data.beta_true);
    let pred_sq = fit_true.dot(&fit_true);
    let run = |alg: Algorithm, conv: &ConvergenceConfig| match &prepared {
        Prepared::Linear(p) => run_linear(alg, p, &spec, &start, conv, &settings),
        Prepared::Glm(p) => run_glm(alg, p, &spec, &start, conv, &settings),
    };
    let mut rows = Vec::new();
    let mut curves = BTreeMap::new();
    for &alg in &cfg.algorithms {
        let t0 = Instant::now();
        let result = run(alg, &cfg.conv);
        let wall = t0.elapsed().as_secs_f64();
        let mut row = SuiteRow {
            dataset: index,
            seed,
            algorithm: alg,
            lambda,
            converged: false,
            iterations: 0,
            ridge_solves: 0,
            inner_steps: 0,
            coordinate_sweeps: 0,
            final_objective: f64::NAN,
            kkt_max_violation: None,
            relative_mse: f64::NAN,
            relative_prediction_error: f64::NAN,
            numerical_warning: false,
            error: None,
            wall_time_s: wall,
        };
        match result {
            Ok(trace) => {
                let err = &trace.final_beta - &data.beta_true;
                let fit_err = data.x.dot(&err);
                row.converged = trace.converged;
                row.iterations = trace.iterations;
                row.ridge_solves = trace.ridge_solves;
                row.inner_steps = trace.inner_steps;
                row.coordinate_sweeps = trace.coordinate_sweeps;
                row.final_objective = trace.final_objective();
                row.numerical_warning = trace.numerical_warning;
                row.relative_mse = err.dot(&err) / truth_sq;
                row.relative_prediction_error = fit_err.dot(&fit_err) / pred_sq;
                if let (Prepared::Linear(p), 2) = (&prepared, cfg.factors) {
                    let zero_tol = cfg
                        .kkt_zero_tol
                        .unwrap_or_else(|| kkt_zero_tolerance(p, cfg.conv.delta, KKT_TOL));
                    row.kkt_max_violation =
                        kkt_check_with_zero_tol(p, lambda, trace.final_beta.view(), KKT_TOL, zero_tol)
                            .ok()
                            .map(|k| k.max_violation);
                }
                if cfg.progress_iterations.is_none() {
                    curves.insert(
                        alg.name().to_string(),
                        RunCurve {
                            objective: trace.objective_per_iteration.clone(),
                            ridge_solves: trace.ridge_solves_per_iteration.clone(),
                        },
                    );
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }
    if let Some(m) = cfg.progress_iterations {
        let fixed = ConvergenceConfig::fixed(m);
        for &alg in &cfg.algorithms {
            if let Ok(trace) = run(alg, &fixed) {
                curves.insert(
                    alg.name().to_string(),
                    RunCurve {
                        objective: trace.objective_per_iteration,
                        ridge_solves: trace.ridge_solves_per_iteration,
                    },
                );
            }
        }
    }
    DatasetOutcome { rows, curves }
}

fn aggregate(cfg: &SuiteConfig, rows: &[SuiteRow], progress: BTreeMap<Algorithm, Vec<f64>>) -> Aggregate {
    let mut algorithms = BTreeMap::new();
    for &alg in &cfg.algorithms {
        let all: Vec<&SuiteRow> = rows.iter().filter(|r| r.algorithm == alg).collect();
        let ok: Vec<&SuiteRow> = all.iter().copied().filter(|r| r.ok()).collect();
        let pick = |f: fn(&SuiteRow) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
        let kkt: Vec<f64> = ok.iter().filter_map(|r| r.kkt_max_violation).collect();
        algorithms.insert(
            alg,
            AlgorithmSummary {
                runs: all.len(),
                failures: all.len() - ok.len(),
                converged: ok.iter().filter(|r| r.converged).count(),
                median_iterations: median(&pick(|r| r.iterations as f64)),
                mean_iterations: mean(&pick(|r| r.iterations as f64)),
                median_ridge_solves: median(&pick(|r| r.ridge_solves as f64)),
                median_objective: median(&pick(|r| r.final_objective)),
                mean_relative_mse: mean(&pick(|r| r.relative_mse)),
                mean_relative_prediction_error: mean(&pick(|r| r.relative_prediction_error)),
                max_kkt_violation: if kkt.is_empty() {
                    None
                } else {
                    Some(kkt.iter().copied().fold(0.0, f64::max))
                },
            },
        );
    }
    let by_key: BTreeMap<(usize, Algorithm), &SuiteRow> = rows
        .iter()
        .filter(|r| r.ok())
        .map(|r| ((r.dataset, r.algorithm), r))
        .collect();
    let mut pairwise = Vec::new();
    for (i, &a) in cfg.algorithms.iter().enumerate() {
        for &b in &cfg.algorithms[i + 1..] {
            let mut diffs = Vec::new();
            let (mut a_nw, mut b_nw) = (0, 0);
            for d in 0..cfg.repetitions {
                if let (Some(ra), Some(rb)) = (by_key.get(&(d, a)), by_key.get(&(d, b))) {
                    let (fa, fb) = (ra.final_objective, rb.final_objective);
                    diffs.push((fa - fb).abs() / fa.abs().max(fb.abs()).max(1e-300));
                    a_nw += usize::from(fa <= fb);
                    b_nw += usize::from(fb <= fa);
                }
            }
            pairwise.push(PairwiseSummary {
                a,
                b,
                datasets: diffs.len(),
                max_relative_difference: diffs.iter().copied().fold(0.0, f64::max),
                median_relative_difference: median(&diffs),
                a_not_worse: a_nw,
                b_not_worse: b_nw,
            });
        }
    }
    let lambda_source = match cfg.lambda {
        LambdaChoice::Fixed(l) => format!("fixed {l}"),
        LambdaChoice::Moment => "moment-matching heuristic (not a calibrated empirical-Bayes estimate)".into(),
        LambdaChoice::FractionOfMax(f) => format!("{f} x lambda_max"),
    };
    Aggregate {
        suite: cfg.name.clone(),
        config_hash: cfg.hash(),
        lambda_source,
        algorithms,
        pairwise,
        progress,
    }
}

/// Generates `repetitions` datasets (seed `design.seed + index`), runs every
/// algorithm on each from the shared starting point, and aggregates.
/// Solver failures are recorded per row. `threads = None` uses rayon's
/// default pool.
pub fn run_suite(cfg: &SuiteConfig, threads: Option<usize>) -> Result<SuiteReport> {
    cfg.validate()?;
    let work = || -> Vec<DatasetOutcome> {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|i| run_dataset(cfg, i))
            .collect()
    };
    let outcomes = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| HppError::arg(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let mut rows = Vec::new();
    let mut per_alg: BTreeMap<Algorithm, Vec<Vec<f64>>> = BTreeMap::new();
    for out in outcomes {
        rows.extend(out.rows);
        if out.curves.len() == cfg.algorithms.len() {
            if let Ok(norm) = progress_normalize(&out.curves) {
                for (name, curve) in norm {
                    let alg = Algorithm::parse(&name).expect("algorithm names round-trip");
                    per_alg.entry(alg).or_default().push(curve.w);
                }
            }
        }
    }
    rows.sort_by_key(|r| (r.dataset, cfg.algorithms.iter().position(|a| *a == r.algorithm)));
    let progress = per_alg
        .into_iter()
        .map(|(alg, curves)| (alg, average_curves(curves.iter().map(|c| c.as_slice()))))
        .collect();
    let aggregate = aggregate(cfg, &rows, progress);
    Ok(SuiteReport {
        config: cfg.clone(),
        rows,
        aggregate,
    })
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// CSV of the per-dataset rows; wall time is the last column.
pub fn report_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(
        "dataset,seed,algorithm,lambda,converged,iterations,ridge_solves,inner_steps,coordinate_sweeps,\
         final_objective,kkt_max_violation,relative_mse,relative_prediction_error,numerical_warning,error,wall_time_s\n",
    );
    for r in rows {
        let error = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6}\n",
            r.dataset,
            r.seed,
            r.algorithm,
            fmt_f64(r.lambda),
            r.converged,
            r.iterations,
            r.ridge_solves,
            r.inner_steps,
            r.coordinate_sweeps,
            fmt_f64(r.final_objective),
            opt_num(r.kkt_max_violation),
            fmt_f64(r.relative_mse),
            fmt_f64(r.relative_prediction_error),
            r.numerical_warning,
            error,
            r.wall_time_s
        ));
    }
    out
}

/// Writes `report.csv`, `aggregate.json` and `progress.svg` into
/// `<out_dir>/<name>-<config hash>` and returns that directory.
pub fn write_report(report: &SuiteReport, out_dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = out_dir
        .as_ref()
        .join(format!("{}-{}", report.config.name, report.aggregate.config_hash));
    io::create_dir(&dir)?;
    io::write_text(dir.join("report.csv"), &report_csv(&report.rows))?;
    let json = serde_json::json!({
        "config": report.config,
        "aggregate": report.aggregate,
    });
    io::write_text(
        dir.join("aggregate.json"),
        &serde_json::to_string_pretty(&json).expect("aggregate serializes"),
    )?;
    let series: Vec<(String, Vec<f64>)> = report
        .aggregate
        .progress
        .iter()
        .map(|(a, w)| (a.name().to_string(), w.clone()))
        .collect();
    io::write_text(
        dir.join("progress.svg"),
        &progress_svg(&format!("{}: mean progress", report.config.name), &series),
    )?;
    Ok(dir)
}
