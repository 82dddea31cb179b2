//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Exits 0 after printing the report; set `ACCEPTANCE_STRICT=1` to exit 1 when
//! any criterion fails.

mod common;

use std::sync::Arc;
use std::time::Instant;

use common::*;
use hpp_core::bench::{run_suite, Algorithm, SuiteConfig, SuiteReport};
use hpp_core::glm::{self, GlmFamily, GlmProblem, NewtonConfig};
use hpp_core::linear::{self, default_start, ConvergenceConfig, LqaConfig};
use hpp_core::model::{inner_min_closed_form, objective_beta, objective_factors};
use hpp_core::simgen::moment_lambda_q;
use hpp_core::structured::{
    solve_shpp, solve_shpp_dense, synthetic_grid_experiment, CarSpec, GridExperimentConfig, GridGraph,
    SignalProblem,
};
use hpp_core::{FactorState, PenaltySpec, RegressionProblem, SolverTrace};
use ndarray::{Array1, Array2};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Traces whose objective must never increase, gathered across criteria.
#[derive(Default)]
struct DescentLog {
    runs: Vec<(String, Vec<f64>)>,
}

impl DescentLog {
    fn push(&mut self, trace: &SolverTrace) {
        let values = match trace.algorithm.as_str() {
            "hpp" | "shpp" | "shpp-dense" => trace
                .factor_objective_per_iteration
                .clone()
                .unwrap_or_else(|| trace.objective_per_iteration.clone()),
            "ccd" => trace.objective_per_iteration.clone(),
            _ => return,
        };
        let mut all = Vec::with_capacity(values.len() + 1);
        if trace.algorithm == "ccd" {
            all.push(trace.initial_objective);
        }
        all.extend(values);
        self.runs.push((trace.algorithm.clone(), all));
    }
}

fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn suite(text: &str) -> SuiteReport {
    let cfg = SuiteConfig::from_json(text).expect("bundled config is valid");
    run_suite(&cfg, None).expect("suite runs")
}

fn median_iterations(report: &SuiteReport, alg: Algorithm) -> f64 {
    report.aggregate.algorithms[&alg].median_iterations
}

fn all_ok(report: &SuiteReport) -> (usize, usize) {
    let ok = report.rows.iter().filter(|r| r.ok() && r.converged).count();
    (ok, report.rows.len())
}

fn max_pairwise(report: &SuiteReport) -> f64 {
    report
        .aggregate
        .pairwise
        .iter()
        .map(|p| p.max_relative_difference)
        .fold(0.0, f64::max)
}

fn mean_rel_mse(report: &SuiteReport, alg: Algorithm) -> f64 {
    report.aggregate.algorithms[&alg].mean_relative_mse
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = r.random_range(1..=10);
        let scale = 10f64.powf(r.random_range(-3.0..1.0));
        let beta: Array1<f64> = (0..p)
            .map(|_| if r.random::<f64>() < 0.2 { 0.0 } else { scale * r.sample::<f64, _>(rand_distr::StandardNormal) })
            .collect();
        let analytic = inner_min_closed_form(beta.view());
        let l1 = 2.0 * beta.iter().map(|b| b.abs()).sum::<f64>();
        let numeric = numeric_inner_min(&beta);
        worst = worst.max((analytic.value - numeric).abs()).max((analytic.value - l1).abs());
    }
    outcome(worst < 1e-6, format!("200 random β, max |2‖β‖₁ − numeric inner min| = {worst:.2e} (tol 1e-6)"))
}

fn criterion_2(log: &mut DescentLog) -> Outcome {
    // Factor balance on coordinates heading to zero only holds in the limit
    // (the factors shrink geometrically at a fixed ratio), so the check runs
    // at a tight tolerance; the spread at the default tolerance is reported.
    let mut r = rng(22);
    let tight = ConvergenceConfig::new(1e-26, 10_000_000).unwrap();
    let loose = ConvergenceConfig::default();
    let (mut runs, mut converged) = (0, 0);
    let (mut worst_bal, mut worst_gap, mut loose_bal) = (0.0f64, 0.0f64, 0.0f64);
    let spread = |state: &FactorState| -> f64 {
        (0..state.p())
            .map(|j| {
                let mags: Vec<f64> = state.factors().iter().map(|u| u[j].abs()).collect();
                mags.iter().cloned().fold(f64::MIN, f64::max) - mags.iter().cloned().fold(f64::MAX, f64::min)
            })
            .fold(0.0, f64::max)
    };
    for rep in 0..40 {
        let problem = random_regression(&mut r, 60, 20);
        for k in [2usize, 4] {
            let lambda = moment_lambda_q(&problem, 2.0 / k as f64).unwrap() * if rep % 2 == 0 { 1.0 } else { 0.3 };
            let spec = PenaltySpec::new(k, lambda).unwrap();
            let start = default_start(&problem, lambda).unwrap();
            let init = FactorState::initial(start.view(), k).unwrap();
            let coarse = linear::solve_hpp(&problem, &spec, init.clone(), &loose).unwrap();
            if let Some(state) = coarse.final_factors.as_ref() {
                loose_bal = loose_bal.max(spread(state));
            }
            let trace = linear::solve_hpp(&problem, &spec, init, &tight).unwrap();
            log.push(&trace);
            runs += 1;
            if !trace.converged {
                continue;
            }
            converged += 1;
            let state = trace.final_factors.as_ref().unwrap();
            worst_bal = worst_bal.max(spread(state));
            let f = objective_beta(&problem, &spec, trace.final_beta.view()).unwrap();
            let g = objective_factors(&problem, &spec, state).unwrap();
            worst_gap = worst_gap.max((g - f).abs() / f.abs().max(1.0));
        }
    }
    outcome(
        converged == runs && worst_bal <= 1e-5 && worst_gap <= 1e-10,
        format!(
            "{converged}/{runs} HPP runs converged (K=2,4; δ=1e-26); max factor-magnitude spread {worst_bal:.2e} (tol 1e-5; {loose_bal:.2e} at δ=1e-6), max |g−f|/max(|f|,1) {worst_gap:.2e} (tol 1e-10)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let report = suite(include_str!("../../../configs/lasso_kkt.json"));
    let mut worst = 0.0f64;
    let (mut checked, mut failing) = (0, 0);
    for row in report.rows.iter().filter(|r| r.ok() && r.converged) {
        let v = row.kkt_max_violation.unwrap_or(f64::INFINITY);
        checked += 1;
        failing += usize::from(v > 1e-4);
        worst = worst.max(v);
    }
    let total = report.rows.len();
    outcome(
        checked == total && failing == 0,
        format!(
            "{checked}/{total} converged lasso runs (hpp, lqa, ccd, hpcd, lqcd; δ={:e}); {failing} violate tol 1e-4; max violation {worst:.2e}",
            report.config.conv.delta
        ),
    )
}

fn criterion_4(log: &mut DescentLog) -> Outcome {
    let mut r = rng(44);
    let conv = ConvergenceConfig::new(1e-20, 1_000_000).unwrap();
    let lqa = LqaConfig::default();
    let inner = ConvergenceConfig::new(1e-20, 100_000).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for q_case in [1.0, 0.5] {
        let (mut worst, mut worst_local, mut runs) = (0.0f64, 0.0f64, 0);
        let mut missed = std::collections::BTreeSet::new();
        for rep in 0..50 {
            let p = 1 + rep % 2;
            let n = r.random_range(3..=8);
            let problem = random_regression(&mut r, n, p);
            let lambda = r.random_range(0.2..4.0);
            let spec = PenaltySpec::from_q(q_case, lambda).unwrap();
            let (_, f_oracle) = brute_force_min(&problem, &spec);
            let start = default_start(&problem, lambda).unwrap();
            let mut traces = vec![
                linear::solve_hpp(&problem, &spec, FactorState::initial(start.view(), spec.factors()).unwrap(), &conv),
                linear::solve_lqa(&problem, &spec, start.clone(), &lqa, &conv),
            ];
            if q_case == 1.0 {
                traces.push(linear::solve_ccd(&problem, lambda, None, start.clone(), &conv));
                traces.push(linear::solve_hpcd(&problem, lambda, start.clone(), &conv));
                traces.push(linear::solve_lqcd(&problem, lambda, start.clone(), &lqa, &conv));
            } else {
                traces.push(linear::solve_lla(&problem, &spec, start.clone(), &conv, &inner));
            }
            for trace in traces {
                let trace = trace.unwrap();
                log.push(&trace);
                runs += 1;
                let f = objective_beta(&problem, &spec, trace.final_beta.view()).unwrap();
                let err = (f - f_oracle).abs() / f_oracle.abs().max(1.0);
                worst = worst.max(err);
                if err > 1e-6 {
                    missed.insert(rep);
                }
                // Is the end point at least a local minimum?
                let f_local = local_grid_min(&problem, &spec, &trace.final_beta, 0.05);
                worst_local = worst_local.max((f - f_local) / f_local.abs().max(1.0));
            }
        }
        pass &= worst <= 1e-6;
        parts.push(format!(
            "q={q_case}: {runs} runs, max gap to global grid oracle {worst:.2e}, {} of 50 problems missed, max gap to local grid oracle {worst_local:.2e}",
            missed.len()
        ));
    }
    outcome(pass, format!("{} (tol 1e-6)", parts.join("; ")))
}

fn criterion_5(log: &DescentLog) -> Outcome {
    let mut worst = 0.0f64;
    let mut counts = std::collections::BTreeMap::new();
    for (alg, values) in &log.runs {
        worst = worst.max(SolverTrace::max_relative_increase(values));
        *counts.entry(alg.clone()).or_insert(0usize) += 1;
    }
    let summary: Vec<String> = counts.iter().map(|(a, c)| format!("{a}:{c}")).collect();
    outcome(
        worst <= 1e-10,
        format!("{} traces ({}); max relative increase {worst:.2e} (tol 1e-10)", log.runs.len(), summary.join(" ")),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(66);
    let mut worst = 0.0f64;
    for family in [GlmFamily::Logistic, GlmFamily::Poisson] {
        for _ in 0..20 {
            let problem = random_glm(&mut r, 20, 3, family);
            let v = normal_vector(&mut r, 3);
            let u = normal_vector(&mut r, 3).mapv(|x| 0.5 * x);
            let ridge = r.random_range(0.1..2.0);
            let (d, h) = glm_derivative_errors(&problem, &v, &u, ridge);
            worst = worst.max(d).max(h);
        }
    }
    outcome(worst < 1e-5, format!("40 instances (20 logistic, 20 poisson; n=20, p=3); max relative error {worst:.2e} (tol 1e-5)"))
}

fn criterion_7(log: &mut DescentLog) -> Outcome {
    let mut r = rng(77);
    let conv = ConvergenceConfig::default();
    let newton = NewtonConfig::default();
    let lqa = LqaConfig::default();
    let inner = ConvergenceConfig::new(1e-10, 10_000).unwrap();
    let mut glm_worst = 0.0f64;
    for _ in 0..10 {
        let lin = random_regression(&mut r, 40, 8);
        let x = lin.x().unwrap().clone();
        let y = lin.y().unwrap().clone();
        let gp = GlmProblem::new(x, y, GlmFamily::Gaussian).unwrap();
        for k in [2usize, 4] {
            let lambda = moment_lambda_q(&lin, 2.0 / k as f64).unwrap();
            let spec = PenaltySpec::new(k, lambda).unwrap();
            let start = default_start(&lin, lambda).unwrap();
            let init = FactorState::initial(start.view(), k).unwrap();
            let a = linear::solve_hpp(&lin, &spec, init.clone(), &conv).unwrap();
            let b = glm::solve_hpp_glm(&gp, &spec, init, &conv, &newton).unwrap();
            glm_worst = glm_worst.max(max_abs_diff(&a.final_beta, &b.final_beta));
            let a = linear::solve_lqa(&lin, &spec, start.clone(), &lqa, &conv).unwrap();
            let b = glm::solve_lqa_glm(&gp, &spec, start.clone(), &lqa, &conv, &newton).unwrap();
            glm_worst = glm_worst.max(max_abs_diff(&a.final_beta, &b.final_beta));
            if k > 2 {
                let a = linear::solve_lla(&lin, &spec, start.clone(), &conv, &inner).unwrap();
                let b = glm::solve_lla_glm(&gp, &spec, start.clone(), &conv, &inner, &newton).unwrap();
                glm_worst = glm_worst.max(max_abs_diff(&a.final_beta, &b.final_beta));
            }
        }
    }

    // Independent sites: SHPP with ρ = 0 is the per-site lasso.
    let mut shpp_worst = 0.0f64;
    for rep in 0..5 {
        let lambda = r.random_range(0.5..4.0);
        let graph = Arc::new(GridGraph::full(8, 6, 1 + rep % 2).unwrap());
        let z = normal_vector(&mut r, graph.len()).mapv(|v| 2.0 * v);
        let problem = SignalProblem::new(z.clone(), graph, CarSpec::new(0.0, 2.0 / lambda).unwrap()).unwrap();
        let trace = solve_shpp(&problem, None, 1e-24, 1_000_000).unwrap();
        log.push(&trace);
        let lasso = z.mapv(|v| v.signum() * (v.abs() - lambda / 2.0).max(0.0));
        shpp_worst = shpp_worst.max(max_abs_diff(&trace.final_beta, &lasso));
        // Same problem through the dense solver with X = I.
        let p = z.len();
        let ident = RegressionProblem::from_data(Array2::eye(p), z.clone()).unwrap();
        let sigma = Array2::eye(p) * (2.0 / lambda);
        let init = FactorState::initial(z.view(), 2).unwrap();
        let dense = solve_shpp_dense(&ident, &sigma, &sigma, init, &ConvergenceConfig::new(1e-24, 100_000).unwrap()).unwrap();
        log.push(&dense);
        shpp_worst = shpp_worst.max(max_abs_diff(&dense.final_beta, &lasso));
    }

    // Dense SHPP with Σ = (2/λ)I follows HPP iterate for iterate.
    let mut iter_worst = 0.0f64;
    for _ in 0..5 {
        let problem = random_regression(&mut r, 30, 10);
        let lambda = r.random_range(1.0..20.0);
        let spec = PenaltySpec::lasso(lambda).unwrap();
        let start = default_start(&problem, lambda).unwrap();
        let init = FactorState::initial(start.view(), 2).unwrap();
        let rec = ConvergenceConfig::fixed(40).recording();
        let a = linear::solve_hpp(&problem, &spec, init.clone(), &rec).unwrap();
        let sigma = Array2::eye(10) * (2.0 / lambda);
        let b = solve_shpp_dense(&problem, &sigma, &sigma, init, &rec).unwrap();
        log.push(&a);
        log.push(&b);
        assert_eq!(a.iterates.len(), b.iterates.len());
        for (x, y) in a.iterates.iter().zip(&b.iterates) {
            iter_worst = iter_worst.max(max_abs_diff(x, y));
        }
    }
    outcome(
        glm_worst <= 1e-8 && shpp_worst <= 1e-6 && iter_worst <= 1e-10,
        format!(
            "gaussian GLM vs linear max |Δβ| {glm_worst:.2e} (tol 1e-8); SHPP ρ=0 vs soft-threshold {shpp_worst:.2e} (tol 1e-6); dense SHPP vs HPP iterates {iter_worst:.2e} (tol 1e-10)"
        ),
    )
}

fn criterion_8(lasso: &SuiteReport) -> Outcome {
    let (ok, total) = all_ok(lasso);
    let maxrd = max_pairwise(lasso);
    let targets = [(Algorithm::Hpp, 16.0), (Algorithm::Lqa, 34.0), (Algorithm::Ccd, 29.0)];
    let mut iter_ok = true;
    let mut parts = Vec::new();
    for (alg, target) in targets {
        let m = median_iterations(lasso, alg);
        iter_ok &= (m - target).abs() <= 0.5 * target;
        parts.push(format!("{alg} {m}"));
    }
    let mse: Vec<f64> = targets.iter().map(|(a, _)| mean_rel_mse(lasso, *a)).collect();
    let mse_ok = mse.iter().all(|m| (0.05..=0.15).contains(m));
    outcome(
        ok == total && maxrd < 1e-5 && mse_ok && iter_ok,
        format!(
            "{ok}/{total} converged; max pairwise rel. objective diff {maxrd:.2e} (tol 1e-5); rel. MSE {:.3}/{:.3}/{:.3} (range [0.05, 0.15]); median iterations {} (targets 16/34/29 ±50%)",
            mse[0],
            mse[1],
            mse[2],
            parts.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let t0 = Instant::now();
    let smoke = suite(include_str!("../../../configs/sparse1000_smoke.json"));
    let smoke_s = t0.elapsed().as_secs_f64();
    let smoke_ok = all_ok(&smoke);
    let report = suite(include_str!("../../../configs/sparse1000.json"));
    let (ok, total) = all_ok(&report);
    let maxrd = max_pairwise(&report);
    let (h, l, c) = (
        median_iterations(&report, Algorithm::Hpcd),
        median_iterations(&report, Algorithm::Lqcd),
        median_iterations(&report, Algorithm::Ccd),
    );
    outcome(
        ok == total && maxrd < 1e-5 && h < l && l < c && c / h >= 3.0 && smoke_s < 300.0 && smoke_ok.0 == smoke_ok.1,
        format!(
            "{ok}/{total} converged; max pairwise rel. objective diff {maxrd:.2e} (tol 1e-5); median iterations HPCD {h} < LQCD {l} < CCD {c}, CCD/HPCD = {:.2} (≥ 3); 20-dataset smoke run {}/{} converged in {smoke_s:.0} s (< 300 s)",
            c / h,
            smoke_ok.0,
            smoke_ok.1,
        ),
    )
}

fn criterion_10(lasso: &SuiteReport) -> Outcome {
    let corr = suite(include_str!("../../../configs/correlated.json"));
    let (ok, total) = all_ok(&corr);
    let ratio = |alg| median_iterations(&corr, alg) / median_iterations(lasso, alg);
    let (rc, rh) = (ratio(Algorithm::Ccd), ratio(Algorithm::Hpp));
    outcome(
        rc >= 3.0 && rh <= 3.0,
        format!(
            "{ok}/{total} converged; median iterations HPP/LQA/CCD {}/{}/{} vs iid {}/{}/{}; CCD ×{rc:.2} (≥ 3), HPP ×{rh:.2} (≤ 3)",
            median_iterations(&corr, Algorithm::Hpp),
            median_iterations(&corr, Algorithm::Lqa),
            median_iterations(&corr, Algorithm::Ccd),
            median_iterations(lasso, Algorithm::Hpp),
            median_iterations(lasso, Algorithm::Lqa),
            median_iterations(lasso, Algorithm::Ccd),
        ),
    )
}

fn criterion_11() -> Outcome {
    let report = suite(include_str!("../../../configs/lhalf.json"));
    let (ok, total) = all_ok(&report);
    let maxrd = max_pairwise(&report);
    let algs = [Algorithm::Hpp, Algorithm::Lqa, Algorithm::Lla];
    let mse: Vec<f64> = algs.iter().map(|a| mean_rel_mse(&report, *a)).collect();
    let within = {
        let n = report.config.repetitions;
        (0..n)
            .filter(|&d| {
                let f: Vec<f64> = report
                    .rows
                    .iter()
                    .filter(|r| r.dataset == d && r.ok())
                    .map(|r| r.final_objective)
                    .collect();
                f.iter().all(|a| f.iter().all(|b| (a - b).abs() / a.abs().max(b.abs()) < 0.004))
            })
            .count()
    };
    outcome(
        ok == total && maxrd < 0.004 && mse.iter().all(|m| (0.05..=0.15).contains(m)),
        format!(
            "{ok}/{total} converged; max pairwise rel. objective diff {maxrd:.2e} (tol 4e-3), {within}/{} datasets within tol; rel. MSE {:.3}/{:.3}/{:.3} (range [0.05, 0.15]); median iterations HPP/LQA/LLA {}/{}/{}",
            report.config.repetitions,
            mse[0],
            mse[1],
            mse[2],
            median_iterations(&report, Algorithm::Hpp),
            median_iterations(&report, Algorithm::Lqa),
            median_iterations(&report, Algorithm::Lla),
        ),
    )
}

fn criterion_12() -> Outcome {
    let report = suite(include_str!("../../../configs/logistic_lhalf.json"));
    let (ok, total) = all_ok(&report);
    let pair = report.pair(Algorithm::Hpp, Algorithm::Lqa).expect("pair present");
    let algs = [Algorithm::Hpp, Algorithm::Lqa, Algorithm::Lla];
    let mse: Vec<f64> = algs.iter().map(|a| mean_rel_mse(&report, *a)).collect();
    outcome(
        pair.a_not_worse >= 70 && mse.iter().all(|m| (0.5..=1.1).contains(m)),
        format!(
            "{ok}/{total} converged; HPP ≤ LQA on {}/{} datasets (≥ 70); rel. MSE HPP/LQA/LLA {:.3}/{:.3}/{:.3} (range [0.5, 1.1]); median iterations {}/{}/{}",
            pair.a_not_worse,
            pair.datasets,
            mse[0],
            mse[1],
            mse[2],
            median_iterations(&report, Algorithm::Hpp),
            median_iterations(&report, Algorithm::Lqa),
            median_iterations(&report, Algorithm::Lla),
        ),
    )
}

fn criterion_13(log: &mut DescentLog) -> Outcome {
    let cfg: GridExperimentConfig = serde_json::from_str(include_str!("../../../configs/grid20.json")).unwrap();
    let exp = synthetic_grid_experiment(&cfg).unwrap();
    let rep = &exp.report;
    let increases = exp.objective_trace.windows(2).filter(|w| w[1] > w[0]).count();
    log.runs.push(("shpp".into(), exp.objective_trace.clone()));
    outcome(
        rep.converged && rep.sweeps <= 1000 && rep.structured.contiguity >= rep.unstructured.contiguity && increases == 0,
        format!(
            "converged {} in {} sweeps (≤ 1000, rel_tol {:e}); contiguity SHPP {:.3} vs lasso {:.3}; sparsity SHPP {:.3} vs lasso {:.3}; g increases {increases}",
            rep.converged,
            rep.sweeps,
            cfg.rel_tol,
            rep.structured.contiguity,
            rep.unstructured.contiguity,
            rep.structured.sparsity,
            rep.unstructured.sparsity,
        ),
    )
}

fn main() {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let filter: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |i: usize| filter.as_ref().is_none_or(|f| f.contains(&i));
    let mut log = DescentLog::default();
    let mut failures = 0;
    let mut report = |i: usize, o: Outcome, t: Instant| {
        failures += usize::from(!o.pass);
        println!(
            "{} criterion {i:>2}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    };
    let lasso_needed = wanted(8) || wanted(10);
    let t = Instant::now();
    let lasso = lasso_needed.then(|| suite(include_str!("../../../configs/lasso100.json")));
    let t_lasso = t.elapsed();

    let t = Instant::now();
    if wanted(1) {
        report(1, criterion_1(), t);
    }
    let t = Instant::now();
    if wanted(2) || wanted(5) {
        let o = criterion_2(&mut log);
        if wanted(2) {
            report(2, o, t);
        }
    }
    let t = Instant::now();
    if wanted(3) {
        report(3, criterion_3(), t);
    }
    let t = Instant::now();
    if wanted(4) || wanted(5) {
        let o = criterion_4(&mut log);
        if wanted(4) {
            report(4, o, t);
        }
    }
    let t = Instant::now();
    let c7 = (wanted(7) || wanted(5)).then(|| criterion_7(&mut log));
    let t7 = t.elapsed();
    let t = Instant::now();
    let c13 = (wanted(13) || wanted(5)).then(|| criterion_13(&mut log));
    let t13 = t.elapsed();
    let t = Instant::now();
    if wanted(5) {
        report(5, criterion_5(&log), t);
    }
    let t = Instant::now();
    if wanted(6) {
        report(6, criterion_6(), t);
    }
    if let (true, Some(o)) = (wanted(7), c7) {
        report(7, o, Instant::now() - t7);
    }
    if let (true, Some(l)) = (wanted(8), lasso.as_ref()) {
        report(8, criterion_8(l), Instant::now() - t_lasso);
    }
    let t = Instant::now();
    if wanted(9) {
        report(9, criterion_9(), t);
    }
    let t = Instant::now();
    if let (true, Some(l)) = (wanted(10), lasso.as_ref()) {
        report(10, criterion_10(l), t);
    }
    let t = Instant::now();
    if wanted(11) {
        report(11, criterion_11(), t);
    }
    let t = Instant::now();
    if wanted(12) {
        report(12, criterion_12(), t);
    }
    if let (true, Some(o)) = (wanted(13), c13) {
        report(13, o, Instant::now() - t13);
    }
    println!("acceptance: {failures} criteria failed");
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
