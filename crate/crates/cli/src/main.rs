use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ndarray::Array1;
use serde_json::{json, Value};
use thiserror::Error;

use hpp_core::bench::{self, Algorithm, SolverSettings, SuiteConfig, KKT_TOL};
use hpp_core::glm::{ridge_start, GlmFamily, GlmProblem, NewtonConfig};
use hpp_core::io;
use hpp_core::linear::{default_start, ConvergenceConfig, LqaConfig};
use hpp_core::model::{kkt_check_with_zero_tol, kkt_zero_tolerance, DEFAULT_KKT_TOL};
use hpp_core::simgen::{generate_dataset, moment_lambda_q, write_dataset, DesignKind, SimDesign};
use hpp_core::structured::{
    estimate_car_moments, render_slice_svg, solve_shpp, synthetic_grid_experiment, CarSpec,
    GridExperimentConfig, GridGraph, SignalProblem, SliceStyle, DEFAULT_SHPP_REL_TOL,
};
use hpp_core::{HppError, PenaltySpec, RegressionProblem, SolverTrace};

const OUTPUT_ENV: &str = "HPP_OUTPUT_DIR";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] HppError),
    #[error("solver did not converge")]
    NotConverged,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::NotConverged => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Lq-penalized regression via the Hadamard product parametrization.
#[derive(Debug, Parser)]
#[command(name = "hpp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an Lq-penalized least-squares problem.
    Solve(SolveArgs),
    /// Solve an Lq-penalized generalized linear model.
    GlmSolve(GlmSolveArgs),
    /// Simulate a dataset and write X.csv, y.csv, beta_true.csv.
    Simulate(SimulateArgs),
    /// Run a benchmark suite described by a JSON config.
    Bench(BenchArgs),
    /// Structured (CAR) sparse denoising of grid scores.
    Shpp(ShppArgs),
    /// Check lasso optimality conditions of a coefficient vector.
    Kkt(KktArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Design matrix CSV (n rows, p columns).
    #[arg(short = 'X', long = "design", value_name = "CSV")]
    x: PathBuf,
    /// Response vector CSV (one value per row).
    #[arg(short = 'y', long = "response", value_name = "CSV")]
    y: PathBuf,
}

#[derive(Debug, Args)]
struct PenaltyArgs {
    /// Penalty multiplier, or `auto` for the moment-matching choice (`solve` only, n > p).
    #[arg(long, value_name = "NUM|auto")]
    lambda: String,
    /// Number of Hadamard factors K; the penalty exponent is q = 2/K.
    #[arg(long, visible_alias = "K", value_name = "K")]
    factors: Option<usize>,
    /// Penalty exponent; must equal 2/K for an integer K >= 1.
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Debug, Args)]
struct ConvArgs {
    /// Convergence threshold on max_j (Δβ_j)² Σ_i x_ij².
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    /// Maximum number of outer iterations.
    #[arg(long = "max-iter", default_value_t = 10_000)]
    max_iter: usize,
    /// Perturbation of the quadratic approximation (LQA, LQCD).
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Algorithm: hpp, lqa, ccd, lla, hpcd or lqcd.
    #[arg(long, default_value = "hpp")]
    alg: String,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    conv: ConvArgs,
    /// Directory for beta.csv, trace.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GlmSolveArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Response family: gaussian, poisson or logistic.
    #[arg(long, default_value = "logistic")]
    family: String,
    /// Algorithm: hpp, lqa or lla.
    #[arg(long, default_value = "hpp")]
    alg: String,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    conv: ConvArgs,
    /// Directory for beta.csv, trace.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 150)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Response family: gaussian, poisson or logistic.
    #[arg(long, default_value = "gaussian")]
    family: String,
    /// Design: iid_normal or low_rank_plus_noise.
    #[arg(long, default_value = "iid_normal")]
    design: String,
    /// JSON simulation design; overrides the other design flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $HPP_OUTPUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON suite configuration.
    #[arg(long)]
    config: PathBuf,
    /// Parent of the run directory (default: $HPP_OUTPUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for running datasets in parallel.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ShppArgs {
    /// Score CSV, one value per grid site in raster order (last axis fastest).
    #[arg(long, value_name = "CSV", required_unless_present = "config")]
    z: Option<PathBuf>,
    /// Grid dimensions `d1,d2[,d3]`.
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    dims: Vec<usize>,
    /// JSON synthetic grid experiment; replaces --z and --dims.
    #[arg(long, conflicts_with_all = ["z", "dims"])]
    config: Option<PathBuf>,
    /// Spatial dependence of the CAR prior (estimated from z if omitted).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// CAR variance scale τ² (estimated from z if omitted).
    #[arg(long = "tau-sq")]
    tau_sq: Option<f64>,
    /// Relative change in θ at which sweeps stop.
    #[arg(long = "rel-tol", default_value_t = DEFAULT_SHPP_REL_TOL)]
    rel_tol: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    max_iter: usize,
    /// Output directory (default: $HPP_OUTPUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KktArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Lasso penalty multiplier.
    #[arg(long)]
    lambda: f64,
    /// Coefficient CSV to check.
    #[arg(long, value_name = "CSV")]
    beta: PathBuf,
    /// Largest allowed violation.
    #[arg(long, default_value_t = DEFAULT_KKT_TOL)]
    tol: f64,
    /// Magnitudes at or below this count as zero.
    #[arg(long = "zero-tol", default_value_t = 0.0)]
    zero_tol: f64,
}

fn output_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn penalty_factors(args: &PenaltyArgs) -> CliResult<usize> {
    let from_q = match args.q {
        Some(q) => Some(PenaltySpec::from_q(q, 0.0).map_err(|e| usage(format!("--q: {e}")))?.factors()),
        None => None,
    };
    match (args.factors, from_q) {
        (Some(0), _) => Err(usage("--factors must be at least 1")),
        (Some(k), Some(kq)) if k != kq => Err(usage(format!("--q and --factors disagree (q = 2/{kq}, K = {k})"))),
        (Some(k), _) => Ok(k),
        (None, Some(kq)) => Ok(kq),
        (None, None) => Ok(2),
    }
}

enum LambdaArg {
    Auto,
    Value(f64),
}

fn parse_lambda(s: &str) -> CliResult<LambdaArg> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(LambdaArg::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(LambdaArg::Value(v)),
        _ => Err(usage(format!("--lambda must be a positive number or 'auto', got '{s}'"))),
    }
}

fn conv_config(args: &ConvArgs) -> CliResult<(ConvergenceConfig, LqaConfig)> {
    let conv = ConvergenceConfig::new(args.delta, args.max_iter).map_err(|e| usage(format!("--delta/--max-iter: {e}")))?;
    let lqa = LqaConfig::new(args.epsilon).map_err(|e| usage(format!("--epsilon: {e}")))?;
    Ok((conv, lqa))
}

fn parse_alg(s: &str) -> CliResult<Algorithm> {
    Algorithm::parse(s).map_err(|e| usage(format!("--alg: {e}")))
}

fn write_run(dir: &Path, trace: &SolverTrace, summary: &Value) -> CliResult<()> {
    io::create_dir(dir)?;
    io::write_vector(dir.join("beta.csv"), &trace.final_beta)?;
    io::write_text(dir.join("trace.csv"), &trace.to_csv())?;
    io::write_text(dir.join("summary.json"), &format!("{summary:#}\n"))?;
    Ok(())
}

fn finish(trace: &SolverTrace, summary: Value, out: Option<PathBuf>) -> CliResult<()> {
    if let Some(dir) = out {
        write_run(&dir, trace, &summary)?;
    }
    println!("{summary}");
    if trace.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

fn beta_json(beta: &Array1<f64>) -> Value {
    Value::Array(beta.iter().map(|&b| json!(b)).collect())
}

fn cmd_solve(args: SolveArgs) -> CliResult<()> {
    let alg = parse_alg(&args.alg)?;
    let k = penalty_factors(&args.penalty)?;
    let lambda_arg = parse_lambda(&args.penalty.lambda)?;
    let (conv, lqa) = conv_config(&args.conv)?;
    let x = io::read_matrix(&args.data.x)?;
    let y = io::read_vector(&args.data.y)?;
    let problem = RegressionProblem::from_data(x, y)?;
    let lambda = match lambda_arg {
        LambdaArg::Value(v) => v,
        LambdaArg::Auto => {
            if problem.n() <= problem.p() {
                return Err(usage(format!(
                    "--lambda auto needs n > p (n = {}, p = {})",
                    problem.n(),
                    problem.p()
                )));
            }
            moment_lambda_q(&problem, 2.0 / k as f64)?
        }
    };
    let spec = PenaltySpec::new(k, lambda)?;
    if k != 2 && matches!(alg, Algorithm::Ccd | Algorithm::Hpcd | Algorithm::Lqcd) {
        return Err(usage(format!("--alg {alg} solves the lasso only (K = 2)")));
    }
    if k == 1 && alg == Algorithm::Lla {
        return Err(usage("--alg lla needs q < 1 (K >= 3)"));
    }
    let settings = SolverSettings {
        lqa,
        ..SolverSettings::default()
    };
    let start = default_start(&problem, lambda)?;
    let trace = bench::run_linear(alg, &problem, &spec, &start, &conv, &settings)?;
    let kkt = if k == 2 {
        let zero_tol = kkt_zero_tolerance(&problem, conv.delta, KKT_TOL);
        let report = kkt_check_with_zero_tol(&problem, lambda, trace.final_beta.view(), KKT_TOL, zero_tol)?;
        Some(report.max_violation)
    } else {
        None
    };
    let mut summary = trace.summary_json(kkt);
    summary["lambda"] = json!(lambda);
    summary["factors"] = json!(k);
    summary["objective"] = summary["final_objective"].clone();
    summary["kkt"] = summary["kkt_max_violation"].clone();
    summary["beta"] = beta_json(&trace.final_beta);
    finish(&trace, summary, args.out)
}

fn cmd_glm_solve(args: GlmSolveArgs) -> CliResult<()> {
    let alg = parse_alg(&args.alg)?;
    if !matches!(alg, Algorithm::Hpp | Algorithm::Lqa | Algorithm::Lla) {
        return Err(usage(format!("--alg {alg} is not available for GLMs (use hpp, lqa or lla)")));
    }
    let family: GlmFamily = args.family.parse().map_err(|e: HppError| usage(format!("--family: {e}")))?;
    let k = penalty_factors(&args.penalty)?;
    let lambda = match parse_lambda(&args.penalty.lambda)? {
        LambdaArg::Value(v) => v,
        LambdaArg::Auto => return Err(usage("--lambda auto is only defined for linear models")),
    };
    let (conv, lqa) = conv_config(&args.conv)?;
    let x = io::read_matrix(&args.data.x)?;
    let y = io::read_vector(&args.data.y)?;
    let problem = GlmProblem::new(x, y, family)?;
    let spec = PenaltySpec::new(k, lambda)?;
    let settings = SolverSettings {
        lqa,
        ..SolverSettings::default()
    };
    let start = ridge_start(&problem, lambda / 2.0, &NewtonConfig::default())?;
    let trace = bench::run_glm(alg, &problem, &spec, &start, &conv, &settings)?;
    let mut summary = trace.summary_json(None);
    summary["family"] = json!(family.name());
    summary["lambda"] = json!(lambda);
    summary["factors"] = json!(k);
    summary["objective"] = summary["final_objective"].clone();
    summary["beta"] = beta_json(&trace.final_beta);
    finish(&trace, summary, args.out)
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let design = match &args.config {
        Some(path) => {
            let text = io::read_text(path)?;
            serde_json::from_str::<SimDesign>(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut d = SimDesign::new(args.n, args.p, args.seed);
            d.family = args.family.parse().map_err(|e: HppError| usage(format!("--family: {e}")))?;
            d.design_kind = match args.design.as_str() {
                "iid_normal" => DesignKind::IidNormal,
                "low_rank_plus_noise" => DesignKind::LowRankPlusNoise,
                other => return Err(usage(format!("--design: unknown design '{other}'"))),
            };
            d
        }
    };
    design.validate().map_err(|e| usage(e.to_string()))?;
    let data = generate_dataset(&design)?;
    let dir = output_dir(args.out);
    write_dataset(&dir, &data)?;
    println!("{}", json!({ "out": dir.display().to_string(), "n": design.n, "p": design.p, "seed": design.seed }));
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    if args.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    let text = io::read_text(&args.config)?;
    let cfg = SuiteConfig::from_json(&text).map_err(|e| usage(format!("{}: {e}", args.config.display())))?;
    let report = bench::run_suite(&cfg, args.threads)?;
    let dir = bench::write_report(&report, output_dir(args.out))?;
    let unconverged = report
        .rows
        .iter()
        .filter(|r| r.ok() && !r.converged && !cfg.conv.fixed_iterations)
        .count();
    let failed = report.rows.iter().filter(|r| !r.ok()).count();
    println!(
        "{}",
        json!({
            "run_dir": dir.display().to_string(),
            "config_hash": report.aggregate.config_hash,
            "rows": report.rows.len(),
            "unconverged": unconverged,
            "failed": failed,
        })
    );
    if unconverged > 0 {
        Err(CliError::NotConverged)
    } else {
        Ok(())
    }
}

fn cmd_shpp(args: ShppArgs) -> CliResult<()> {
    let dir = output_dir(args.out);
    io::create_dir(&dir)?;
    if let Some(path) = &args.config {
        let text = io::read_text(path)?;
        let cfg: GridExperimentConfig =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let exp = synthetic_grid_experiment(&cfg)?;
        io::write_vector(dir.join("z.csv"), &exp.z)?;
        io::write_vector(dir.join("theta_true.csv"), &exp.theta_true)?;
        io::write_vector(dir.join("theta.csv"), &exp.theta_hat)?;
        io::write_vector(dir.join("lasso.csv"), &exp.lasso_hat)?;
        let report = serde_json::to_value(&exp.report).map_err(|e| usage(e.to_string()))?;
        io::write_text(dir.join("report.json"), &format!("{report:#}\n"))?;
        for (name, values, style) in [
            ("z.svg", &exp.z, SliceStyle::default_scores()),
            ("theta.svg", &exp.theta_hat, SliceStyle::Estimates),
            ("lasso.svg", &exp.lasso_hat, SliceStyle::Estimates),
        ] {
            io::write_text(dir.join(name), &render_slice_svg(&exp.graph, values, 0, style)?)?;
        }
        println!("{report}");
        return if exp.report.converged {
            Ok(())
        } else {
            Err(CliError::NotConverged)
        };
    }
    let z_path = args.z.as_ref().ok_or_else(|| usage("--z is required without --config"))?;
    let dims = match args.dims.as_slice() {
        [a, b] => [*a, *b, 1],
        [a, b, c] => [*a, *b, *c],
        _ => return Err(usage("--dims takes two or three comma-separated sizes")),
    };
    let z = io::read_vector(z_path)?;
    let graph = Arc::new(GridGraph::full(dims[0], dims[1], dims[2]).map_err(|e| usage(format!("--dims: {e}")))?);
    if z.len() != graph.len() {
        return Err(usage(format!(
            "{} has {} values but the grid has {} sites",
            z_path.display(),
            z.len(),
            graph.len()
        )));
    }
    let car = match (args.rho, args.tau_sq) {
        (Some(rho), Some(tau_sq)) => CarSpec::new(rho, tau_sq).map_err(|e| usage(format!("--rho/--tau-sq: {e}")))?,
        (None, None) => estimate_car_moments(&graph, z.view())?,
        (rho, tau_sq) => {
            let est = estimate_car_moments(&graph, z.view())?;
            CarSpec::new(rho.unwrap_or(est.rho), tau_sq.unwrap_or(est.tau_sq))
                .map_err(|e| usage(format!("--rho/--tau-sq: {e}")))?
        }
    };
    let problem = SignalProblem::new(z, graph.clone(), car)?;
    let trace = solve_shpp(&problem, None, args.rel_tol, args.max_iter)?;
    io::write_vector(dir.join("theta.csv"), &trace.final_beta)?;
    io::write_text(dir.join("trace.csv"), &trace.to_csv())?;
    for k in 0..dims[2] {
        let svg = render_slice_svg(&graph, &trace.final_beta, k, SliceStyle::Estimates)?;
        io::write_text(dir.join(format!("theta_slice{k}.svg")), &svg)?;
    }
    let mut summary = trace.summary_json(None);
    summary["rho"] = json!(car.rho);
    summary["tau_sq"] = json!(car.tau_sq);
    io::write_text(dir.join("summary.json"), &format!("{summary:#}\n"))?;
    println!("{summary}");
    if trace.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

fn cmd_kkt(args: KktArgs) -> CliResult<()> {
    if !(args.lambda > 0.0) {
        return Err(usage("--lambda must be positive"));
    }
    let x = io::read_matrix(&args.data.x)?;
    let y = io::read_vector(&args.data.y)?;
    let beta = io::read_vector(&args.beta)?;
    let problem = RegressionProblem::from_data(x, y)?;
    let report = kkt_check_with_zero_tol(&problem, args.lambda, beta.view(), args.tol, args.zero_tol)?;
    println!(
        "{}",
        json!({
            "is_optimal": report.is_optimal,
            "max_violation": report.max_violation,
            "tol": args.tol,
            "per_coordinate": beta_json(&report.per_coordinate),
        })
    );
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::GlmSolve(a) => cmd_glm_solve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Shpp(a) => cmd_shpp(a),
        Command::Kkt(a) => cmd_kkt(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hpp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
