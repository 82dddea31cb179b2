mod common;

use common::*;
use hpp_core::linear::{self, default_start, ConvergenceConfig, LqaConfig};
use hpp_core::model::{kkt_check_with_zero_tol, objective_beta, objective_factors};
use hpp_core::{FactorState, PenaltySpec, RegressionProblem};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

fn problem_strategy() -> impl Strategy<Value = (RegressionProblem, f64)> {
    (any::<u64>(), 8usize..20, 1usize..6, 0.05f64..5.0).prop_map(|(seed, n, p, lambda)| {
        let mut r = rng(seed);
        (random_regression(&mut r, n, p), lambda)
    })
}

fn nondecreasing_steps(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]) / w[0].abs().max(1.0)).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hpp_factor_objective_never_increases((problem, lambda) in problem_strategy(), k in prop::sample::select(vec![2usize, 4])) {
        let spec = PenaltySpec::new(k, lambda).unwrap();
        let start = default_start(&problem, lambda).unwrap();
        let t = linear::solve_hpp(&problem, &spec, FactorState::initial(start.view(), k).unwrap(), &ConvergenceConfig::default()).unwrap();
        let g = t.factor_objective_per_iteration.clone().unwrap();
        prop_assert!(nondecreasing_steps(&g) < 1e-12);
    }

    #[test]
    fn ccd_objective_never_increases((problem, lambda) in problem_strategy()) {
        let start = default_start(&problem, lambda).unwrap();
        let t = linear::solve_ccd(&problem, lambda, None, start, &ConvergenceConfig::default()).unwrap();
        let mut f = vec![t.initial_objective];
        f.extend(&t.objective_per_iteration);
        prop_assert!(nondecreasing_steps(&f) < 1e-12);
    }

    #[test]
    fn balanced_split_has_equal_objectives((problem, lambda) in problem_strategy(), k in prop::sample::select(vec![2usize, 4, 6])) {
        let spec = PenaltySpec::new(k, lambda).unwrap();
        let beta = problem.l().mapv(|v| 0.1 * v);
        let state = FactorState::split(beta.view(), k).unwrap();
        let f = objective_beta(&problem, &spec, beta.view()).unwrap();
        let g = objective_factors(&problem, &spec, &state).unwrap();
        prop_assert!((f - g).abs() <= 1e-10 * f.abs().max(1.0));
        for (a, b) in state.beta().iter().zip(&beta) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn factor_objective_bounds_coefficient_objective((problem, lambda) in problem_strategy(), seed in any::<u64>()) {
        // g(u, v) >= f(u ∘ v) for any factors, with equality when balanced.
        let spec = PenaltySpec::lasso(lambda).unwrap();
        let mut r = rng(seed);
        let u = normal_vector(&mut r, problem.p());
        let v = normal_vector(&mut r, problem.p());
        let state = FactorState::new(vec![u, v]).unwrap();
        let f = objective_beta(&problem, &spec, state.beta().view()).unwrap();
        let g = objective_factors(&problem, &spec, &state).unwrap();
        prop_assert!(g >= f - 1e-10 * f.abs().max(1.0));
    }

    #[test]
    fn converged_hpp_factors_are_balanced((problem, lambda) in problem_strategy(), k in prop::sample::select(vec![2usize, 4])) {
        let spec = PenaltySpec::new(k, lambda).unwrap();
        let start = default_start(&problem, lambda).unwrap();
        let conv = ConvergenceConfig::new(1e-26, 10_000_000).unwrap();
        let t = linear::solve_hpp(&problem, &spec, FactorState::initial(start.view(), k).unwrap(), &conv).unwrap();
        prop_assert!(t.converged);
        let state = t.final_factors.unwrap();
        for j in 0..problem.p() {
            let mags: Vec<f64> = state.factors().iter().map(|u| u[j].abs()).collect();
            let hi = mags.iter().cloned().fold(f64::MIN, f64::max);
            let lo = mags.iter().cloned().fold(f64::MAX, f64::min);
            prop_assert!(hi - lo < 1e-5, "coordinate {j}: {mags:?}");
        }
    }

    #[test]
    fn solvers_commute_with_column_permutation((problem, lambda) in problem_strategy(), seed in any::<u64>()) {
        let p = problem.p();
        let mut order: Vec<usize> = (0..p).collect();
        let mut r = rng(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut r);
        let x = problem.x().unwrap();
        let xp = Array2::from_shape_fn(x.dim(), |(i, j)| x[[i, order[j]]]);
        let permuted = RegressionProblem::from_data(xp, problem.y().unwrap().clone()).unwrap();
        let spec = PenaltySpec::lasso(lambda).unwrap();
        let conv = ConvergenceConfig::new(1e-20, 1_000_000).unwrap();
        let solve = |pr: &RegressionProblem| {
            let start = default_start(pr, lambda).unwrap();
            linear::solve_hpp(pr, &spec, FactorState::initial(start.view(), 2).unwrap(), &conv).unwrap().final_beta
        };
        let a = solve(&problem);
        let b = solve(&permuted);
        for j in 0..p {
            prop_assert!((a[order[j]] - b[j]).abs() < 1e-7);
        }
    }

    #[test]
    fn converged_lasso_solutions_satisfy_kkt((problem, lambda) in problem_strategy()) {
        let conv = ConvergenceConfig::new(1e-20, 1_000_000).unwrap();
        let start = default_start(&problem, lambda).unwrap();
        let spec = PenaltySpec::lasso(lambda).unwrap();
        let traces = [
            linear::solve_ccd(&problem, lambda, None, start.clone(), &conv).unwrap(),
            linear::solve_hpp(&problem, &spec, FactorState::initial(start.view(), 2).unwrap(), &conv).unwrap(),
            linear::solve_lqa(&problem, &spec, start.clone(), &LqaConfig::default(), &conv).unwrap(),
        ];
        let zero_tol = hpp_core::model::kkt_zero_tolerance(&problem, conv.delta, 1e-4);
        for t in traces {
            prop_assert!(t.converged);
            let report = kkt_check_with_zero_tol(&problem, lambda, t.final_beta.view(), 1e-4, zero_tol).unwrap();
            prop_assert!(report.is_optimal, "{} violation {:e}", t.algorithm, report.max_violation);
        }
    }

    #[test]
    fn ridge_start_is_stationary((problem, lambda) in problem_strategy()) {
        let start = default_start(&problem, lambda).unwrap();
        let ridge = if problem.n() > problem.p() { 0.0 } else { lambda / 2.0 };
        let grad: Array1<f64> = problem.q().dot(&start) - problem.l() + start.mapv(|b| ridge * b);
        prop_assert!(grad.iter().all(|g| g.abs() < 1e-8 * problem.l().iter().fold(1.0f64, |m, v| m.max(v.abs()))));
    }
}
