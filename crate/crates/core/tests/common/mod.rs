//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use hpp_core::glm::{factor_gradient_hessian, factor_objective, GlmFamily, GlmProblem};
use hpp_core::model::objective_beta;
use hpp_core::{PenaltySpec, RegressionProblem};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, p), || rng.sample::<f64, _>(StandardNormal))
}

pub fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> Array1<f64> {
    Array1::from_shape_simple_fn(n, || rng.sample::<f64, _>(StandardNormal))
}

/// Gaussian regression data `y = Xβ + e` with roughly half of `β` zero.
pub fn random_regression(rng: &mut ChaCha8Rng, n: usize, p: usize) -> RegressionProblem {
    let x = normal_matrix(rng, n, p);
    let beta: Array1<f64> = (0..p)
        .map(|_| if rng.random::<bool>() { rng.sample::<f64, _>(StandardNormal) } else { 0.0 })
        .collect();
    let y = x.dot(&beta) + normal_vector(rng, n);
    RegressionProblem::from_data(x, y).unwrap()
}

/// Golden-section minimum of a unimodal function on `[a, b]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    f((a + b) / 2.0).min(fc).min(fd)
}

/// `inf_{v} ||β/v||² + ||v||²` by per-coordinate numerical minimization over
/// `t = ln v`, where each term `β²e^{-2t} + e^{2t}` is convex in `t`.
pub fn numeric_inner_min(beta: &Array1<f64>) -> f64 {
    beta.iter()
        .map(|&b| {
            if b == 0.0 {
                // β_j = 0: the infimum 0 is approached as v_j → 0.
                return 0.0;
            }
            let f = |t: f64| b * b * (-2.0 * t).exp() + (2.0 * t).exp();
            let centre = 0.5 * b.abs().ln();
            golden_min(f, centre - 20.0, centre + 20.0, 200)
        })
        .sum()
}

/// Exhaustive minimization of `f(β)` for `p <= 2`: a grid over a box that
/// must contain every minimizer, followed by successive local grid
/// refinements (10× finer each round, down to step 1e-7) around the best
/// coarse local minima. Grid points always include the axes.
pub fn brute_force_min(problem: &RegressionProblem, spec: &PenaltySpec) -> (Array1<f64>, f64) {
    let p = problem.p();
    assert!(p == 1 || p == 2, "brute force handles p <= 2");
    let f = |b: &[f64]| objective_beta(problem, spec, Array1::from(b.to_vec()).view()).unwrap();
    // f(β) <= f(0) = 0 forces λ_min ||β||² <= 2 ||l|| ||β||.
    let q = problem.q();
    let lmin = if p == 1 {
        q[[0, 0]]
    } else {
        let (a, b, d) = (q[[0, 0]], q[[0, 1]], q[[1, 1]]);
        0.5 * (a + d) - (0.25 * (a - d).powi(2) + b * b).sqrt()
    };
    let lnorm = problem.l().dot(problem.l()).sqrt();
    let radius = (2.0 * lnorm / lmin.max(1e-12)).max(1e-6) * 1.01;
    let m: i64 = if p == 1 { 20_000 } else { 400 };
    let h0 = radius / m as f64;

    // Coarse grid; keep its discrete local minima.
    let mut coarse: Vec<(f64, Vec<f64>)> = Vec::new();
    if p == 1 {
        let vals: Vec<f64> = (-m..=m).map(|i| f(&[i as f64 * h0])).collect();
        for (k, &v) in vals.iter().enumerate() {
            let left = if k > 0 { vals[k - 1] } else { f64::INFINITY };
            let right = vals.get(k + 1).copied().unwrap_or(f64::INFINITY);
            if v <= left && v <= right {
                coarse.push((v, vec![(k as i64 - m) as f64 * h0]));
            }
        }
    } else {
        let side = (2 * m + 1) as usize;
        let mut vals = vec![0.0; side * side];
        for i in 0..side {
            for j in 0..side {
                let b = [(i as i64 - m) as f64 * h0, (j as i64 - m) as f64 * h0];
                vals[i * side + j] = f(&b);
            }
        }
        for i in 0..side {
            for j in 0..side {
                let v = vals[i * side + j];
                let mut is_min = true;
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        let (a, b) = (i as i64 + di, j as i64 + dj);
                        if (di, dj) != (0, 0) && a >= 0 && b >= 0 && (a as usize) < side && (b as usize) < side {
                            is_min &= v <= vals[a as usize * side + b as usize];
                        }
                    }
                }
                if is_min {
                    coarse.push((v, vec![(i as i64 - m) as f64 * h0, (j as i64 - m) as f64 * h0]));
                }
            }
        }
    }
    coarse.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    coarse.truncate(8);

    let mut best = (f64::INFINITY, vec![0.0; p]);
    for (v0, c0) in coarse {
        let (c, fc) = refine(&f, c0, v0, h0);
        if fc < best.0 {
            best = (fc, c);
        }
    }
    (Array1::from(best.1), best.0)
}

/// Successive 41-point-per-axis grids, each 10× finer, centred on the best
/// point so far, down to step 1e-7.
fn refine(f: &impl Fn(&[f64]) -> f64, mut centre: Vec<f64>, mut fc: f64, mut h: f64) -> (Vec<f64>, f64) {
    let p = centre.len();
    while h > 1e-7 {
        let h_new = h / 10.0;
        let offsets: Vec<f64> = (-20..=20).map(|i| i as f64 * h_new).collect();
        let candidates: Vec<Vec<f64>> = if p == 1 {
            offsets.iter().map(|o| vec![centre[0] + o]).collect()
        } else {
            offsets
                .iter()
                .flat_map(|a| offsets.iter().map(move |b| (*a, *b)))
                .map(|(a, b)| vec![centre[0] + a, centre[1] + b])
                .collect()
        };
        for mut c in candidates {
            // Snap to the axes so kinks at zero stay on the grid.
            for x in c.iter_mut() {
                if x.abs() < 0.5 * h_new {
                    *x = 0.0;
                }
            }
            let v = f(&c);
            if v < fc {
                fc = v;
                centre = c;
            }
        }
        h = h_new;
    }
    (centre, fc)
}

/// Grid minimum of `f(β)` within `radius` (sup norm) of `centre`, `p <= 2`.
pub fn local_grid_min(problem: &RegressionProblem, spec: &PenaltySpec, centre: &Array1<f64>, radius: f64) -> f64 {
    let f = |b: &[f64]| objective_beta(problem, spec, Array1::from(b.to_vec()).view()).unwrap();
    let c = centre.to_vec();
    let fc = f(&c);
    refine(&f, c, fc, radius / 2.0).1
}

/// Largest relative error between analytic and central-difference
/// derivatives of the GLM factor objective at `u`.
pub fn glm_derivative_errors(problem: &GlmProblem, v: &Array1<f64>, u: &Array1<f64>, ridge: f64) -> (f64, f64) {
    let p = u.len();
    let (d, h) = factor_gradient_hessian(problem, v.view(), u.view(), ridge).unwrap();
    let step = 1e-5;
    let mut d_fd = Array1::zeros(p);
    let mut h_fd = Array2::zeros((p, p));
    for j in 0..p {
        let mut up = u.clone();
        let mut dn = u.clone();
        up[j] += step;
        dn[j] -= step;
        let fp = factor_objective(problem, v.view(), up.view(), ridge).unwrap();
        let fm = factor_objective(problem, v.view(), dn.view(), ridge).unwrap();
        d_fd[j] = (fp - fm) / (2.0 * step);
        let (gp, _) = factor_gradient_hessian(problem, v.view(), up.view(), ridge).unwrap();
        let (gm, _) = factor_gradient_hessian(problem, v.view(), dn.view(), ridge).unwrap();
        for i in 0..p {
            h_fd[[i, j]] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale.max(1.0);
    let dscale = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let hscale = h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let derr = d.iter().zip(&d_fd).map(|(a, b)| rel(*a, *b, dscale)).fold(0.0, f64::max);
    let herr = h.iter().zip(&h_fd).map(|(a, b)| rel(*a, *b, hscale)).fold(0.0, f64::max);
    (derr, herr)
}

/// Small random GLM instance with moderate linear predictors.
pub fn random_glm(rng: &mut ChaCha8Rng, n: usize, p: usize, family: GlmFamily) -> GlmProblem {
    let x = normal_matrix(rng, n, p).mapv(|v| 0.5 * v);
    let beta = normal_vector(rng, p).mapv(|v| 0.5 * v);
    let eta = x.dot(&beta);
    let y: Array1<f64> = eta
        .iter()
        .map(|&e| match family {
            GlmFamily::Gaussian => e + rng.sample::<f64, _>(StandardNormal),
            GlmFamily::Logistic => f64::from(rng.random::<f64>() < family.mean(e)),
            GlmFamily::Poisson => {
                // Inversion sampling keeps the oracle dependency-free.
                let mu = family.mean(e);
                let (mut k, mut prob, mut cdf) = (0.0, (-mu).exp(), (-mu).exp());
                let target: f64 = rng.random();
                while cdf < target && k < 1000.0 {
                    k += 1.0;
                    prob *= mu / k;
                    cdf += prob;
                }
                k
            }
        })
        .collect();
    GlmProblem::new(x, y, family).unwrap()
}

/// Relative distance `|a - b| / max(|a|, |b|, 1)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
