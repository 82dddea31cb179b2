use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{HppError, Result};
use crate::linalg::Cholesky;

/// Active sites of a 3-D lattice (`d3 = 1` for 2-D grids) with face
/// adjacency: 6 neighbors in 3-D, 4 in 2-D.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGraph {
    dims: [usize; 3],
    sites: Vec<[usize; 3]>,
    neighbors: Vec<Vec<usize>>,
}

impl GridGraph {
    /// Every lattice point of a `d1 × d2 × d3` grid is active.
    pub fn full(d1: usize, d2: usize, d3: usize) -> Result<Self> {
        let mut sites = Vec::with_capacity(d1 * d2 * d3);
        for i in 0..d1 {
            for j in 0..d2 {
                for k in 0..d3 {
                    sites.push([i, j, k]);
                }
            }
        }
        Self::from_sites([d1, d2, d3], sites)
    }

    /// Builds the graph on a subset of lattice sites. Sites are stored in
    /// raster (lexicographic) order regardless of input order.
    pub fn from_sites(dims: [usize; 3], mut sites: Vec<[usize; 3]>) -> Result<Self> {
        if dims.iter().any(|d| *d == 0) {
            return Err(HppError::arg("grid dimensions must be positive"));
        }
        for s in &sites {
            if (0..3).any(|a| s[a] >= dims[a]) {
                return Err(HppError::arg(format!("site {s:?} outside grid {dims:?}")));
            }
        }
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(HppError::arg("duplicate grid site"));
        }
        let lattice = |s: &[usize; 3]| (s[0] * dims[1] + s[1]) * dims[2] + s[2];
        let mut index = vec![usize::MAX; dims[0] * dims[1] * dims[2]];
        for (n, s) in sites.iter().enumerate() {
            index[lattice(s)] = n;
        }
        let neighbors = sites
            .iter()
            .map(|s| {
                let mut out = Vec::with_capacity(6);
                for axis in 0..3 {
                    for delta in [-1isize, 1] {
                        let c = s[axis] as isize + delta;
                        if c < 0 || c as usize >= dims[axis] {
                            continue;
                        }
                        let mut t = *s;
                        t[axis] = c as usize;
                        let id = index[lattice(&t)];
                        if id != usize::MAX {
                            out.push(id);
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();
        Ok(GridGraph {
            dims,
            sites,
            neighbors,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[[usize; 3]] {
        &self.sites
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn site_index(&self, coord: [usize; 3]) -> Option<usize> {
        self.sites.binary_search(&coord).ok()
    }

    /// `(Gw)_i = Σ_{j~i} w_j / n_i`, zero for isolated sites.
    pub fn neighbor_mean(&self, i: usize, w: ArrayView1<f64>) -> f64 {
        let nb = &self.neighbors[i];
        if nb.is_empty() {
            return 0.0;
        }
        nb.iter().map(|&j| w[j]).sum::<f64>() / nb.len() as f64
    }

    /// `(G^T w)_i = Σ_{j~i} w_j / n_j`.
    pub fn transposed_mean(&self, i: usize, w: ArrayView1<f64>) -> f64 {
        self.neighbors[i]
            .iter()
            .map(|&j| w[j] / self.neighbors[j].len() as f64)
            .sum()
    }

    /// `((G + G^T)/2 · w)_i`.
    pub fn symmetric_mean(&self, i: usize, w: ArrayView1<f64>) -> f64 {
        0.5 * (self.neighbor_mean(i, w) + self.transposed_mean(i, w))
    }

    /// Dense row-normalized weight matrix `G`, `g_ij = 1/n_i` for neighbors.
    pub fn dense_weights(&self) -> Array2<f64> {
        let p = self.len();
        let mut g = Array2::zeros((p, p));
        for i in 0..p {
            let n = self.neighbors[i].len() as f64;
            for &j in &self.neighbors[i] {
                g[[i, j]] = 1.0 / n;
            }
        }
        g
    }

    /// Fraction of `active` sites having at least one active neighbor.
    pub fn contiguity(&self, active: &[bool]) -> f64 {
        let total = active.iter().filter(|a| **a).count();
        if total == 0 {
            return 0.0;
        }
        let linked = (0..self.len())
            .filter(|&i| active[i] && self.neighbors[i].iter().any(|&j| active[j]))
            .count();
        linked as f64 / total as f64
    }
}

/// Conditional autoregression `Σ = τ² (I - ρG)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarSpec {
    pub rho: f64,
    pub tau_sq: f64,
}

impl Default for CarSpec {
    fn default() -> Self {
        CarSpec {
            rho: 0.95,
            tau_sq: 1.0,
        }
    }
}

/// Largest grid on which positive definiteness is verified by factorization.
const PD_CHECK_MAX_SITES: usize = 2000;

impl CarSpec {
    pub fn new(rho: f64, tau_sq: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(HppError::arg(format!("CAR requires |rho| < 1, got {rho}")));
        }
        if !(tau_sq > 0.0) || !tau_sq.is_finite() {
            return Err(HppError::arg(format!("CAR requires finite tau^2 > 0, got {tau_sq}")));
        }
        Ok(CarSpec { rho, tau_sq })
    }

    /// Factorizes `I - ρ(G + G^T)/2` on small graphs; larger graphs are accepted
    /// on the `|ρ| < 1` condition alone.
    pub fn check_positive_definite(&self, graph: &GridGraph) -> Result<()> {
        if graph.len() > PD_CHECK_MAX_SITES {
            return Ok(());
        }
        Cholesky::factor(car_symmetric_precision(graph, self).view()).map(|_| ())
    }
}

/// `Σ^{-1} w = (w - ρ G w)/τ²` without forming `Σ`.
pub fn car_precision_apply(graph: &GridGraph, car: &CarSpec, w: ArrayView1<f64>) -> Array1<f64> {
    assert_eq!(w.len(), graph.len());
    (0..graph.len())
        .map(|i| (w[i] - car.rho * graph.neighbor_mean(i, w)) / car.tau_sq)
        .collect()
}

/// Symmetric part of the CAR precision, `(I - ρ(G + G^T)/2)/τ²`, applied to `w`.
/// It defines the same quadratic form as [`car_precision_apply`].
pub fn car_symmetric_apply(graph: &GridGraph, car: &CarSpec, w: ArrayView1<f64>) -> Array1<f64> {
    assert_eq!(w.len(), graph.len());
    (0..graph.len())
        .map(|i| (w[i] - car.rho * graph.symmetric_mean(i, w)) / car.tau_sq)
        .collect()
}

/// Dense `(I - ρG)/τ²`.
pub fn car_dense_precision(graph: &GridGraph, car: &CarSpec) -> Array2<f64> {
    let mut m = graph.dense_weights() * (-car.rho);
    for i in 0..graph.len() {
        m[[i, i]] += 1.0;
    }
    m / car.tau_sq
}

/// Dense `(I - ρ(G + G^T)/2)/τ²`.
pub fn car_symmetric_precision(graph: &GridGraph, car: &CarSpec) -> Array2<f64> {
    let m = car_dense_precision(graph, car);
    (&m + &m.t()) * 0.5
}

/// Moment-matching plumbing for `(ρ, τ²)`: `τ² + 1` matches the mean square of
/// `z`, `ρ` matches the correlation of `z` across neighboring pairs. This is a
/// convenience default only, not a calibrated empirical-Bayes procedure.
pub fn estimate_car_moments(graph: &GridGraph, z: ArrayView1<f64>) -> Result<CarSpec> {
    if z.len() != graph.len() || z.is_empty() {
        return Err(HppError::dims("score vector does not match the graph"));
    }
    let m2 = z.iter().map(|v| v * v).sum::<f64>() / z.len() as f64;
    let tau_sq = (m2 - 1.0).max(1e-3);
    let mean = z.mean().unwrap_or(0.0);
    let (mut cross, mut sq) = (0.0, 0.0);
    for i in 0..graph.len() {
        for &j in graph.neighbors(i) {
            if j > i {
                let (a, b) = (z[i] - mean, z[j] - mean);
                cross += 2.0 * a * b;
                sq += a * a + b * b;
            }
        }
    }
    let rho = if sq > 0.0 { (cross / sq).clamp(-0.99, 0.99) } else { 0.0 };
    CarSpec::new(rho, tau_sq)
}
