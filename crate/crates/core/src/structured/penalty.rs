use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1};

use super::graph::{car_symmetric_apply, car_symmetric_precision, CarSpec, GridGraph};
use crate::error::{HppError, Result};
use crate::linalg::Cholesky;

/// Precision matrix `Σ^{-1}` of one Hadamard factor's Gaussian penalty.
#[derive(Debug, Clone)]
pub enum Precision {
    /// Symmetric positive-definite matrix.
    Dense(Array2<f64>),
    /// CAR precision on a grid graph, applied without forming a matrix.
    Car { graph: Arc<GridGraph>, car: CarSpec },
}

impl Precision {
    /// `(λ/2) I`, the precision that reproduces the isotropic lasso penalty.
    pub fn isotropic(p: usize, lambda: f64) -> Self {
        Precision::Dense(Array2::eye(p) * (lambda / 2.0))
    }

    /// Inverts a covariance matrix; fails unless it is symmetric positive definite.
    pub fn from_covariance(sigma: &Array2<f64>) -> Result<Self> {
        check_symmetric(sigma)?;
        let chol = Cholesky::factor(sigma.view())
            .map_err(|e| HppError::arg(format!("covariance is not positive definite: {e}")))?;
        Ok(Precision::Dense(chol.inverse()))
    }

    pub fn from_matrix(precision: Array2<f64>) -> Result<Self> {
        check_symmetric(&precision)?;
        Cholesky::factor(precision.view())
            .map_err(|e| HppError::arg(format!("precision is not positive definite: {e}")))?;
        Ok(Precision::Dense(precision))
    }

    pub fn car(graph: Arc<GridGraph>, car: CarSpec) -> Result<Self> {
        car.check_positive_definite(&graph)?;
        Ok(Precision::Car { graph, car })
    }

    pub fn dim(&self) -> usize {
        match self {
            Precision::Dense(m) => m.nrows(),
            Precision::Car { graph, .. } => graph.len(),
        }
    }

    pub fn apply(&self, w: ArrayView1<f64>) -> Result<Array1<f64>> {
        if w.len() != self.dim() {
            return Err(HppError::dims("vector does not match the precision matrix"));
        }
        Ok(match self {
            Precision::Dense(m) => m.dot(&w),
            Precision::Car { graph, car } => car_symmetric_apply(graph, car, w),
        })
    }

    /// `w^T Σ^{-1} w`.
    pub fn quad_form(&self, w: ArrayView1<f64>) -> Result<f64> {
        Ok(w.dot(&self.apply(w)?))
    }

    /// Dense symmetric matrix form.
    pub fn to_dense(&self) -> Array2<f64> {
        match self {
            Precision::Dense(m) => m.clone(),
            Precision::Car { graph, car } => car_symmetric_precision(graph, car),
        }
    }
}

fn check_symmetric(m: &Array2<f64>) -> Result<()> {
    let (r, c) = m.dim();
    if r != c {
        return Err(HppError::dims("matrix is not square"));
    }
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    for i in 0..r {
        for j in 0..i {
            if (m[[i, j]] - m[[j, i]]).abs() > 1e-12 * scale {
                return Err(HppError::arg(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Gaussian penalties `u^T Σ_u^{-1} u + v^T Σ_v^{-1} v` on the two factors.
#[derive(Debug, Clone)]
pub struct Structure {
    pub u: Precision,
    pub v: Precision,
}

impl Structure {
    pub fn new(u: Precision, v: Precision) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(HppError::dims("factor precisions have different sizes"));
        }
        Ok(Structure { u, v })
    }

    pub fn shared(p: Precision) -> Self {
        Structure { u: p.clone(), v: p }
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }
}
