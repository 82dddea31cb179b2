//! Dense linear algebra used by the ridge-type updates.
//!
//! Every ridge solve in the crate goes through [`Cholesky`]; no matrix is ever
//! inverted explicitly except where a caller asks for a precision matrix.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{HppError, Result};

/// Lower-triangular Cholesky factor `A = L L^T` of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    /// Row-major lower triangle; the strict upper triangle is zero.
    l: Array2<f64>,
}

impl Cholesky {
    /// Factor a symmetric matrix. Only the lower triangle of `a` is read.
    pub fn factor(a: ArrayView2<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(HppError::dims(format!(
                "Cholesky needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        let mut l = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..=i {
                let s = {
                    let li = l.row(i);
                    let lj = l.row(j);
                    let li = li.as_slice().expect("row-major");
                    let lj = lj.as_slice().expect("row-major");
                    let mut acc = 0.0;
                    for k in 0..j {
                        acc += li[k] * lj[k];
                    }
                    a[[i, j]] - acc
                };
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(HppError::NotPositiveDefinite { index: i, pivot: s });
                    }
                    l[[i, i]] = s.sqrt();
                } else {
                    l[[i, j]] = s / l[[j, j]];
                }
            }
        }
        Ok(Cholesky { l })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn factor_matrix(&self) -> &Array2<f64> {
        &self.l
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: ArrayView1<f64>) -> Array1<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length");
        let mut x = b.to_owned();
        // forward: L y = b
        for i in 0..n {
            let row = self.l.row(i);
            let row = row.as_slice().expect("row-major");
            let mut s = x[i];
            for k in 0..i {
                s -= row[k] * x[k];
            }
            x[i] = s / row[i];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[[k, i]] * x[k];
            }
            x[i] = s / self.l[[i, i]];
        }
        x
    }

    /// Explicit inverse, column by column. Only used to turn covariance
    /// matrices into precision matrices.
    pub fn inverse(&self) -> Array2<f64> {
        let n = self.dim();
        let mut inv = Array2::<f64>::zeros((n, n));
        let mut e = Array1::<f64>::zeros(n);
        for j in 0..n {
            e.fill(0.0);
            e[j] = 1.0;
            let col = self.solve(e.view());
            inv.column_mut(j).assign(&col);
        }
        // symmetrize away rounding asymmetry
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (inv[[i, j]] + inv[[j, i]]);
                inv[[i, j]] = m;
                inv[[j, i]] = m;
            }
        }
        inv
    }
}

/// Solve the symmetric positive-definite system `a x = b`.
pub fn spd_solve(a: ArrayView2<f64>, b: ArrayView1<f64>) -> Result<Array1<f64>> {
    Ok(Cholesky::factor(a)?.solve(b))
}

/// Builds `Q ∘ v v^T + ridge · I`.
pub fn hadamard_ridge_matrix(q: ArrayView2<f64>, v: ArrayView1<f64>, ridge: f64) -> Array2<f64> {
    let p = v.len();
    let mut a = Array2::<f64>::zeros((p, p));
    for i in 0..p {
        let vi = v[i];
        for j in 0..p {
            a[[i, j]] = q[[i, j]] * vi * v[j];
        }
        a[[i, i]] += ridge;
    }
    a
}

/// Builds `Q ∘ v v^T + P` for a dense (symmetric) precision matrix `P`.
pub fn hadamard_precision_matrix(
    q: ArrayView2<f64>,
    v: ArrayView1<f64>,
    precision: ArrayView2<f64>,
) -> Array2<f64> {
    let p = v.len();
    let mut a = Array2::<f64>::zeros((p, p));
    for i in 0..p {
        let vi = v[i];
        for j in 0..p {
            a[[i, j]] = q[[i, j]] * vi * v[j] + precision[[i, j]];
        }
    }
    a
}

/// Soft-threshold `S(z, t) = sign(z) max(|z| - t, 0)`. Returns exactly zero at `|z| = t`.
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    let m = z.abs() - t;
    if m > 0.0 {
        m.copysign(z)
    } else {
        0.0
    }
}

/// `sign(x)` with `sign(0) = 0`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Extracts the principal submatrix of `q` on `idx`.
pub fn submatrix(q: ArrayView2<f64>, idx: &[usize]) -> Array2<f64> {
    let m = idx.len();
    let mut out = Array2::<f64>::zeros((m, m));
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[[a, b]] = q[[i, j]];
        }
    }
    out
}

pub fn subvector(v: ArrayView1<f64>, idx: &[usize]) -> Array1<f64> {
    idx.iter().map(|&i| v[i]).collect()
}
