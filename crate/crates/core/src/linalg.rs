//! Dense linear algebra on row-major complex square matrices, backed by faer.

use std::sync::Once;

use faer::{Mat, Par, Side};
use num_complex::Complex64;

use crate::error::{QhaError, Result};

static SEQUENTIAL: Once = Once::new();

/// Parallelism lives at the ensemble level; the factorizations themselves run
/// sequentially so that results never depend on the thread schedule.
fn sequential() {
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(Par::Seq));
}

pub(crate) fn to_mat(data: &[Complex64], n: usize) -> Mat<Complex64> {
    sequential();
    Mat::from_fn(n, n, |i, j| data[i * n + j])
}

pub(crate) fn from_mat(m: &Mat<Complex64>) -> Vec<Complex64> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub(crate) fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let p = &to_mat(a, n) * &to_mat(b, n);
    from_mat(&p)
}

/// Singular values in nonincreasing order.
pub(crate) fn singular_values(data: &[Complex64], n: usize) -> Result<Vec<f64>> {
    if data.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Ok(vec![0.0; n]);
    }
    let mut s = to_mat(data, n)
        .singular_values()
        .map_err(|e| QhaError::LinearAlgebra(format!("SVD did not converge: {e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Full SVD `A = U diag(s) V*`.
pub(crate) struct Svd {
    pub u: Mat<Complex64>,
    pub s: Vec<f64>,
    pub v: Mat<Complex64>,
}

impl Svd {
    pub(crate) fn new(data: &[Complex64], n: usize) -> Result<Self> {
        let svd = to_mat(data, n)
            .svd()
            .map_err(|e| QhaError::LinearAlgebra(format!("SVD did not converge: {e:?}")))?;
        let s = svd.S().column_vector().iter().map(|v| v.re).collect();
        Ok(Self {
            u: svd.U().to_owned(),
            s,
            v: svd.V().to_owned(),
        })
    }

    /// `sum_k w_k u_k v_k^*` as a row-major matrix.
    pub(crate) fn recombine(&self, weights: &[f64]) -> Vec<Complex64> {
        let n = self.u.nrows();
        let k = weights.len().min(self.s.len());
        let us = Mat::from_fn(n, k, |i, j| self.u[(i, j)] * weights[j]);
        let vk = Mat::from_fn(n, k, |i, j| self.v[(i, j)]);
        from_mat(&(&us * vk.adjoint()))
    }
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
pub(crate) fn hermitian_eigenvalues(data: &[Complex64], n: usize) -> Result<Vec<f64>> {
    to_mat(data, n)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| QhaError::LinearAlgebra(format!("eigensolver did not converge: {e:?}")))
}
