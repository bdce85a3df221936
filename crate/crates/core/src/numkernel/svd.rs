//! Singular value decomposition through the Gram matrix `XᵀX`.

use super::eig::{fix_sign, sym_eig};
use super::matrix::Matrix;
use super::vector::{dot, norm, sort_desc};
use crate::error::Result;

/// `X = U · Diag(s) · Vᵀ` with `U` (m×m), `V` (n×n) orthogonal and `s`
/// non-increasing of length `min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

impl Svd {
    /// Rectangular `m×n` matrix with `d` on its main diagonal.
    pub fn rect_diag(m: usize, n: usize, d: &[f64]) -> Matrix {
        let mut s = Matrix::zeros(m, n);
        for (i, x) in d.iter().enumerate().take(m.min(n)) {
            s[(i, i)] = *x;
        }
        s
    }

    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let s = Self::rect_diag(m, n, &self.singular_values);
        &(&self.u * &s) * &self.v.transpose()
    }
}

/// Completes the orthonormal columns in `basis` to an orthonormal basis of ℝᵐ.
fn complete_basis(mut basis: Vec<Vec<f64>>, m: usize) -> Vec<Vec<f64>> {
    let mut k = 0;
    while basis.len() < m && k < m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        k += 1;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&e, b);
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nrm = norm(&e);
        if nrm > 1e-8 {
            basis.push(e.into_iter().map(|x| x / nrm).collect());
        }
    }
    basis
}

/// Thin wrapper returning the SVD of `x`.
///
/// Right singular vectors come from the eigenvectors of `XᵀX`; each left
/// vector is `X vᵢ` re-orthogonalized, and the singular value is read off as
/// `⟨uᵢ, X vᵢ⟩`. Every right singular vector has its first non-negligible
/// component positive.
pub fn svd(x: &Matrix, tol: f64) -> Result<Svd> {
    let (m, n) = (x.rows(), x.cols());
    let gram = &x.transpose() * x;
    let eig = sym_eig(&gram, tol.max(1e-12))?;
    let scale = x.frobenius_norm();
    let k = m.min(n);

    let mut v_cols: Vec<Vec<f64>> = (0..n).map(|j| eig.vectors.column(j)).collect();
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(k);
    for v in v_cols.iter().take(k) {
        let mut xv = x.matvec(v);
        for _ in 0..2 {
            for u in u_cols.iter().filter(|u| !u.is_empty()) {
                let c = dot(&xv, u);
                xv.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nrm = norm(&xv);
        if nrm > 1e2 * f64::EPSILON * scale && nrm > 0.0 {
            let u: Vec<f64> = xv.iter().map(|a| a / nrm).collect();
            s.push(dot(&u, &x.matvec(v)).max(0.0));
            u_cols.push(u);
        } else {
            s.push(0.0);
            u_cols.push(Vec::new());
        }
    }
    // fill any zero-singular-value slots, then the rest of ℝᵐ
    let have: Vec<Vec<f64>> = u_cols.iter().filter(|u| !u.is_empty()).cloned().collect();
    let completed = complete_basis(have.clone(), m);
    let mut extra = completed.into_iter().skip(have.len());
    for u in u_cols.iter_mut() {
        if u.is_empty() {
            *u = extra.next().expect("basis completion");
        }
    }
    u_cols.extend(extra);

    // recomputed singular values may have drifted out of order
    let (s_sorted, perm) = sort_desc(&s);
    let mut order: Vec<usize> = perm;
    order.extend(k..n);
    let v_sorted: Vec<Vec<f64>> = order.iter().map(|&j| v_cols[j].clone()).collect();
    let mut u_order: Vec<usize> = order.iter().copied().filter(|&j| j < k).collect();
    u_order.extend(k..m);
    let mut u_sorted: Vec<Vec<f64>> = u_order.iter().map(|&j| u_cols[j].clone()).collect();
    v_cols = v_sorted;

    for (j, v) in v_cols.iter_mut().enumerate() {
        if fix_sign(v) && j < k {
            u_sorted[j].iter_mut().for_each(|a| *a = -*a);
        }
    }

    let mut u = Matrix::zeros(m, m);
    for (j, c) in u_sorted.iter().enumerate() {
        u.set_column(j, c);
    }
    let mut v = Matrix::zeros(n, n);
    for (j, c) in v_cols.iter().enumerate() {
        v.set_column(j, c);
    }
    Ok(Svd {
        singular_values: s_sorted,
        u,
        v,
    })
}
