//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use super::matrix::Matrix;
use super::vector::sort_desc;
use crate::error::{Error, Result};

pub const JACOBI_SWEEPS: usize = 30;

/// Spectral decomposition `A = Q Diag(values) Qᵀ` with descending values.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    /// Orthogonal matrix whose columns are the eigenvectors.
    pub vectors: Matrix,
}

impl SymEig {
    pub fn reconstruct(&self) -> Matrix {
        let q = &self.vectors;
        &(&q.clone() * &Matrix::diag(&self.values)) * &q.transpose()
    }
}

/// Flips `v` so that its first non-negligible component is positive.
/// Returns whether `v` was negated.
pub(crate) fn fix_sign(v: &mut [f64]) -> bool {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return false;
    }
    match v.iter().find(|x| x.abs() > 1e-10 * scale) {
        Some(first) if *first < 0.0 => {
            v.iter_mut().for_each(|x| *x = -*x);
            true
        }
        _ => false,
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotSymmetric`] when `‖A − Aᵀ‖_F > tol·‖A‖_F` and with
/// [`Error::NoConvergence`] if the off-diagonal mass does not vanish within
/// [`JACOBI_SWEEPS`] sweeps.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<SymEig> {
    assert!(a.is_square(), "sym_eig needs a square matrix");
    let n = a.rows();
    let fro = a.frobenius_norm();
    let asym = a.asymmetry();
    if asym > tol * fro.max(f64::MIN_POSITIVE) && asym > 0.0 {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let mut m = a.symmetrized();
    let mut q = Matrix::identity(n);
    let target = f64::EPSILON * fro;

    let off = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[(i, j)] * m[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = off(&m) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                what: "jacobi eigensolver",
                iterations: sweeps,
            });
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = m[(p, r)];
                if apr.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[(p, p)];
                let arr = m[(r, r)];
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkr = m[(k, r)];
                    m[(k, p)] = c * mkp - s * mkr;
                    m[(k, r)] = s * mkp + c * mkr;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mrk = m[(r, k)];
                    m[(p, k)] = c * mpk - s * mrk;
                    m[(r, k)] = s * mpk + c * mrk;
                }
                m[(p, r)] = 0.0;
                m[(r, p)] = 0.0;
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
        sweeps += 1;
        converged = off(&m) <= target;
    }

    let (values, perm) = sort_desc(&m.diagonal());
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in perm.iter().enumerate() {
        let mut v = q.column(src);
        fix_sign(&mut v);
        vectors.set_column(dst, &v);
    }
    Ok(SymEig { values, vectors })
}
