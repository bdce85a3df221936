//! Joint nullspace of a family of linear operators.

use super::eig::sym_eig;
use super::matrix::Matrix;
use crate::error::Result;

/// Orthonormal basis (as columns) of `{x : Dᵢx = 0 for all i}`.
///
/// Each operator is normalized, the stacked Gram `Σ DᵢᵀDᵢ` is diagonalized
/// and eigenvectors with eigenvalue below `max(tol², 64·ε·trace)` are kept.
/// An empty family gives the whole space of dimension `dim`.
pub fn joint_nullspace(ops: &[Matrix], dim: usize, tol: f64) -> Result<Matrix> {
    if ops.is_empty() {
        return Ok(Matrix::identity(dim));
    }
    let mut m = Matrix::zeros(dim, dim);
    for d in ops {
        let f = d.frobenius_norm();
        if f == 0.0 {
            continue;
        }
        let dn = d.scale(1.0 / f);
        m = m.add(&(&dn.transpose() * &dn));
    }
    let eig = sym_eig(&m, 1e-8)?;
    let cut = (tol * tol).max(64.0 * f64::EPSILON * m.trace().max(1.0));
    let keep: Vec<usize> = (0..dim).filter(|&j| eig.values[j] <= cut).collect();
    let mut basis = Matrix::zeros(dim, keep.len());
    for (k, &j) in keep.iter().enumerate() {
        basis.set_column(k, &eig.vectors.column(j));
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_generator_in_three_dims() {
        let d = Matrix::from_rows(&[
            vec![0.0, -1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let ns = joint_nullspace(&[d], 3, 1e-9).unwrap();
        assert_eq!(ns.cols(), 1);
        assert!((ns[(2, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_family() {
        assert_eq!(joint_nullspace(&[], 2, 1e-9).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn full_rank_family() {
        let ns = joint_nullspace(&[Matrix::identity(4)], 4, 1e-9).unwrap();
        assert_eq!(ns.cols(), 0);
    }
}
