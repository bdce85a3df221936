use crate::numkernel::Matrix;
use crate::systems::eja::{smat, svec, sym_dim};
use crate::systems::EuclideanJordanAlgebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    ExactBasis,
    SpanningSet,
}

/// Finite family of operators spanning (a subspace of) a Lie algebra.
#[derive(Debug, Clone)]
pub struct LieGeneratorSet {
    pub dim: usize,
    pub generators: Vec<Matrix>,
    pub kind: GeneratorKind,
    pub group_name: String,
}

impl LieGeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest `‖D + Dᵀ‖_F` over the family.
    pub fn max_skew_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(|d| d.add(&d.transpose()).frobenius_norm())
            .fold(0.0, f64::max)
    }
}

fn unit_skew(n: usize, i: usize, j: usize) -> Matrix {
    let mut d = Matrix::zeros(n, n);
    d[(i, j)] = 1.0;
    d[(j, i)] = -1.0;
    d
}

/// `Eᵢⱼ − Eⱼᵢ` for `i < j`.
pub fn skew_basis(n: usize) -> LieGeneratorSet {
    let mut generators = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            generators.push(unit_skew(n, i, j));
        }
    }
    LieGeneratorSet {
        dim: n,
        generators,
        kind: GeneratorKind::ExactBasis,
        group_name: format!("O({n})"),
    }
}

/// The permutation group is finite, so its Lie algebra is `{0}`.
pub fn permutation_group_lie(n: usize) -> LieGeneratorSet {
    LieGeneratorSet {
        dim: n,
        generators: Vec::new(),
        kind: GeneratorKind::ExactBasis,
        group_name: format!("S_{n}"),
    }
}

/// `Eᵢᵢ`, the Lyapunov-like maps of the nonnegative orthant.
pub fn diagonal_lyapunov_basis(n: usize) -> LieGeneratorSet {
    let generators = (0..n)
        .map(|i| {
            let mut d = Matrix::zeros(n, n);
            d[(i, i)] = 1.0;
            d
        })
        .collect();
    LieGeneratorSet {
        dim: n,
        generators,
        kind: GeneratorKind::ExactBasis,
        group_name: format!("Aut(R^{n}_+)"),
    }
}

/// Commutators `L_{bᵢ}L_{bⱼ} − L_{bⱼ}L_{bᵢ}` over basis pairs; zero
/// commutators are dropped.
pub fn derivation_span(alg: &EuclideanJordanAlgebra) -> LieGeneratorSet {
    let ls: Vec<Matrix> = (0..alg.dim).map(|i| alg.basis_l(i)).collect();
    let mut generators = Vec::new();
    for i in 0..alg.dim {
        for j in (i + 1)..alg.dim {
            let c = ls[i].commutator(&ls[j]);
            if c.frobenius_norm() > 1e-12 {
                generators.push(c);
            }
        }
    }
    LieGeneratorSet {
        dim: alg.dim,
        generators,
        kind: GeneratorKind::SpanningSet,
        group_name: "Der(V)".into(),
    }
}

/// `{L_{bᵢ}}` together with the derivations: the Lyapunov-like maps of the
/// symmetric cone.
pub fn eja_cone_lie_span(alg: &EuclideanJordanAlgebra) -> LieGeneratorSet {
    let mut generators: Vec<Matrix> = (0..alg.dim).map(|i| alg.basis_l(i)).collect();
    generators.extend(derivation_span(alg).generators);
    LieGeneratorSet {
        dim: alg.dim,
        generators,
        kind: GeneratorKind::SpanningSet,
        group_name: "Aut(K)".into(),
    }
}

/// `X ↦ EᵢᵢX + XEᵢᵢ` on symmetric-matrix coordinates.
pub fn cp_cone_lie_span(n: usize) -> LieGeneratorSet {
    let d = sym_dim(n);
    let generators = (0..n)
        .map(|i| {
            let mut eii = Matrix::zeros(n, n);
            eii[(i, i)] = 1.0;
            let mut op = Matrix::zeros(d, d);
            for k in 0..d {
                let mut bk = vec![0.0; d];
                bk[k] = 1.0;
                let x = smat(&bk, n);
                op.set_column(k, &svec(&(&eii * &x).add(&(&x * &eii))));
            }
            op
        })
        .collect();
    LieGeneratorSet {
        dim: d,
        generators,
        kind: GeneratorKind::SpanningSet,
        group_name: format!("Aut(CP_{n})"),
    }
}

fn left_mult(a: &Matrix, n: usize) -> Matrix {
    // X ↦ AX on row-major coordinates of m×n matrices
    let m = a.rows();
    let mut op = Matrix::zeros(m * n, m * n);
    for i in 0..m {
        for k in 0..m {
            if a[(i, k)] != 0.0 {
                for j in 0..n {
                    op[(i * n + j, k * n + j)] = a[(i, k)];
                }
            }
        }
    }
    op
}

fn right_mult(b: &Matrix, m: usize) -> Matrix {
    // X ↦ XB on row-major coordinates of m×n matrices
    let n = b.rows();
    let mut op = Matrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            for k in 0..n {
                if b[(k, j)] != 0.0 {
                    op[(i * n + j, i * n + k)] = b[(k, j)];
                }
            }
        }
    }
    op
}

/// `X ↦ AX` and `X ↦ XB` with `A`, `B` ranging over skew bases, acting on
/// row-major coordinates of `M_{m,n}`.
pub fn uxv_lie(m: usize, n: usize) -> LieGeneratorSet {
    let mut generators: Vec<Matrix> = skew_basis(m)
        .generators
        .iter()
        .map(|a| left_mult(a, n))
        .collect();
    generators.extend(skew_basis(n).generators.iter().map(|b| right_mult(b, m)));
    let kind = if m == n {
        GeneratorKind::ExactBasis
    } else {
        GeneratorKind::SpanningSet
    };
    LieGeneratorSet {
        dim: m * n,
        generators,
        kind,
        group_name: format!("O({m})xO({n})"),
    }
}

pub fn uxv_group_lie(n: usize) -> LieGeneratorSet {
    uxv_lie(n, n)
}

/// Rotations of the `x̄` block of the spin algebra, i.e. its derivations.
pub fn spin_automorphisms(n: usize) -> LieGeneratorSet {
    let mut generators = Vec::new();
    for i in 1..n {
        for j in (i + 1)..n {
            generators.push(unit_skew(n, i, j));
        }
    }
    LieGeneratorSet {
        dim: n,
        generators,
        kind: GeneratorKind::ExactBasis,
        group_name: format!("O({})", n - 1),
    }
}

pub fn empty_set(dim: usize) -> LieGeneratorSet {
    LieGeneratorSet {
        dim,
        generators: Vec::new(),
        kind: GeneratorKind::ExactBasis,
        group_name: "trivial".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::exp_operator;

    #[test]
    fn skew_counts() {
        assert!(skew_basis(1).is_empty());
        assert_eq!(skew_basis(3).len(), 3);
        assert_eq!(skew_basis(3).max_skew_defect(), 0.0);
    }

    #[test]
    fn skew_exponentials_are_orthogonal() {
        for d in skew_basis(4).generators {
            let q = exp_operator(&d, 0.7);
            let e = (&q.transpose() * &q)
                .sub(&Matrix::identity(4))
                .frobenius_norm();
            assert!(e < 1e-10);
        }
    }

    #[test]
    fn derivations_annihilate_unit_and_are_skew() {
        for alg in [
            EuclideanJordanAlgebra::symmetric(3),
            EuclideanJordanAlgebra::spin(4),
        ] {
            let g = derivation_span(&alg);
            assert!(!g.is_empty());
            assert!(g.max_skew_defect() < 1e-12);
            for d in &g.generators {
                assert!(d.matvec(&alg.unit).iter().all(|v| v.abs() < 1e-12));
            }
        }
        assert!(derivation_span(&EuclideanJordanAlgebra::componentwise(3)).is_empty());
    }

    #[test]
    fn uxv_operators_match_matrix_products() {
        let (m, n) = (2, 3);
        let g = uxv_lie(m, n);
        assert_eq!(g.len(), 1 + 3);
        let x = Matrix::from_row_major(m, n, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let a = unit_skew(m, 0, 1);
        let ax = (&a * &x).into_vec();
        assert_eq!(g.generators[0].matvec(x.as_slice()), ax);
        let b = unit_skew(n, 0, 1);
        let xb = (&x * &b).into_vec();
        assert_eq!(g.generators[1].matvec(x.as_slice()), xb);
    }
}
