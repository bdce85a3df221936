//! Euclidean Jordan algebras stored as structure-constant tensors.
//!
//! Symmetric matrices use the orthonormal coordinates `E_ii` (i = 0..n)
//! followed by `(E_ij + E_ji)/√2` for `i < j`, so the trace inner product is
//! the standard dot product of coordinate vectors.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::numkernel::vector::{dot, norm, sort_desc};
use crate::numkernel::{sym_eig, Matrix};
use crate::rng::{self, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanKind {
    /// ℝⁿ with the componentwise product.
    Componentwise { n: usize },
    /// Sⁿ with `X∘Y = (XY + YX)/2`.
    Symmetric { n: usize },
    /// ℝⁿ with `x∘y = (⟨x,y⟩, x₁ȳ + y₁x̄)`.
    Spin { n: usize },
}

#[derive(Debug, Clone)]
pub struct EuclideanJordanAlgebra {
    pub dim: usize,
    pub rank: usize,
    /// `table[(i·dim + j)·dim + k]` is the `k`-th coordinate of `bᵢ∘bⱼ`.
    table: Vec<f64>,
    pub unit: Vec<f64>,
    pub trace_gram: Matrix,
    pub kind: JordanKind,
}

/// Spectral decomposition `x = Σ λᵢ cᵢ` over a Jordan frame.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub values: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
}

pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Row/column index pairs of the symmetric-matrix coordinates in order.
pub fn sym_index_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Coordinates of a symmetric matrix.
pub fn svec(x: &Matrix) -> Vec<f64> {
    let n = x.rows();
    sym_index_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            if i == j {
                x[(i, i)]
            } else {
                (x[(i, j)] + x[(j, i)]) * FRAC_1_SQRT_2
            }
        })
        .collect()
}

/// Symmetric matrix from coordinates.
pub fn smat(v: &[f64], n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for (k, (i, j)) in sym_index_pairs(n).into_iter().enumerate() {
        if i == j {
            m[(i, i)] = v[k];
        } else {
            m[(i, j)] = v[k] * FRAC_1_SQRT_2;
            m[(j, i)] = v[k] * FRAC_1_SQRT_2;
        }
    }
    m
}

/// Size `n` with `n(n+1)/2 = d`, if any.
pub fn sym_order(d: usize) -> Option<usize> {
    (1..=d).find(|n| sym_dim(*n) == d)
}

impl EuclideanJordanAlgebra {
    fn from_product(
        kind: JordanKind,
        dim: usize,
        rank: usize,
        unit: Vec<f64>,
        trace_scale: f64,
        product: impl Fn(&[f64], &[f64]) -> Vec<f64>,
    ) -> Self {
        let mut table = vec![0.0; dim * dim * dim];
        let basis = |i: usize| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        };
        for i in 0..dim {
            for j in 0..dim {
                let p = product(&basis(i), &basis(j));
                table[(i * dim + j) * dim..(i * dim + j + 1) * dim].copy_from_slice(&p);
            }
        }
        Self {
            dim,
            rank,
            table,
            unit,
            trace_gram: Matrix::identity(dim).scale(trace_scale),
            kind,
        }
    }

    pub fn componentwise(n: usize) -> Self {
        Self::from_product(
            JordanKind::Componentwise { n },
            n,
            n,
            vec![1.0; n],
            1.0,
            |x, y| x.iter().zip(y).map(|(a, b)| a * b).collect(),
        )
    }

    pub fn symmetric(n: usize) -> Self {
        let mut unit = vec![0.0; sym_dim(n)];
        unit[..n].fill(1.0);
        Self::from_product(
            JordanKind::Symmetric { n },
            sym_dim(n),
            n,
            unit,
            1.0,
            |x, y| {
                let (a, b) = (smat(x, n), smat(y, n));
                svec(&(&a * &b).add(&(&b * &a)).scale(0.5))
            },
        )
    }

    pub fn spin(n: usize) -> Self {
        let mut unit = vec![0.0; n];
        unit[0] = 1.0;
        Self::from_product(JordanKind::Spin { n }, n, 2, unit, 2.0, spin_product)
    }

    pub fn product(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                let row = &self.table[(i * d + j) * d..(i * d + j + 1) * d];
                out.iter_mut().zip(row).for_each(|(o, t)| *o += w * t);
            }
        }
        out
    }

    /// Matrix of `L_a : x ↦ a∘x`.
    pub fn l_op(&self, a: &[f64]) -> Matrix {
        let d = self.dim;
        let mut m = Matrix::zeros(d, d);
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    m[(k, j)] += ai * self.table[(i * d + j) * d + k];
                }
            }
        }
        m
    }

    pub fn basis_l(&self, i: usize) -> Matrix {
        let mut e = vec![0.0; self.dim];
        e[i] = 1.0;
        self.l_op(&e)
    }

    pub fn trace_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.trace_gram.bilinear(x, y)
    }

    pub fn spectral(&self, x: &[f64]) -> Result<Spectral> {
        match self.kind {
            JordanKind::Componentwise { n } => {
                let (values, perm) = sort_desc(x);
                let frame = perm
                    .into_iter()
                    .map(|p| {
                        let mut e = vec![0.0; n];
                        e[p] = 1.0;
                        e
                    })
                    .collect();
                Ok(Spectral { values, frame })
            }
            JordanKind::Symmetric { n } => {
                let eig = sym_eig(&smat(x, n), 1e-9)?;
                let frame = (0..n)
                    .map(|k| {
                        let q = eig.vectors.column(k);
                        svec(&Matrix::outer(&q, &q))
                    })
                    .collect();
                Ok(Spectral {
                    values: eig.values,
                    frame,
                })
            }
            JordanKind::Spin { n } => {
                let bar = &x[1..];
                let r = norm(bar);
                let mut w = vec![0.0; n - 1];
                if r > 0.0 {
                    w.iter_mut().zip(bar).for_each(|(a, b)| *a = b / r);
                } else {
                    w[0] = 1.0;
                }
                let half = |s: f64| {
                    let mut c = vec![0.5; 1];
                    c.extend(w.iter().map(|v| 0.5 * s * v));
                    c
                };
                Ok(Spectral {
                    values: vec![x[0] + r, x[0] - r],
                    frame: vec![half(1.0), half(-1.0)],
                })
            }
        }
    }

    pub fn eigenvalues(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.kind {
            JordanKind::Spin { .. } => {
                let r = norm(&x[1..]);
                Ok(vec![x[0] + r, x[0] - r])
            }
            _ => Ok(self.spectral(x)?.values),
        }
    }

    pub fn compose(values: &[f64], frame: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; frame[0].len()];
        for (v, c) in values.iter().zip(frame) {
            out.iter_mut().zip(c).for_each(|(o, ci)| *o += v * ci);
        }
        out
    }

    /// Nearest point of the symmetric cone in the trace inner product.
    pub fn cone_projection(&self, x: &[f64]) -> Result<Vec<f64>> {
        let s = self.spectral(x)?;
        let pos: Vec<f64> = s.values.iter().map(|v| v.max(0.0)).collect();
        Ok(Self::compose(&pos, &s.frame))
    }

    pub fn min_eigenvalue(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eigenvalues(x)?.last().copied().unwrap_or(0.0))
    }

    /// Sampled check of the algebra axioms; returns the worst residual of
    /// commutativity, `L_e = I`, trace associativity and the Jordan identity.
    pub fn validate(&self, samples: usize, seed: u64) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let a = self.table[(i * d + j) * d + k];
                    let b = self.table[(j * d + i) * d + k];
                    worst = worst.max((a - b).abs());
                }
            }
        }
        worst = worst.max(
            self.l_op(&self.unit)
                .sub(&Matrix::identity(d))
                .frobenius_norm(),
        );
        let basis = |i: usize| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (basis(i), basis(j), basis(k));
                    let l = self.trace_inner(&self.product(&x, &y), &z);
                    let r = self.trace_inner(&y, &self.product(&x, &z));
                    worst = worst.max((l - r).abs());
                }
            }
        }
        let mut rng = rng::stream("jordan_identity", seed);
        for _ in 0..samples {
            let x = rng::normal_vec(&mut rng, d);
            let y = rng::normal_vec(&mut rng, d);
            let x2 = self.product(&x, &x);
            let lhs = self.product(&x2, &self.product(&x, &y));
            let rhs = self.product(&x, &self.product(&x2, &y));
            let scale = 1.0 + norm(&x).powi(3) * norm(&y);
            let r = lhs
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(r / scale);
        }
        worst
    }

    pub fn random_element(&self, rng: &mut Rng) -> Vec<f64> {
        rng::normal_vec(rng, self.dim)
    }

    /// Random Jordan frame, from a random element's spectral decomposition.
    pub fn random_frame(&self, rng: &mut Rng) -> Result<Vec<Vec<f64>>> {
        Ok(self.spectral(&self.random_element(rng))?.frame)
    }
}

fn spin_product(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    out.push(dot(x, y));
    for k in 1..x.len() {
        out.push(x[0] * y[k] + y[0] * x[k]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_roundtrip_and_isometry() {
        let mut r = rng::seeded(3);
        for n in 1..5 {
            let v = rng::normal_vec(&mut r, sym_dim(n));
            let w = rng::normal_vec(&mut r, sym_dim(n));
            let (a, b) = (smat(&v, n), smat(&w, n));
            assert!(svec(&a).iter().zip(&v).all(|(p, q)| (p - q).abs() < 1e-14));
            assert!(((&a * &b).trace() - dot(&v, &w)).abs() < 1e-12);
        }
    }

    #[test]
    fn axioms_hold() {
        for alg in [
            EuclideanJordanAlgebra::componentwise(3),
            EuclideanJordanAlgebra::symmetric(2),
            EuclideanJordanAlgebra::symmetric(3),
            EuclideanJordanAlgebra::spin(4),
        ] {
            assert!(alg.validate(100, 1) < 1e-9, "{:?}", alg.kind);
        }
    }

    #[test]
    fn spectral_recomposes() {
        let mut r = rng::seeded(5);
        for alg in [
            EuclideanJordanAlgebra::componentwise(4),
            EuclideanJordanAlgebra::symmetric(3),
            EuclideanJordanAlgebra::spin(3),
        ] {
            let x = alg.random_element(&mut r);
            let s = alg.spectral(&x).unwrap();
            let back = EuclideanJordanAlgebra::compose(&s.values, &s.frame);
            assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-10));
            // frame elements are orthogonal idempotents summing to e
            let sum = s.frame.iter().fold(vec![0.0; alg.dim], |acc, c| {
                acc.iter().zip(c).map(|(a, b)| a + b).collect()
            });
            assert!(sum
                .iter()
                .zip(&alg.unit)
                .all(|(a, b)| (a - b).abs() < 1e-10));
            for c in &s.frame {
                let c2 = alg.product(c, c);
                assert!(c2.iter().zip(c).all(|(a, b)| (a - b).abs() < 1e-10));
            }
        }
    }

    #[test]
    fn spin_eigenvalues() {
        let alg = EuclideanJordanAlgebra::spin(2);
        assert_eq!(alg.eigenvalues(&[2.0, -1.0]).unwrap(), vec![3.0, 1.0]);
        assert_eq!(alg.eigenvalues(&[1.0, 0.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn cone_projection_of_indefinite_matrix() {
        let alg = EuclideanJordanAlgebra::symmetric(2);
        let x = svec(&Matrix::diag(&[2.0, -3.0]));
        let p = alg.cone_projection(&x).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-14 && p[1].abs() < 1e-14 && p[2].abs() < 1e-14);
    }
}
