use rayon::prelude::*;

use super::generators::LieGeneratorSet;
use crate::error::Result;
use crate::ftvn::{summarize, CheckReport, Metric, Sample, SemiFtvnSystem};
use crate::numkernel::vector::sub;
use crate::numkernel::{exp_operator, joint_nullspace, Matrix};
use crate::rng;
use crate::systems::EuclideanJordanAlgebra;

const EPS: f64 = f64::MIN_POSITIVE;

/// `max_D |⟨Da, b⟩| / (‖D‖_F‖a‖‖b‖ + ε)` and whether it is at most `tol`.
pub fn commute_rel(
    a: &[f64],
    b: &[f64],
    gens: &LieGeneratorSet,
    metric: &Metric,
    tol: f64,
) -> (bool, f64) {
    let scale = metric.norm(a) * metric.norm(b);
    let r = gens
        .generators
        .iter()
        .map(|d| metric.inner(&d.matvec(a), b).abs() / (d.frobenius_norm() * scale + EPS))
        .fold(0.0, f64::max);
    (r <= tol, r)
}

/// Same residual through the orthogonality of `b⊗a` to each generator:
/// `⟨D, (Gb)aᵀ⟩_F`.
pub fn commute_rel_outer(
    a: &[f64],
    b: &[f64],
    gens: &LieGeneratorSet,
    metric: &Metric,
    tol: f64,
) -> (bool, f64) {
    let scale = metric.norm(a) * metric.norm(b);
    let outer = Matrix::outer(&metric.lower(b), a);
    let r = gens
        .generators
        .iter()
        .map(|d| d.frobenius_dot(&outer).abs() / (d.frobenius_norm() * scale + EPS))
        .fold(0.0, f64::max);
    (r <= tol, r)
}

/// `‖L_aL_b − L_bL_a‖_F / (‖L_a‖_F‖L_b‖_F + ε)`.
pub fn operator_commute(
    alg: &EuclideanJordanAlgebra,
    a: &[f64],
    b: &[f64],
    tol: f64,
) -> (bool, f64) {
    let (la, lb) = (alg.l_op(a), alg.l_op(b));
    let r = la.commutator(&lb).frobenius_norm() / (la.frobenius_norm() * lb.frobenius_norm() + EPS);
    (r <= tol, r)
}

/// Orthonormal basis of `{x : Dx = 0 for every generator}`.
pub fn weak_center(gens: &LieGeneratorSet, tol: f64) -> Result<Vec<Vec<f64>>> {
    let ns = joint_nullspace(&gens.generators, gens.dim, tol)?;
    Ok((0..ns.cols()).map(|j| ns.column(j)).collect())
}

/// Checks `λ(exp(tD)x) = λ(x)` on sampled `x` and every `t` in `t_grid`,
/// i.e. that `exp(tD)` acts as an automorphism of the system.
pub fn exp_membership_probe(
    d: &Matrix,
    sys: &SemiFtvnSystem,
    samples: usize,
    t_grid: &[f64],
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mut rng = rng::stream("exp_membership", seed);
    let xs: Vec<Vec<f64>> = (0..samples.max(1)).map(|_| sys.sample(&mut rng)).collect();
    let flows: Vec<(f64, Matrix)> = t_grid.iter().map(|&t| (t, exp_operator(d, t))).collect();
    let evaluated: Vec<Vec<Sample>> = xs
        .par_iter()
        .map(|x| {
            let lx = sys.lambda(x)?;
            flows
                .iter()
                .map(|(t, q)| {
                    let moved = sys.lambda(&q.matvec(x))?;
                    Ok(Sample {
                        residual: sys.norm_w(&sub(&moved, &lx)),
                        bound: tol * sys.norm_w(&lx).max(1.0),
                        inputs: vec![x.clone(), vec![*t]],
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<Sample> = evaluated.into_iter().flatten().collect();
    Ok(summarize("exp_membership", &flat, seed, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::generators::*;
    use crate::systems::eja::svec;
    use crate::systems::{make_norm_system, make_sym_eja};

    fn std(n: usize) -> Metric {
        Metric::scaled_identity(n, 1.0)
    }

    #[test]
    fn orthant_commutativity_is_complementarity() {
        let g = diagonal_lyapunov_basis(2);
        assert!(commute_rel(&[1.0, 0.0], &[0.0, 1.0], &g, &std(2), 1e-12).0);
        let (ok, r) = commute_rel(&[1.0, 1.0], &[1.0, 1.0], &g, &std(2), 1e-12);
        assert!(!ok && r > 0.1);
    }

    #[test]
    fn both_routes_agree() {
        let mut r = rng::seeded(9);
        let g = skew_basis(4);
        let m = Metric::scaled_identity(4, 2.0);
        for _ in 0..50 {
            let a = rng::normal_vec(&mut r, 4);
            let b = rng::normal_vec(&mut r, 4);
            let (_, r1) = commute_rel(&a, &b, &g, &m, 1e-8);
            let (_, r2) = commute_rel_outer(&a, &b, &g, &m, 1e-8);
            assert!((r1 - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_argument_commutes() {
        let g = skew_basis(3);
        assert_eq!(
            commute_rel(&[1.0, 2.0, 3.0], &[0.0; 3], &g, &std(3), 1e-12),
            (true, 0.0)
        );
    }

    #[test]
    fn powers_operator_commute() {
        let alg = EuclideanJordanAlgebra::symmetric(3);
        let mut r = rng::seeded(2);
        let a = alg.random_element(&mut r);
        let a2 = alg.product(&a, &a);
        assert!(operator_commute(&alg, &a, &a2, 1e-10).0);
    }

    #[test]
    fn weak_centers() {
        assert_eq!(
            weak_center(&permutation_group_lie(4), 1e-9).unwrap().len(),
            4
        );
        assert_eq!(weak_center(&skew_basis(3), 1e-9).unwrap().len(), 0);
        let alg = EuclideanJordanAlgebra::symmetric(3);
        let wc = weak_center(&derivation_span(&alg), 1e-9).unwrap();
        assert_eq!(wc.len(), 1);
        let e = svec(&Matrix::identity(3));
        let cos = crate::numkernel::vector::dot(&wc[0], &e).abs() / 3f64.sqrt();
        assert!((cos - 1.0).abs() < 1e-10);
    }

    #[test]
    fn membership_probe() {
        let norm = make_norm_system(3);
        let grid = [1.0, -1.0, 0.1, -0.1];
        let skew = &skew_basis(3).generators[0];
        assert!(exp_membership_probe(skew, &norm, 20, &grid, 1, 1e-9)
            .unwrap()
            .passed());
        let bad = Matrix::diag(&[1.0, 0.0, 0.0]);
        assert!(!exp_membership_probe(&bad, &norm, 20, &grid, 1, 1e-9)
            .unwrap()
            .passed());
        let (alg, sys) = make_sym_eja(3);
        for d in derivation_span(&alg).generators {
            assert!(exp_membership_probe(&d, &sys, 10, &grid, 1, 1e-9)
                .unwrap()
                .passed());
        }
    }
}
