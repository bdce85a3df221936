use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::ftvn::{orbit_equal, Metric, SemiFtvnSystem};
use crate::numkernel::vector::sub;
use crate::systems::EuclideanJordanAlgebra;

type Projector = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
type Membership = Arc<dyn Fn(&[f64], f64) -> Result<bool> + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    /// The λ-orbit `[u]`.
    Orbit {
        u: Vec<f64>,
    },
    /// `{x : ‖λ(x)‖ ≤ radius}`, which by norm preservation is a ball.
    SpectralBall {
        radius: f64,
    },
    SymmetricCone,
    NonnegOrthant,
    /// Symmetric cone intersected with a ball.
    ConeBall {
        radius: f64,
    },
    /// `{x : ⟨normal, x⟩ ≤ offset}`; invariant when `normal` lies in the
    /// weak center, e.g. the unit of a Jordan algebra.
    HalfSpaceSpectral {
        normal: Vec<f64>,
        offset: f64,
    },
}

/// A group-invariant set with a nearest-point map and a tolerant
/// membership test.
#[derive(Clone)]
pub struct InvariantSet {
    pub kind: SetKind,
    pub metric: Metric,
    projector: Projector,
    membership: Membership,
}

impl fmt::Debug for InvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantSet")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

fn ball_project(metric: &Metric, x: &[f64], radius: f64) -> Vec<f64> {
    let n = metric.norm(x);
    if n <= radius {
        x.to_vec()
    } else {
        x.iter().map(|v| v * radius / n).collect()
    }
}

impl InvariantSet {
    /// Nearest point of `[u]` to `x` is the orbit maximizer of `⟨x, ·⟩`.
    pub fn orbit(sys: &SemiFtvnSystem, u: &[f64]) -> Self {
        let (s1, s2) = (sys.clone(), sys.clone());
        let (u1, u2) = (u.to_vec(), u.to_vec());
        Self {
            kind: SetKind::Orbit { u: u.to_vec() },
            metric: sys.metric_v().clone(),
            projector: Arc::new(move |x| s1.orbit_argmax(x, &u1)),
            membership: Arc::new(move |x, tol| orbit_equal(&s2, x, &u2, tol)),
        }
    }

    pub fn spectral_ball(metric: &Metric, radius: f64) -> Self {
        let (m1, m2) = (metric.clone(), metric.clone());
        Self {
            kind: SetKind::SpectralBall { radius },
            metric: metric.clone(),
            projector: Arc::new(move |x| Ok(ball_project(&m1, x, radius))),
            membership: Arc::new(move |x, tol| Ok(m2.norm(x) - radius <= tol * radius.max(1.0))),
        }
    }

    pub fn symmetric_cone(alg: &EuclideanJordanAlgebra) -> Self {
        let (a1, a2) = (alg.clone(), alg.clone());
        Self {
            kind: SetKind::SymmetricCone,
            metric: Metric::from_gram(alg.trace_gram.clone())
                .expect("trace form is positive definite"),
            projector: Arc::new(move |x| a1.cone_projection(x)),
            membership: Arc::new(move |x, tol| {
                let scale = a2
                    .eigenvalues(x)?
                    .iter()
                    .fold(1.0, |m: f64, v| m.max(v.abs()));
                Ok(a2.min_eigenvalue(x)? >= -tol * scale)
            }),
        }
    }

    pub fn nonneg_orthant(n: usize) -> Self {
        Self {
            kind: SetKind::NonnegOrthant,
            metric: Metric::scaled_identity(n, 1.0),
            projector: Arc::new(|x| Ok(x.iter().map(|v| v.max(0.0)).collect())),
            membership: Arc::new(|x, tol| {
                let scale = x.iter().fold(1.0, |m: f64, v| m.max(v.abs()));
                Ok(x.iter().all(|v| *v >= -tol * scale))
            }),
        }
    }

    /// For a closed convex cone `K` and a centred ball `B`,
    /// `Π_{K∩B} = Π_B ∘ Π_K`.
    pub fn cone_ball(alg: &EuclideanJordanAlgebra, radius: f64) -> Self {
        let cone = Self::symmetric_cone(alg);
        let ball = Self::spectral_ball(&cone.metric, radius);
        let (c1, c2, b1, b2) = (cone.clone(), cone.clone(), ball.clone(), ball.clone());
        Self {
            kind: SetKind::ConeBall { radius },
            metric: cone.metric.clone(),
            projector: Arc::new(move |x| b1.project(&c1.project(x)?)),
            membership: Arc::new(move |x, tol| Ok(c2.contains(x, tol)? && b2.contains(x, tol)?)),
        }
    }

    pub fn half_space_spectral(metric: &Metric, normal: &[f64], offset: f64) -> Self {
        let (m1, m2) = (metric.clone(), metric.clone());
        let (n1, n2) = (normal.to_vec(), normal.to_vec());
        let nn = metric.inner(normal, normal);
        Self {
            kind: SetKind::HalfSpaceSpectral {
                normal: normal.to_vec(),
                offset,
            },
            metric: metric.clone(),
            projector: Arc::new(move |x| {
                let excess = m1.inner(&n1, x) - offset;
                if excess <= 0.0 || nn == 0.0 {
                    return Ok(x.to_vec());
                }
                Ok(x.iter()
                    .zip(&n1)
                    .map(|(v, d)| v - excess / nn * d)
                    .collect())
            }),
            membership: Arc::new(move |x, tol| {
                Ok(m2.inner(&n2, x) - offset <= tol * offset.abs().max(1.0))
            }),
        }
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        (self.projector)(x)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        (self.membership)(x, tol)
    }

    /// `‖x − Π(x)‖`.
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        Ok(self.metric.norm(&sub(x, &self.project(x)?)))
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, SetKind::Orbit { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::vector::norm;
    use crate::rng;
    use crate::systems::{make_rn_sort, make_sym_eja};

    fn all_sets() -> Vec<(InvariantSet, usize)> {
        let (alg, sys) = make_sym_eja(3);
        let mut e = vec![0.0; 6];
        e[..3].iter_mut().for_each(|v| *v = 1.0);
        vec![
            (
                InvariantSet::orbit(&sys, &[3.0, 1.0, -2.0, 0.5, 0.0, 1.0]),
                6,
            ),
            (
                InvariantSet::orbit(&make_rn_sort(4), &[4.0, 1.0, 1.0, -2.0]),
                4,
            ),
            (InvariantSet::spectral_ball(sys.metric_v(), 1.5), 6),
            (InvariantSet::symmetric_cone(&alg), 6),
            (InvariantSet::nonneg_orthant(5), 5),
            (InvariantSet::cone_ball(&alg, 1.0), 6),
            (
                InvariantSet::half_space_spectral(sys.metric_v(), &e, 0.5),
                6,
            ),
        ]
    }

    #[test]
    fn projections_are_feasible_and_idempotent() {
        let mut r = rng::seeded(3);
        for (set, d) in all_sets() {
            for _ in 0..100 {
                let x: Vec<f64> = rng::normal_vec(&mut r, d).iter().map(|v| 2.0 * v).collect();
                let p = set.project(&x).unwrap();
                assert!(set.contains(&p, 1e-8).unwrap(), "{:?}", set.kind);
                let pp = set.project(&p).unwrap();
                assert!(
                    norm(&sub(&p, &pp)) <= 1e-8 * norm(&p).max(1.0),
                    "{:?}",
                    set.kind
                );
            }
        }
    }

    #[test]
    fn convex_projections_are_nonexpansive() {
        let mut r = rng::seeded(4);
        for (set, d) in all_sets().into_iter().filter(|(s, _)| s.is_convex()) {
            for _ in 0..100 {
                let x = rng::normal_vec(&mut r, d);
                let y = rng::normal_vec(&mut r, d);
                let (px, py) = (set.project(&x).unwrap(), set.project(&y).unwrap());
                assert!(set.metric.norm(&sub(&px, &py)) <= set.metric.norm(&sub(&x, &y)) + 1e-9);
            }
        }
    }

    #[test]
    fn orbit_projection_is_nearest_among_permutations() {
        let sys = make_rn_sort(4);
        let u = [4.0, 1.0, 0.0, -2.0];
        let set = InvariantSet::orbit(&sys, &u);
        let x = [0.3, -1.0, 2.0, 0.9];
        let p = set.project(&x).unwrap();
        let best = crate::systems::distinct_permutations(&u)
            .into_iter()
            .map(|y| norm(&sub(&x, &y)))
            .fold(f64::INFINITY, f64::min);
        assert!((norm(&sub(&x, &p)) - best).abs() < 1e-12);
    }

    #[test]
    fn orthant_membership() {
        let s = InvariantSet::nonneg_orthant(2);
        assert!(s.contains(&[1.0, 0.0], 1e-9).unwrap());
        assert!(!s.contains(&[1.0, -0.1], 1e-9).unwrap());
        assert_eq!(s.distance(&[3.0, -4.0]).unwrap(), 4.0);
    }
}
