use std::sync::Arc;

use super::constructors::{make_rn_sort, make_rn_sort_scaled, make_spin_eja};
use crate::error::{Error, Result};
use crate::ftvn::{Metric, SemiFtvnSystem};
use crate::numkernel::vector::{axpy, sub};
use crate::numkernel::Matrix;
use crate::rng;

/// Two range points and the preimage residual of their midpoint.
pub type RangeWitness = (Vec<f64>, Vec<f64>, f64);

/// A system restricted to a subspace `U`, in coordinates of a basis that is
/// orthonormal for the parent inner product.
#[derive(Debug, Clone)]
pub struct SubspaceSystem {
    pub parent: SemiFtvnSystem,
    pub basis: Vec<Vec<f64>>,
    pub system: SemiFtvnSystem,
}

impl SubspaceSystem {
    pub fn embed(&self, y: &[f64]) -> Vec<f64> {
        embed(&self.basis, y)
    }

    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|b| self.parent.inner_v(b, x))
            .collect()
    }

    /// Parent-norm distance from `x` to `U`.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.parent
            .norm_v(&sub(x, &self.embed(&self.coordinates(x))))
    }

    /// Distance from `U` to the nearest parent-space point with `λ = w`,
    /// searched over the parent orbit of `w` (`w` must satisfy `λ(w) = w`).
    pub fn preimage_residual(&self, w: &[f64]) -> Result<f64> {
        let orbit = self.parent.enumerate_orbit(w)?;
        Ok(orbit
            .iter()
            .map(|x| self.distance(x))
            .fold(f64::INFINITY, f64::min))
    }

    /// Grid search for two range points of `λ|U` whose midpoint has no
    /// preimage in `U`. Returns `(w1, w2, residual)` for the worst midpoint.
    pub fn range_nonconvexity(&self, grid: &[f64]) -> Result<Option<RangeWitness>> {
        let k = self.basis.len();
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for _ in 0..k {
            points = points
                .into_iter()
                .flat_map(|p| grid.iter().map(move |g| [p.clone(), vec![*g]].concat()))
                .collect();
        }
        let values: Vec<Vec<f64>> = points
            .iter()
            .map(|y| self.system.lambda(y))
            .collect::<Result<_>>()?;
        let mut best: Option<RangeWitness> = None;
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                let mid: Vec<f64> = values[i]
                    .iter()
                    .zip(&values[j])
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                let r = self.preimage_residual(&mid)?;
                if best.as_ref().is_none_or(|(_, _, b)| r > *b) {
                    best = Some((values[i].clone(), values[j].clone(), r));
                }
            }
        }
        Ok(best)
    }
}

fn embed(basis: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; basis[0].len()];
    for (b, c) in basis.iter().zip(y) {
        axpy(*c, b, &mut x);
    }
    x
}

/// Restricts `parent` to `span(basis)`. Orbits are enumerated by intersecting
/// finite parent orbits with `U`.
pub fn restrict_to_subspace(parent: &SemiFtvnSystem, basis: &[Vec<f64>]) -> Result<SubspaceSystem> {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for v in basis {
        if v.len() != parent.dim_v {
            return Err(Error::DimensionMismatch {
                expected: parent.dim_v,
                found: v.len(),
            });
        }
        let original = parent.norm_v(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &ortho {
                let c = parent.inner_v(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let nw = parent.norm_v(&w);
        if original == 0.0 || nw <= 1e-10 * original {
            return Err(Error::DegenerateBasis);
        }
        ortho.push(w.iter().map(|x| x / nw).collect());
    }
    if ortho.is_empty() {
        return Err(Error::DegenerateBasis);
    }
    let k = ortho.len();
    let lam = parent.lambda_fn();
    let b1 = ortho.clone();
    let mut system = SemiFtvnSystem::new(
        format!("{}|subspace:{k}", parent.name),
        Metric::scaled_identity(k, 1.0),
        parent.metric_w().clone(),
        Arc::new(move |y: &[f64]| lam(&embed(&b1, y))),
        Arc::new(move |r| rng::normal_vec(r, k)),
    );
    if parent.enumerator().is_some() {
        let p = parent.clone();
        let b2 = ortho.clone();
        system = system.with_enumerator(Arc::new(move |u: &[f64]| {
            let x = embed(&b2, u);
            let mut out = Vec::new();
            for z in p.enumerate_orbit(&x)? {
                let coords: Vec<f64> = b2.iter().map(|b| p.inner_v(b, &z)).collect();
                let miss = p.norm_v(&sub(&z, &embed(&b2, &coords)));
                if miss <= 1e-9 * p.norm_v(&z).max(1.0) {
                    out.push(coords);
                }
            }
            Ok(out)
        }));
    }
    Ok(SubspaceSystem {
        parent: parent.clone(),
        basis: ortho,
        system,
    })
}

/// `(V, Z, μ∘λ)` from `(V, W, λ)` and `(W, Z, μ)`.
///
/// The orbit of `u` is enumerated when both factors enumerate and the first
/// map is idempotent on its range (`λ(w) = w` for `w` in the range), which
/// holds for the sorting maps.
pub fn compose_systems(sys1: &SemiFtvnSystem, sys2: &SemiFtvnSystem) -> Result<SemiFtvnSystem> {
    if sys1.dim_w != sys2.dim_v {
        return Err(Error::DimensionMismatch {
            expected: sys1.dim_w,
            found: sys2.dim_v,
        });
    }
    let (l1, l2) = (sys1.lambda_fn(), sys2.lambda_fn());
    let mut sys = SemiFtvnSystem::new(
        format!("{}∘{}", sys2.name, sys1.name),
        sys1.metric_v().clone(),
        sys2.metric_w().clone(),
        Arc::new(move |x: &[f64]| l2(&l1(x)?)),
        sys1.sampler(),
    );
    if sys1.enumerator().is_some() && sys2.enumerator().is_some() && sys1.dim_v == sys1.dim_w {
        let (s1, s2) = (sys1.clone(), sys2.clone());
        sys = sys.with_enumerator(Arc::new(move |u: &[f64]| {
            let mut out: Vec<Vec<f64>> = Vec::new();
            for w in s2.enumerate_orbit(&s1.lambda(u)?)? {
                let lw = s1.lambda(&w)?;
                if s1.norm_w(&sub(&lw, &w)) > 1e-12 * s1.norm_w(&w).max(1.0) {
                    continue;
                }
                for x in s1.enumerate_orbit(&w)? {
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
            Ok(out)
        }));
    }
    Ok(sys)
}

/// Direct sum `(V₁⊕V₂, W₁⊕W₂, λ₁×λ₂)`.
pub fn product_systems(sys1: &SemiFtvnSystem, sys2: &SemiFtvnSystem) -> SemiFtvnSystem {
    let dv1 = sys1.dim_v;
    let (l1, l2) = (sys1.lambda_fn(), sys2.lambda_fn());
    let (r1, r2) = (sys1.sampler(), sys2.sampler());
    let gv = Matrix::block_diag(sys1.metric_v().gram(), sys2.metric_v().gram());
    let gw = Matrix::block_diag(sys1.metric_w().gram(), sys2.metric_w().gram());
    let mut sys = SemiFtvnSystem::new(
        format!("{}×{}", sys1.name, sys2.name),
        Metric::from_gram(gv).expect("block sum of positive definite Grams"),
        Metric::from_gram(gw).expect("block sum of positive definite Grams"),
        Arc::new(move |x: &[f64]| Ok([l1(&x[..dv1])?, l2(&x[dv1..])?].concat())),
        Arc::new(move |r| [r1(r), r2(r)].concat()),
    );
    if sys1.enumerator().is_some() && sys2.enumerator().is_some() {
        let (s1, s2) = (sys1.clone(), sys2.clone());
        sys = sys.with_enumerator(Arc::new(move |u: &[f64]| {
            let a = s1.enumerate_orbit(&u[..dv1])?;
            let b = s2.enumerate_orbit(&u[dv1..])?;
            Ok(a.iter()
                .flat_map(|p| b.iter().map(move |q| [p.clone(), q.clone()].concat()))
                .collect())
        }));
    }
    if sys1.has_orbit_access() && sys2.has_orbit_access() {
        let (s1, s2) = (sys1.clone(), sys2.clone());
        sys = sys.with_maximizer(Arc::new(move |c: &[f64], u: &[f64]| {
            Ok([
                s1.orbit_argmax(&c[..dv1], &u[..dv1])?,
                s2.orbit_argmax(&c[dv1..], &u[dv1..])?,
            ]
            .concat())
        }));
    }
    sys
}

/// Sorting on `ℝ³` restricted to the plane spanned by `(1,1,1)` and `(3,1,0)`.
pub fn make_plane_subspace_system() -> SubspaceSystem {
    let sub = restrict_to_subspace(
        &make_rn_sort(3),
        &[vec![1.0, 1.0, 1.0], vec![3.0, 1.0, 0.0]],
    )
    .expect("independent spanning vectors");
    SubspaceSystem {
        system: sub.system.clone().with_name("subspace_ex59"),
        ..sub
    }
}

/// Sorting on `ℝ²` followed by the spin eigenvalue map, both with the inner
/// product `2⟨·,·⟩` on their domains.
pub fn make_sort_spin_composition() -> SemiFtvnSystem {
    let (_, spin) = make_spin_eja(2, 2.0);
    compose_systems(&make_rn_sort_scaled(2, 2.0), &spin)
        .expect("matching dimensions")
        .with_name("compose_ex43")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::constructors::make_norm_system;

    #[test]
    fn full_space_restriction_reproduces_parent() {
        let parent = make_rn_sort(3);
        let basis = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let s = restrict_to_subspace(&parent, &basis).unwrap();
        let x = [0.3, -1.0, 2.0];
        assert_eq!(s.system.lambda(&x).unwrap(), parent.lambda(&x).unwrap());
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let parent = make_rn_sort(2);
        let r = restrict_to_subspace(&parent, &[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(r, Err(Error::DegenerateBasis)));
    }

    #[test]
    fn composition_values() {
        let s = make_sort_spin_composition();
        assert_eq!(s.lambda(&[1.0, -1.0]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(s.lambda(&[-1.0, 2.0]).unwrap(), vec![3.0, 1.0]);
        let mut orbit = s.enumerate_orbit(&[-1.0, 2.0]).unwrap();
        orbit.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            orbit,
            vec![
                vec![-1.0, 2.0],
                vec![1.0, 2.0],
                vec![2.0, -1.0],
                vec![2.0, 1.0]
            ]
        );
    }

    #[test]
    fn composition_dimension_check() {
        assert!(compose_systems(&make_rn_sort(3), &make_rn_sort(2)).is_err());
    }

    #[test]
    fn product_lambda_concatenates() {
        let p = product_systems(&make_rn_sort(2), &make_norm_system(2));
        assert_eq!(
            p.lambda(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            vec![2.0, 1.0, 5.0]
        );
    }
}
