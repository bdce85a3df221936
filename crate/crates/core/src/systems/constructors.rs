use std::sync::Arc;

use super::eja::{smat, sym_dim, EuclideanJordanAlgebra};
use crate::ftvn::{Metric, SemiFtvnSystem};
use crate::numkernel::vector::{norm, scale, sort_desc, sorted_desc};
use crate::numkernel::{svd, sym_eig, Matrix, Svd};
use crate::rng;

/// Distinct permutations of `u`, in lexicographic order of the ascending
/// rearrangement.
pub fn distinct_permutations(u: &[f64]) -> Vec<Vec<f64>> {
    let mut cur: Vec<f64> = u.to_vec();
    cur.sort_by(|a, b| a.total_cmp(b));
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Places `u↓` on the positions of `c` ordered by decreasing value.
pub fn rearrangement(c: &[f64], u: &[f64]) -> Vec<f64> {
    let (_, perm) = sort_desc(c);
    let us = sorted_desc(u);
    let mut x = vec![0.0; c.len()];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = us[k];
    }
    x
}

/// `ℝⁿ` with inner product `s·⟨·,·⟩` on both sides and `λ(x) = x↓`.
pub fn make_rn_sort_scaled(n: usize, s: f64) -> SemiFtvnSystem {
    let name = if s == 1.0 {
        format!("rn_sort:{n}")
    } else {
        format!("rn_sort:{n}:scale={s}")
    };
    let mut sys = SemiFtvnSystem::new(
        name,
        Metric::scaled_identity(n, s),
        Metric::scaled_identity(n, s),
        Arc::new(|x: &[f64]| Ok(sorted_desc(x))),
        Arc::new(move |r| rng::normal_vec(r, n)),
    )
    .with_maximizer(Arc::new(|c: &[f64], u: &[f64]| Ok(rearrangement(c, u))));
    if n <= 8 {
        sys = sys.with_enumerator(Arc::new(|u: &[f64]| Ok(distinct_permutations(u))));
    }
    sys
}

pub fn make_rn_sort(n: usize) -> SemiFtvnSystem {
    make_rn_sort_scaled(n, 1.0)
}

/// `λ(x) = ‖x‖` from `ℝⁿ` to `ℝ`.
pub fn make_norm_system(n: usize) -> SemiFtvnSystem {
    let sys = SemiFtvnSystem::new(
        format!("norm:{n}"),
        Metric::scaled_identity(n, 1.0),
        Metric::scaled_identity(1, 1.0),
        Arc::new(|x: &[f64]| Ok(vec![norm(x)])),
        Arc::new(move |r| rng::normal_vec(r, n)),
    )
    .with_maximizer(Arc::new(|c: &[f64], u: &[f64]| {
        let nc = norm(c);
        Ok(if nc == 0.0 {
            u.to_vec()
        } else {
            scale(norm(u) / nc, c)
        })
    }));
    if n == 1 {
        sys.with_enumerator(Arc::new(|u: &[f64]| Ok(signed_pair(u[0]))))
    } else {
        sys
    }
}

fn signed_pair(v: f64) -> Vec<Vec<f64>> {
    if v == 0.0 {
        vec![vec![0.0]]
    } else {
        vec![vec![v.abs()], vec![-v.abs()]]
    }
}

/// `λ(x) = |x|` on `ℝ`.
pub fn make_abs_system() -> SemiFtvnSystem {
    SemiFtvnSystem::new(
        "abs",
        Metric::scaled_identity(1, 1.0),
        Metric::scaled_identity(1, 1.0),
        Arc::new(|x: &[f64]| Ok(vec![x[0].abs()])),
        Arc::new(|r| rng::normal_vec(r, 1)),
    )
    .with_enumerator(Arc::new(|u: &[f64]| Ok(signed_pair(u[0]))))
}

/// Sⁿ with the trace inner product and descending eigenvalues.
pub fn make_sym_eja(n: usize) -> (EuclideanJordanAlgebra, SemiFtvnSystem) {
    let alg = EuclideanJordanAlgebra::symmetric(n);
    let d = sym_dim(n);
    let sys = SemiFtvnSystem::new(
        format!("sym_eja:{n}"),
        Metric::scaled_identity(d, 1.0),
        Metric::scaled_identity(n, 1.0),
        Arc::new(move |x: &[f64]| Ok(sym_eig(&smat(x, n), 1e-9)?.values)),
        Arc::new(move |r| rng::normal_vec(r, d)),
    )
    .with_maximizer(Arc::new(move |c: &[f64], u: &[f64]| {
        let qc = sym_eig(&smat(c, n), 1e-9)?.vectors;
        let lu = sym_eig(&smat(u, n), 1e-9)?.values;
        let x = &(&qc * &Matrix::diag(&lu)) * &qc.transpose();
        Ok(super::eja::svec(&x))
    }));
    (alg, sys)
}

/// Jordan spin algebra on `ℝⁿ`; the inner product is `scale·⟨·,·⟩`, and the
/// axioms hold for `scale = 2` (the trace inner product).
pub fn make_spin_eja(n: usize, s: f64) -> (EuclideanJordanAlgebra, SemiFtvnSystem) {
    let alg = EuclideanJordanAlgebra::spin(n);
    let name = if s == 2.0 {
        format!("spin:{n}")
    } else {
        format!("spin:{n}:scale={s}")
    };
    let mut sys = SemiFtvnSystem::new(
        name,
        Metric::scaled_identity(n, s),
        Metric::scaled_identity(2, 1.0),
        Arc::new(|x: &[f64]| {
            let r = norm(&x[1..]);
            Ok(vec![x[0] + r, x[0] - r])
        }),
        Arc::new(move |r| rng::normal_vec(r, n)),
    )
    .with_maximizer(Arc::new(|c: &[f64], u: &[f64]| {
        let (cb, ub) = (norm(&c[1..]), norm(&u[1..]));
        let mut x = vec![u[0]];
        if cb == 0.0 {
            x.extend_from_slice(&u[1..]);
        } else {
            x.extend(c[1..].iter().map(|v| v * ub / cb));
        }
        Ok(x)
    }));
    if n == 2 {
        sys = sys.with_enumerator(Arc::new(|u: &[f64]| {
            Ok(signed_pair(u[1])
                .into_iter()
                .map(|b| vec![u[0], b[0]])
                .collect())
        }));
    }
    (alg, sys)
}

/// `M_{m,n}` (row-major coordinates) with the trace inner product and
/// descending singular values.
pub fn make_singular_value_system(m: usize, n: usize) -> SemiFtvnSystem {
    let k = m.min(n);
    let as_matrix = move |x: &[f64]| Matrix::from_row_major(m, n, x.to_vec());
    SemiFtvnSystem::new(
        format!("svd:{m}x{n}"),
        Metric::scaled_identity(m * n, 1.0),
        Metric::scaled_identity(k, 1.0),
        Arc::new(move |x: &[f64]| Ok(svd(&as_matrix(x)?, 1e-12)?.singular_values)),
        Arc::new(move |r| rng::normal_vec(r, m * n)),
    )
    .with_maximizer(Arc::new(move |c: &[f64], u: &[f64]| {
        let dc = svd(&as_matrix(c)?, 1e-12)?;
        let su = svd(&as_matrix(u)?, 1e-12)?.singular_values;
        let x = &(&dc.u * &Svd::rect_diag(m, n, &su)) * &dc.v.transpose();
        Ok(x.into_vec())
    }))
}
