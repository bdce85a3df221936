//! Real roots of univariate polynomials whose roots are all real.
//!
//! For a real-rooted polynomial every derivative is real-rooted too, and the
//! roots of `q⁽ᵏ⁾` interlace those of `q⁽ᵏ⁺¹⁾`. Walking down from the linear
//! derivative, each root of `q⁽ᵏ⁾` is found on an interval between
//! consecutive roots of `q⁽ᵏ⁺¹⁾` where `q⁽ᵏ⁾` is monotone: by bisection if it
//! changes sign there, otherwise at the endpoint where it is smallest. A
//! root of multiplicity `m` is thus located as a simple root of `q⁽ᵐ⁻¹⁾`,
//! which keeps clustered roots accurate to the coefficient noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense polynomial `Σ coeffs[k]·tᵏ` with nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariatePolynomial {
    coeffs: Vec<f64>,
}

impl UnivariatePolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if *c != 0.0 && c.is_finite() => {}
            _ => {
                return Err(Error::InvalidPolynomial(
                    "leading coefficient must be nonzero".into(),
                ))
            }
        }
        if !coeffs.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidPolynomial(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial `Π (t − rᵢ)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        Self {
            coeffs: poly_from_roots(roots),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.coeffs, t)
    }

    /// Sum of absolute coefficient values, the scale used for residuals.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * t + a)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| k as f64 * a)
        .collect()
}

fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= r * a;
        }
        c = next;
    }
    c
}

/// Rounding level of `f(s)` when the coefficients carry relative noise.
fn noise_level(f: &[f64], s: f64) -> f64 {
    let r = s.abs().max(1.0);
    let magnitude: f64 = f
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * r.powi(k as i32))
        .sum();
    let n = f.len() as f64;
    16.0 * n * f64::EPSILON * magnitude
}

/// Root of `f` on `[a, b]`, where `f` is monotone. Endpoint values at the
/// rounding level count as zeros, so multiple roots are not split by noise.
fn monotone_root(f: &[f64], a: f64, b: f64) -> f64 {
    if a >= b {
        return a;
    }
    let (mut fa, mut fb) = (horner(f, a), horner(f, b));
    if fa.abs() <= noise_level(f, a) {
        fa = 0.0;
    }
    if fb.abs() <= noise_level(f, b) {
        fb = 0.0;
    }
    if fa == 0.0 && fb == 0.0 {
        return if horner(f, a).abs() <= horner(f, b).abs() {
            a
        } else {
            b
        };
    }
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if (fa > 0.0) == (fb > 0.0) {
        return if fa.abs() <= fb.abs() { a } else { b };
    }
    let (mut lo, mut hi) = (a, b);
    let lo_positive = fa > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = horner(f, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton refinement of a root of multiplicity `mult` on the derivative of
/// order `mult − 1`, staying within `radius` of the start.
fn polish(p: &[f64], root: f64, mult: usize, radius: f64) -> f64 {
    let mut d = p.to_vec();
    for _ in 1..mult {
        d = derivative(&d);
    }
    let dd = derivative(&d);
    let mut x = root;
    let mut fx = horner(&d, x).abs();
    for _ in 0..30 {
        let slope = horner(&dd, x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - horner(&d, x) / slope;
        if !next.is_finite() || (next - root).abs() > radius {
            break;
        }
        let fnext = horner(&d, next).abs();
        if fnext >= fx {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}

/// Relative size of the residual `|p(s)|` against the magnitude of the
/// terms of `p` at scale `max(|s|, spread)`.
fn relative_residual(p: &[f64], s: f64, spread: f64) -> f64 {
    let r = s.abs().max(spread);
    let magnitude: f64 = p
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * r.powi(k as i32))
        .sum();
    horner(p, s).abs() / magnitude.max(f64::MIN_POSITIVE)
}

/// All `n` real roots of `q`, with multiplicity, in non-increasing order.
///
/// The caller guarantees that `q` is real-rooted. A root whose residual is
/// not negligible shows that it is not, and the function fails with
/// [`Error::RootCountMismatch`]. Roots closer than `tol·(1 + |root|)` are
/// reported as one multiple root.
pub fn real_roots(q: &UnivariatePolynomial, tol: f64) -> Result<Vec<f64>> {
    const RESIDUAL_TOL: f64 = 1e-7;
    let n = q.degree();
    let c = q.coeffs();
    let lead = c[n];
    let a: Vec<f64> = c.iter().map(|x| x / lead).collect();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-a[0]]),
        _ => {}
    }

    // Laguerre–Samuelson: every root lies in mean ± σ·sqrt(n − 1)
    let nf = n as f64;
    let mean = -a[n - 1] / nf;
    let sum_sq = a[n - 1] * a[n - 1] - 2.0 * a[n - 2];
    let spread_ref = 1.0 + mean.abs() + (sum_sq.abs() / nf).sqrt();
    let var = sum_sq / nf - mean * mean;
    if var < -1e-8 * spread_ref * spread_ref {
        return Err(Error::RootCountMismatch {
            found: 0,
            expected: n,
        });
    }
    let radius = (var.max(0.0) * (nf - 1.0)).sqrt();
    if radius == 0.0 {
        return Ok(vec![mean; n]);
    }

    // p(s) = q(mean + s)
    let mut p = vec![0.0; n + 1];
    let mut work = a.clone();
    let mut fact = 1.0;
    for (k, slot) in p.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *slot = horner(&work, mean) / fact;
        work = derivative(&work);
    }
    p[n] = 1.0;
    p[n - 1] = 0.0;

    let mut ladder = vec![p.clone()];
    for _ in 1..n {
        let next = derivative(ladder.last().unwrap());
        ladder.push(next);
    }
    let bound = radius * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let linear = &ladder[n - 1];
    let mut roots = vec![(-linear[0] / linear[1]).clamp(-bound, bound)];
    for k in (0..n - 1).rev() {
        let mut ends = Vec::with_capacity(roots.len() + 2);
        ends.push(-bound);
        ends.extend(roots.iter().copied());
        ends.push(bound);
        roots = ends
            .windows(2)
            .map(|w| monotone_root(&ladder[k], w[0], w[1]))
            .collect();
    }

    // clusters within tolerance become one multiple root
    let to_t = |s: f64| mean + s;
    let mut out: Vec<f64> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n
            && (to_t(roots[j]) - to_t(roots[j - 1])).abs() <= tol * (1.0 + to_t(roots[j]).abs())
        {
            j += 1;
        }
        let m = j - i;
        let centre = roots[i..j].iter().sum::<f64>() / m as f64;
        let reach = (roots[j - 1] - roots[i]).abs() + tol * (1.0 + to_t(centre).abs());
        let r = if m == 1 {
            roots[i]
        } else {
            polish(&p, centre, m, reach)
        };
        if relative_residual(&p, r, radius) > RESIDUAL_TOL {
            return Err(Error::RootCountMismatch {
                found: out.len(),
                expected: n,
            });
        }
        out.extend(std::iter::repeat_n(to_t(r), m));
        i = j;
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn factored_quadratic() {
        let q = UnivariatePolynomial::new(vec![2.0, -3.0, 1.0]).unwrap();
        let r = real_roots(&q, 1e-9).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triple_root() {
        let q = UnivariatePolynomial::new(vec![-125.0, 75.0, -15.0, 1.0]).unwrap();
        let r = real_roots(&q, 1e-9).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| (x - 5.0).abs() < 1e-6));
    }

    #[test]
    fn double_root_with_simple_root() {
        let q = UnivariatePolynomial::from_roots(&[3.0, -1.0, -1.0]);
        let r = real_roots(&q, 1e-9).unwrap();
        assert!((r[0] - 3.0).abs() < 1e-10);
        assert!(
            (r[1] + 1.0).abs() < 1e-8 && (r[2] + 1.0).abs() < 1e-8,
            "{r:?}"
        );
    }

    #[test]
    fn non_real_rooted_inputs_are_rejected() {
        let q = UnivariatePolynomial::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            real_roots(&q, 1e-9),
            Err(Error::RootCountMismatch { .. })
        ));
        // (t − 10)(t + 10)(t² + 1)
        let q = UnivariatePolynomial::new(vec![-100.0, 0.0, -99.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            real_roots(&q, 1e-9),
            Err(Error::RootCountMismatch { .. })
        ));
    }

    #[test]
    fn linear_and_constant() {
        let q = UnivariatePolynomial::new(vec![4.0, -2.0]).unwrap();
        assert_eq!(real_roots(&q, 1e-9).unwrap(), vec![2.0]);
        let q = UnivariatePolynomial::new(vec![3.0]).unwrap();
        assert!(real_roots(&q, 1e-9).unwrap().is_empty());
        assert!(UnivariatePolynomial::new(vec![1.0, 0.0]).is_err());
    }

    /// Roots in [−10, 10] with pairwise separation at least 0.5.
    fn separated_roots(r: &mut rng::Rng, n: usize) -> Vec<f64> {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| rng::uniform(r, -10.0, 10.0)).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            if v.windows(2).all(|w| w[0] - w[1] >= 0.5) {
                return v;
            }
        }
    }

    #[test]
    fn construct_then_recover() {
        let mut r = rng::seeded(17);
        for _ in 0..1000 {
            let truth = separated_roots(&mut r, 5);
            let q = UnivariatePolynomial::from_roots(&truth);
            let got = real_roots(&q, 1e-9).unwrap();
            for (a, b) in got.iter().zip(&truth) {
                assert!((a - b).abs() < 1e-8, "{got:?} vs {truth:?}");
            }
            for g in &got {
                assert!(q.eval(*g).abs() <= 1e-9 * q.scale());
            }
        }
    }
}
