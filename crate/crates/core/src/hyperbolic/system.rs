use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::polynomial::{Family, HyperbolicPolynomial};
use crate::error::{Error, Result};
use crate::ftvn::{strong_gap, summarize, CheckReport, Metric, Sample, SemiFtvnSystem, Status};
use crate::numkernel::optimize::{nelder_mead, NelderMeadOptions};
use crate::numkernel::vector::{add, norm, scale, sorted_desc, sub};
use crate::numkernel::{sym_eig, Matrix};
use crate::rng;
use crate::systems::eja::{smat, svec};
use crate::systems::rearrangement;

/// Default root-merging tolerance for eigenvalue maps.
pub const EIG_TOL: f64 = 1e-9;

/// A complete hyperbolic polynomial with its polarization inner product.
#[derive(Debug, Clone)]
pub struct HyperbolicSystem {
    pub poly: HyperbolicPolynomial,
    pub induced_gram: Matrix,
    system: SemiFtvnSystem,
}

pub fn polarization_inner(p: &HyperbolicPolynomial, x: &[f64], y: &[f64]) -> Result<f64> {
    let plus = norm(&p.eigmap(&add(x, y), EIG_TOL)?);
    let minus = norm(&p.eigmap(&sub(x, y), EIG_TOL)?);
    Ok(0.25 * (plus * plus - minus * minus))
}

impl HyperbolicSystem {
    /// Assembles the polarization Gram matrix; fails with
    /// [`Error::NotPositiveDefinite`] when the polynomial is not complete.
    pub fn new(poly: HyperbolicPolynomial, name: impl Into<String>) -> Result<Self> {
        let d = poly.dim;
        let basis = |i: usize| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        };
        let mut gram = Matrix::zeros(d, d);
        for i in 0..d {
            let li = poly.eigmap(&basis(i), EIG_TOL)?;
            gram[(i, i)] = li.iter().map(|v| v * v).sum();
            for j in (i + 1)..d {
                let g = polarization_inner(&poly, &basis(i), &basis(j))?;
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        // entries that are zero up to interpolation noise
        let big = gram.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..d {
            for j in 0..d {
                if gram[(i, j)].abs() <= 1e-11 * big {
                    gram[(i, j)] = 0.0;
                }
            }
        }
        let metric = Metric::from_gram(gram.clone())
            .map_err(|_| Error::NotPositiveDefinite("polarization Gram matrix"))?;
        let n = poly.degree;
        let p = poly.clone();
        let mut system = SemiFtvnSystem::new(
            name,
            metric,
            Metric::scaled_identity(n, 1.0),
            Arc::new(move |x: &[f64]| p.eigmap(x, EIG_TOL)),
            Arc::new(move |r| rng::normal_vec(r, d)),
        );
        match poly.family {
            Some(Family::Product) => {
                system =
                    system.with_maximizer(Arc::new(|c: &[f64], u: &[f64]| Ok(rearrangement(c, u))));
            }
            Some(Family::Spin) => {
                system = system.with_maximizer(Arc::new(|c: &[f64], u: &[f64]| {
                    let (cb, ub) = (norm(&c[1..]), norm(&u[1..]));
                    let mut x = vec![u[0]];
                    if cb == 0.0 {
                        x.extend_from_slice(&u[1..]);
                    } else {
                        x.extend(c[1..].iter().map(|v| v * ub / cb));
                    }
                    Ok(x)
                }));
            }
            Some(Family::Det) => {
                system = system.with_maximizer(Arc::new(move |c: &[f64], u: &[f64]| {
                    let qc = sym_eig(&smat(c, n), 1e-9)?.vectors;
                    let lu = sym_eig(&smat(u, n), 1e-9)?.values;
                    Ok(svec(&(&(&qc * &Matrix::diag(&lu)) * &qc.transpose())))
                }));
            }
            None => {}
        }
        Ok(Self {
            poly,
            induced_gram: gram,
            system,
        })
    }

    pub fn system(&self) -> &SemiFtvnSystem {
        &self.system
    }

    pub fn eigmap(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.poly.eigmap(x, EIG_TOL)
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.induced_gram.bilinear(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeMembership {
    Interior,
    Boundary,
    Outside,
}

pub fn cone_membership(p: &HyperbolicPolynomial, x: &[f64], tol: f64) -> Result<ConeMembership> {
    let lmin = p.eigmap(x, EIG_TOL)?.last().copied().unwrap_or(0.0);
    Ok(if lmin > tol {
        ConeMembership::Interior
    } else if lmin >= -tol {
        ConeMembership::Boundary
    } else {
        ConeMembership::Outside
    })
}

/// Searches the unit sphere for a point with `λ(x) = 0`. Built-in families
/// pass without search. `max_residual` is the smallest `‖λ(x)‖` found on
/// the sphere, and the check fails when it drops below `√tol`.
pub fn completeness_check(
    p: &HyperbolicPolynomial,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    if p.family.is_some() {
        return Ok(CheckReport {
            check_name: "completeness".into(),
            status: Status::Pass,
            max_residual: 0.0,
            witness: None,
            samples: 0,
            seed,
            tol,
        });
    }
    let mut rng = rng::stream("completeness", seed);
    let starts: Vec<Vec<f64>> = (0..samples.clamp(1, 32))
        .map(|_| rng::normal_vec(&mut rng, p.dim))
        .collect();
    let objective = |x: &[f64]| -> f64 {
        let nx = norm(x);
        if nx == 0.0 {
            return f64::INFINITY;
        }
        match p.eigmap(&scale(1.0 / nx, x), EIG_TOL) {
            Ok(l) => norm(&l),
            Err(_) => f64::INFINITY,
        }
    };
    let runs: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|x0| {
            let r = nelder_mead(
                objective,
                x0,
                NelderMeadOptions {
                    max_iter: 1500,
                    ..Default::default()
                },
            );
            (r.value, scale(1.0 / norm(&r.x), &r.x))
        })
        .collect();
    let (best, witness) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one start");
    let failed = best < tol.sqrt();
    Ok(CheckReport {
        check_name: "completeness".into(),
        status: if failed { Status::Fail } else { Status::Pass },
        max_residual: best,
        witness: failed.then(|| vec![witness]),
        samples: starts.len() as u64,
        seed,
        tol,
    })
}

/// `u ≺ v`: descending partial sums of `u` dominated by those of `v`, with
/// equal totals.
pub fn majorization_leq(u: &[f64], v: &[f64], tol: f64) -> bool {
    majorization_excess(u, v) <= tol * (1.0 + norm(u) + norm(v))
}

/// Largest violation of the majorization inequalities.
pub fn majorization_excess(u: &[f64], v: &[f64]) -> f64 {
    let (us, vs) = (sorted_desc(u), sorted_desc(v));
    let (mut su, mut sv) = (0.0, 0.0);
    let mut worst = 0.0_f64;
    for (a, b) in us.iter().zip(&vs) {
        su += a;
        sv += b;
        worst = worst.max(su - sv);
    }
    worst.max((su - sv).abs())
}

/// `λ(x) − λ(y) ≺ λ(x − y)` on sampled pairs.
pub fn lidskii_check(
    hs: &HyperbolicSystem,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let sys = hs.system();
    let mut rng = rng::stream("lidskii", seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..samples.max(1))
        .map(|_| (sys.sample(&mut rng), sys.sample(&mut rng)))
        .collect();
    let evaluated: Vec<Sample> = pairs
        .par_iter()
        .map(|(x, y)| {
            let d = sub(&hs.eigmap(x)?, &hs.eigmap(y)?);
            let l = hs.eigmap(&sub(x, y))?;
            Ok(Sample {
                residual: majorization_excess(&d, &l),
                bound: tol * (1.0 + norm(&d) + norm(&l)),
                inputs: vec![x.clone(), y.clone()],
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize("lidskii", &evaluated, seed, tol))
}

/// Both sides of the characterization: the strong-commutativity gap and
/// `d = ‖[λa − λb]↓ − λ(a − b)‖`. Since `‖λ(a−b)‖² − ‖λa − λb‖² = 2·gap`,
/// `d·(‖λa − λb‖ + ‖λ(a−b)‖) ≥ 2·gap`, so the spectral side is tested on
/// that product against twice the gap bound.
#[derive(Debug, Clone)]
pub struct CharacterizationOutcome {
    pub strong: bool,
    pub spectral: bool,
    pub gap: f64,
    pub spectral_residual: f64,
    pub report: CheckReport,
}

pub fn strong_commute_char(
    hs: &HyperbolicSystem,
    a: &[f64],
    b: &[f64],
    tol: f64,
) -> Result<CharacterizationOutcome> {
    let sys = hs.system();
    let gap = strong_gap(sys, a, b, tol)?;
    let s = sorted_desc(&sub(&hs.eigmap(a)?, &hs.eigmap(b)?));
    let l = hs.eigmap(&sub(a, b))?;
    let spectral_residual = norm(&sub(&s, &l));
    let bound = tol * (sys.norm_v(a) * sys.norm_v(b)).max(1.0);
    let strong = gap <= bound;
    let spectral = spectral_residual * (norm(&s) + norm(&l)) <= 2.0 * bound;
    let agree = strong == spectral;
    Ok(CharacterizationOutcome {
        strong,
        spectral,
        gap,
        spectral_residual,
        report: CheckReport {
            check_name: "strong_commute_char".into(),
            status: if agree { Status::Pass } else { Status::Fail },
            max_residual: gap.max(spectral_residual),
            witness: (!agree).then(|| vec![a.to_vec(), b.to_vec()]),
            samples: 1,
            seed: 0,
            tol,
        },
    })
}

/// Agreement of the two sides of [`strong_commute_char`] on random pairs
/// and, for every other sample, on a constructed strongly commuting pair
/// `(a, argmax_{x ∈ [u]} ⟨a, x⟩)`.
pub fn characterization_battery(
    hs: &HyperbolicSystem,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let sys = hs.system();
    let mut rng = rng::stream("strong_commute_char", seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>, bool)> = (0..samples.max(1))
        .map(|i| (sys.sample(&mut rng), sys.sample(&mut rng), i % 2 == 1))
        .collect();
    let evaluated: Vec<Sample> = pairs
        .par_iter()
        .map(|(a, u, construct)| {
            let b = if *construct {
                sys.orbit_argmax(a, u)?
            } else {
                u.clone()
            };
            let out = strong_commute_char(hs, a, &b, tol)?;
            Ok(Sample {
                residual: if out.strong == out.spectral { 0.0 } else { 1.0 },
                bound: 0.5,
                inputs: vec![a.clone(), b],
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize("strong_commute_char", &evaluated, seed, tol))
}
