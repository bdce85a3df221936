use rayon::prelude::*;

use super::report::{summarize, CheckReport, Sample};
use super::system::SemiFtvnSystem;
use crate::error::Result;
use crate::numkernel::vector::{add, scale, sub};
use crate::rng::{self, Rng};

fn draw(sys: &SemiFtvnSystem, rng: &mut Rng, count: usize, arity: usize) -> Vec<Vec<Vec<f64>>> {
    (0..count)
        .map(|_| (0..arity).map(|_| sys.sample(rng)).collect())
        .collect()
}

/// Tolerance bound in mixed absolute/relative form.
fn bound(tol: f64, scale: f64) -> f64 {
    tol * scale.max(1.0)
}

/// Reports for the two axioms and the Cauchy–Schwarz chain.
#[derive(Debug, Clone)]
pub struct AxiomReports {
    pub a1: CheckReport,
    pub a2: CheckReport,
    pub cauchy_schwarz: CheckReport,
}

impl AxiomReports {
    pub fn combined(&self) -> CheckReport {
        CheckReport::merge("axioms", &self.all())
    }

    pub fn all(&self) -> Vec<CheckReport> {
        vec![
            self.a1.clone(),
            self.a2.clone(),
            self.cauchy_schwarz.clone(),
        ]
    }
}

/// Samples pairs `(x, y)` and measures `|‖λx‖ − ‖x‖|`, the positive part of
/// `⟨x,y⟩ − ⟨λx,λy⟩` and the positive part of `⟨λx,λy⟩ − ‖x‖‖y‖`.
pub fn check_axioms(
    sys: &SemiFtvnSystem,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<AxiomReports> {
    let mut rng = rng::stream("axioms", seed);
    let pairs = draw(sys, &mut rng, samples.max(1), 2);
    let evaluated: Vec<[Sample; 3]> = pairs
        .par_iter()
        .map(|p| {
            let (x, y) = (&p[0], &p[1]);
            let (lx, ly) = (sys.lambda(x)?, sys.lambda(y)?);
            let (nx, ny) = (sys.norm_v(x), sys.norm_v(y));
            let inner = sys.inner_v(x, y);
            let lifted = sys.inner_w(&lx, &ly);
            let a1 = Sample {
                residual: (sys.norm_w(&lx) - nx).abs(),
                bound: bound(tol, nx),
                inputs: vec![x.clone()],
            };
            let a2 = Sample {
                residual: (inner - lifted).max(0.0),
                bound: bound(tol, nx * ny),
                inputs: p.clone(),
            };
            let cs = Sample {
                residual: (lifted - nx * ny).max(0.0),
                bound: bound(tol, nx * ny),
                inputs: p.clone(),
            };
            Ok([a1, a2, cs])
        })
        .collect::<Result<_>>()?;
    let column = |k: usize| -> Vec<Sample> { evaluated.iter().map(|s| s[k].clone()).collect() };
    Ok(AxiomReports {
        a1: summarize("axioms.a1", &column(0), seed, tol),
        a2: summarize("axioms.a2", &column(1), seed, tol),
        cauchy_schwarz: summarize("axioms.cauchy_schwarz", &column(2), seed, tol),
    })
}

#[derive(Debug, Clone)]
pub struct LambdaPropertyReports {
    pub homogeneity: CheckReport,
    pub lipschitz: CheckReport,
    pub subadditivity: CheckReport,
}

impl LambdaPropertyReports {
    pub fn combined(&self) -> CheckReport {
        CheckReport::merge("lambda_properties", &self.all())
    }

    pub fn all(&self) -> Vec<CheckReport> {
        vec![
            self.homogeneity.clone(),
            self.lipschitz.clone(),
            self.subadditivity.clone(),
        ]
    }
}

/// Positive homogeneity, the 1-Lipschitz bound and `‖λ(x+y)‖ ≤ ‖λx+λy‖`.
/// The first two samples use the scales `α = 0` and `α = 2`.
pub fn lambda_properties(
    sys: &SemiFtvnSystem,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<LambdaPropertyReports> {
    let mut rng = rng::stream("lambda_properties", seed);
    let count = samples.max(1);
    let pairs = draw(sys, &mut rng, count, 2);
    let alphas: Vec<f64> = (0..count)
        .map(|i| match i {
            0 => 0.0,
            1 => 2.0,
            _ => rng::uniform(&mut rng, 0.0, 3.0),
        })
        .collect();
    let evaluated: Vec<[Sample; 3]> = pairs
        .par_iter()
        .zip(alphas.par_iter())
        .map(|(p, &alpha)| {
            let (x, y) = (&p[0], &p[1]);
            let (lx, ly) = (sys.lambda(x)?, sys.lambda(y)?);
            let l_alpha = sys.lambda(&scale(alpha, x))?;
            let homog = Sample {
                residual: sys.norm_w(&sub(&l_alpha, &scale(alpha, &lx))),
                bound: bound(tol, alpha * sys.norm_v(x)),
                inputs: vec![x.clone(), vec![alpha]],
            };
            let d = sys.norm_v(&sub(x, y));
            let lip = Sample {
                residual: (sys.norm_w(&sub(&lx, &ly)) - d).max(0.0),
                bound: bound(tol, sys.norm_v(x) + sys.norm_v(y)),
                inputs: p.clone(),
            };
            let l_sum = sys.lambda(&add(x, y))?;
            let sub_add = Sample {
                residual: (sys.norm_w(&l_sum) - sys.norm_w(&add(&lx, &ly))).max(0.0),
                bound: bound(tol, sys.norm_v(x) + sys.norm_v(y)),
                inputs: p.clone(),
            };
            Ok([homog, lip, sub_add])
        })
        .collect::<Result<_>>()?;
    let column = |k: usize| -> Vec<Sample> { evaluated.iter().map(|s| s[k].clone()).collect() };
    Ok(LambdaPropertyReports {
        homogeneity: summarize("lambda.homogeneity", &column(0), seed, tol),
        lipschitz: summarize("lambda.lipschitz", &column(1), seed, tol),
        subadditivity: summarize("lambda.subadditivity", &column(2), seed, tol),
    })
}

/// Gap `⟨λx,λy⟩ − ⟨x,y⟩`, with roundoff-level negatives clamped to zero.
pub fn strong_gap(sys: &SemiFtvnSystem, x: &[f64], y: &[f64], tol: f64) -> Result<f64> {
    let gap = sys.inner_w(&sys.lambda(x)?, &sys.lambda(y)?) - sys.inner_v(x, y);
    let b = bound(tol, sys.norm_v(x) * sys.norm_v(y));
    Ok(if gap < 0.0 && gap >= -b { 0.0 } else { gap })
}

/// Whether `x` and `y` strongly commute, and the gap.
pub fn strong_commute(sys: &SemiFtvnSystem, x: &[f64], y: &[f64], tol: f64) -> Result<(bool, f64)> {
    let gap = strong_gap(sys, x, y, tol)?;
    Ok((gap <= bound(tol, sys.norm_v(x) * sys.norm_v(y)), gap))
}

/// The four equivalent conditions for a pair, with residuals
/// `[gap, |‖λx−λy‖² − ‖x−y‖²|, |‖λ(x+y)‖² − ‖λx+λy‖²|, ‖λ(x+y) − λx − λy‖]`.
#[derive(Debug, Clone)]
pub struct EquivalenceBattery {
    pub conditions: [bool; 4],
    pub residuals: [f64; 4],
    pub report: CheckReport,
}

impl EquivalenceBattery {
    pub fn agree(&self) -> bool {
        self.conditions.iter().all(|c| *c == self.conditions[0])
    }
}

pub fn prop34_battery(
    sys: &SemiFtvnSystem,
    x: &[f64],
    y: &[f64],
    tol: f64,
) -> Result<EquivalenceBattery> {
    let (lx, ly) = (sys.lambda(x)?, sys.lambda(y)?);
    let l_sum = sys.lambda(&add(x, y))?;
    let (nx, ny) = (sys.norm_v(x), sys.norm_v(y));
    let gap = strong_gap(sys, x, y, tol)?;
    let sq = |v: f64| v * v;
    let rb = (sq(sys.norm_w(&sub(&lx, &ly))) - sq(sys.norm_v(&sub(x, y)))).abs();
    let rc = (sq(sys.norm_w(&l_sum)) - sq(sys.norm_w(&add(&lx, &ly)))).abs();
    let rd = sys.norm_w(&sub(&l_sum, &add(&lx, &ly)));
    let b = bound(tol, nx * ny);
    let conditions = [
        gap <= b,
        rb <= 2.0 * b,
        rc <= 2.0 * b,
        rd <= bound(tol, nx + ny),
    ];
    let residuals = [gap, rb, rc, rd];
    let agree = conditions.iter().all(|c| *c == conditions[0]);
    let report = CheckReport {
        check_name: "prop34".into(),
        status: if agree {
            super::Status::Pass
        } else {
            super::Status::Fail
        },
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        witness: (!agree).then(|| vec![x.to_vec(), y.to_vec()]),
        samples: 1,
        seed: 0,
        tol,
    };
    Ok(EquivalenceBattery {
        conditions,
        residuals,
        report,
    })
}

pub fn orbit_equal(sys: &SemiFtvnSystem, x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    let ly = sys.lambda(y)?;
    let d = sys.norm_w(&sub(&sys.lambda(x)?, &ly));
    Ok(d <= bound(tol, sys.norm_w(&ly)))
}

#[derive(Debug, Clone)]
pub struct FtvnResidual {
    pub residual: f64,
    /// `max ⟨c, x⟩` over the orbit.
    pub achieved: f64,
    /// `⟨λc, λu⟩`.
    pub predicted: f64,
    pub argmax: Option<Vec<f64>>,
}

/// `|max_{x∈[u]} ⟨c,x⟩ − ⟨λc,λu⟩|` with the maximizer.
pub fn ftvn_residual(sys: &SemiFtvnSystem, c: &[f64], u: &[f64]) -> Result<FtvnResidual> {
    let argmax = sys.orbit_argmax(c, u)?;
    let achieved = sys.inner_v(c, &argmax);
    let predicted = sys.inner_w(&sys.lambda(c)?, &sys.lambda(u)?);
    Ok(FtvnResidual {
        residual: (achieved - predicted).abs(),
        achieved,
        predicted,
        argmax: Some(argmax),
    })
}

/// Necessary condition for `x` to lie in the center: no sampled `y` has a
/// positive strong-commutativity gap. A pass is not a membership proof.
pub fn center_probe(
    sys: &SemiFtvnSystem,
    x: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mut rng = rng::stream("center_probe", seed);
    let ys: Vec<Vec<f64>> = (0..samples.max(1)).map(|_| sys.sample(&mut rng)).collect();
    let evaluated: Vec<Sample> = ys
        .par_iter()
        .map(|y| {
            let gap = strong_gap(sys, x, y, tol)?;
            Ok(Sample {
                residual: gap.max(0.0),
                bound: bound(tol, sys.norm_v(x) * sys.norm_v(y)),
                inputs: vec![x.to_vec(), y.clone()],
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize("center_probe", &evaluated, seed, tol))
}

/// Samples `(c, x, y)` and looks for `⟨λc,λ(x+y)⟩ > ⟨λc,λx⟩ + ⟨λc,λy⟩`.
/// The first triple uses `y = 0`.
pub fn sublinearity_sampler(
    sys: &SemiFtvnSystem,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mut rng = rng::stream("sublinearity", seed);
    let mut triples = draw(sys, &mut rng, samples.max(1), 3);
    triples[0][2] = vec![0.0; sys.dim_v];
    let evaluated: Vec<Sample> = triples
        .par_iter()
        .map(|t| {
            let (c, x, y) = (&t[0], &t[1], &t[2]);
            let lc = sys.lambda(c)?;
            let lhs = sys.inner_w(&lc, &sys.lambda(&add(x, y))?);
            let rhs = sys.inner_w(&lc, &sys.lambda(x)?) + sys.inner_w(&lc, &sys.lambda(y)?);
            Ok(Sample {
                residual: (lhs - rhs).max(0.0),
                bound: bound(tol, sys.norm_v(c) * (sys.norm_v(x) + sys.norm_v(y))),
                inputs: t.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize("sublinearity", &evaluated, seed, tol))
}
