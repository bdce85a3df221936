//! The full acceptance battery.
//!
//! Sample counts scale with `--samples` (default 500): property checks use
//! `samples`, agreement and Lidskii batteries `2·samples`, and constructed
//! pairs `samples/5`. Tolerances scale with `--tol`: equivalence tests use
//! `10·tol` and solver certificates `100·tol`.

use std::fmt::Display;

use rayon::prelude::*;
use serde::Serialize;

use super::output::{emit, Record};
use super::{exit_for, RunConfig, EXIT_IO, EXIT_USAGE};
use crate::error::{Error, Result};
use crate::ftvn::{
    center_probe, check_axioms, ftvn_residual, lambda_properties, strong_commute, strong_gap,
    sublinearity_sampler, CheckReport, Status,
};
use crate::hyperbolic::{
    characterization_battery, isometric_probe, lidskii_check, polarization_inner,
    MIN_REFUTATION_RESTARTS,
};
use crate::lie::{commute_rel, operator_commute, weak_center};
use crate::numkernel::vector::{dot, norm, scale, sorted_desc, sub};
use crate::numkernel::{sym_eig, Matrix};
use crate::principles::{
    certify, complementarity_demo, minimize_invariant, orbit_max, orbit_perturbation,
};
use crate::principles::{InvariantSet, ObjectiveSpec, StepSchedule};
use crate::registry::{self, AXIOM_SUITE};
use crate::rng::{self, Rng};
use crate::systems::eja::{smat, svec};
use crate::systems::{
    make_plane_subspace_system, make_sort_spin_composition, EuclideanJordanAlgebra,
};

/// A suite report with an optional note for findings and errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    #[serde(flatten)]
    pub report: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteEntry {
    fn new(report: CheckReport) -> Self {
        Self { report, note: None }
    }

    fn noted(report: CheckReport, note: impl Into<String>) -> Self {
        Self {
            report,
            note: Some(note.into()),
        }
    }

    fn record(&self) -> Record {
        let mut text = self.report.text_line();
        if let Some(n) = &self.note {
            text.push_str(&format!("  [{n}]"));
        }
        Record::value(self, text, Some(self.report.status))
    }
}

#[derive(Debug, Clone, Copy)]
struct Ctx {
    seed: u64,
    samples: usize,
    tol: f64,
}

impl Ctx {
    fn pairs(&self) -> usize {
        2 * self.samples
    }

    fn constructed(&self) -> usize {
        (self.samples / 5).max(1)
    }

    fn equiv_tol(&self) -> f64 {
        10.0 * self.tol
    }

    fn cert_tol(&self) -> f64 {
        100.0 * self.tol
    }
}

/// Worst residual, failure count and the worst failing inputs.
struct Tally {
    name: String,
    samples: usize,
    worst: f64,
    failures: usize,
    witness: Option<(f64, Vec<Vec<f64>>)>,
}

impl Tally {
    fn new(name: impl Display) -> Self {
        Self {
            name: name.to_string(),
            samples: 0,
            worst: 0.0,
            failures: 0,
            witness: None,
        }
    }

    fn add(&mut self, residual: f64, ok: bool, inputs: impl FnOnce() -> Vec<Vec<f64>>) {
        let r = if residual.is_nan() {
            f64::MAX
        } else {
            residual
        };
        self.samples += 1;
        self.worst = self.worst.max(r);
        if !ok {
            self.failures += 1;
            if self.witness.as_ref().is_none_or(|(w, _)| r >= *w) {
                self.witness = Some((r, inputs()));
            }
        }
    }

    fn report(self, ctx: &Ctx, tol: f64) -> CheckReport {
        CheckReport {
            check_name: self.name,
            status: if self.failures == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            max_residual: self.worst,
            witness: self.witness.map(|(_, w)| w),
            samples: self.samples as u64,
            seed: ctx.seed,
            tol,
        }
    }
}

fn single(
    name: impl Display,
    ok: bool,
    residual: f64,
    witness: Option<Vec<Vec<f64>>>,
    ctx: &Ctx,
    tol: f64,
) -> CheckReport {
    CheckReport {
        check_name: name.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        max_residual: residual,
        witness,
        samples: 1,
        seed: ctx.seed,
        tol,
    }
}

fn named(r: CheckReport, system: &str) -> SuiteEntry {
    let name = format!("{}[{system}]", r.check_name);
    SuiteEntry::new(r.with_name(name))
}

type JobFn = Box<dyn Fn(&Ctx) -> Result<Vec<SuiteEntry>> + Send + Sync>;

struct Job {
    name: String,
    run: JobFn,
}

fn job(
    name: impl Into<String>,
    run: impl Fn(&Ctx) -> Result<Vec<SuiteEntry>> + Send + Sync + 'static,
) -> Job {
    Job {
        name: name.into(),
        run: Box::new(run),
    }
}

const FTVN_SYSTEMS: &[&str] = &[
    "rn_sort:2",
    "rn_sort:3",
    "rn_sort:4",
    "rn_sort:6",
    "norm:3",
    "abs",
    "sym_eja:2",
    "sym_eja:3",
    "sym_eja:4",
    "spin:2",
    "spin:3",
    "svd:3x4",
    "hyp_product:4",
    "hyp_spin:3",
    "hyp_det:3",
];

fn generator_pairs() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = AXIOM_SUITE
        .iter()
        .map(|s| {
            (
                s.to_string(),
                registry::default_generators(s).expect("registered"),
            )
        })
        .collect();
    for extra in [
        ("spin:2", "deriv:spin:2"),
        ("spin:3", "deriv:spin:3"),
        ("svd:3x4", "uxv:3x4"),
        ("svd:3x3", "uxv:3"),
    ] {
        out.push((extra.0.into(), extra.1.into()));
    }
    out
}

fn axiom_jobs(jobs: &mut Vec<Job>) {
    for name in AXIOM_SUITE {
        jobs.push(job(format!("axioms/{name}"), move |ctx| {
            let sys = registry::system_by_name(name)?;
            let mut reports = check_axioms(&sys, ctx.samples, ctx.seed, ctx.tol)?.all();
            reports.extend(lambda_properties(&sys, ctx.samples, ctx.seed, ctx.tol)?.all());
            let mut out: Vec<SuiteEntry> = reports.into_iter().map(|r| named(r, name)).collect();
            let sub = sublinearity_sampler(&sys, ctx.samples, ctx.seed, ctx.tol)?;
            out.push(exploratory_sublinearity(sub, name));
            Ok(out)
        }));
    }
}

/// FTvN systems satisfy sublinearity, so a violation there is a failure.
/// For the other systems the question is open and a counterexample is
/// reported as a finding.
fn exploratory_sublinearity(r: CheckReport, system: &str) -> SuiteEntry {
    let mut entry = named(r, system);
    if !FTVN_SYSTEMS.contains(&system) && entry.report.status == Status::Fail {
        entry.report.status = Status::Inconclusive;
        entry.note = Some(format!(
            "finding: sublinearity fails in this semi-FTvN system by {:.6}; witness (c, x, y)",
            entry.report.max_residual
        ));
    }
    entry
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn micro_jobs(jobs: &mut Vec<Job>) {
    for n in [2usize, 3, 4, 6] {
        jobs.push(job(format!("micro/{n}"), move |ctx| {
            let name = format!("rn_sort:{n}");
            let sys = registry::system_by_name(&name)?;
            let (a, b) = (unit(n, 0), unit(n, 1));
            let gap = strong_gap(&sys, &a, &b, ctx.tol)?;
            let gens = registry::generators_by_name(&format!("perm:{n}"))?;
            let (rel, r) = commute_rel(&a, &b, &gens, sys.metric_v(), ctx.tol);
            let w = || Some(vec![a.clone(), b.clone()]);
            Ok(vec![
                named(
                    single(
                        "micro.strong_gap",
                        (gap - 1.0).abs() <= 1e-12,
                        (gap - 1.0).abs(),
                        w(),
                        ctx,
                        1e-12,
                    ),
                    &name,
                ),
                named(
                    single("micro.relative_perm", rel, r, w(), ctx, ctx.tol),
                    &name,
                ),
            ])
        }));
    }
}

/// Pairs `(x, argmax_{y∈[u]} ⟨x, y⟩)` kept when they strongly commute.
fn strong_relative_jobs(jobs: &mut Vec<Job>) {
    for (sys_name, gens_name) in generator_pairs() {
        jobs.push(job(
            format!("strong_implies_relative/{sys_name}/{gens_name}"),
            move |ctx| {
                let sys = registry::system_by_name(&sys_name)?;
                let gens = registry::generators_by_name(&gens_name)?;
                let label = format!("{sys_name}/{gens_name}");
                let mut r = rng::stream(&format!("strong_implies_relative/{label}"), ctx.seed);
                let mut tally = Tally::new(format!("strong_implies_relative[{label}]"));
                let target = ctx.samples;
                let mut attempts = 0;
                while tally.samples < target && attempts < 4 * target {
                    attempts += 1;
                    let (x, u) = (sys.sample(&mut r), sys.sample(&mut r));
                    let y = sys.orbit_argmax(&x, &u)?;
                    if !strong_commute(&sys, &x, &y, ctx.tol)?.0 {
                        continue;
                    }
                    let (ok, res) = commute_rel(&x, &y, &gens, sys.metric_v(), ctx.tol);
                    tally.add(res, ok, || vec![x.clone(), y.clone()]);
                }
                let kept = tally.samples;
                let mut report = tally.report(ctx, ctx.tol);
                if kept < target && report.status == Status::Pass {
                    report.status = Status::Inconclusive;
                    return Ok(vec![SuiteEntry::noted(
                        report,
                        format!("{kept} strongly commuting pairs constructed"),
                    )]);
                }
                Ok(vec![SuiteEntry::new(report)])
            },
        ));
    }
}

fn random_orthogonal(r: &mut Rng, n: usize) -> Result<Matrix> {
    let b = Matrix::from_row_major(n, n, rng::normal_vec(r, n * n))?;
    Ok(sym_eig(&b.add(&b.transpose()), 1e-12)?.vectors)
}

fn equivalence_jobs(jobs: &mut Vec<Job>) {
    for n in [2usize, 3, 4] {
        jobs.push(job(format!("derivation_vs_operator/{n}"), move |ctx| {
            let name = format!("sym_eja:{n}");
            let alg = EuclideanJordanAlgebra::symmetric(n);
            let sys = registry::system_by_name(&name)?;
            let gens = registry::generators_by_name(&format!("deriv:sym_eja:{n}"))?;
            let tol = ctx.equiv_tol();
            let mut r = rng::stream(&format!("derivation_vs_operator/{name}"), ctx.seed);
            let mut tally = Tally::new(format!("derivation_vs_operator[{name}]"));
            for i in 0..(ctx.pairs() + ctx.constructed()) {
                let constructed = i >= ctx.pairs();
                let (a, b) = if constructed {
                    let frame = alg.random_frame(&mut r)?;
                    let (alpha, beta) = (rng::normal_vec(&mut r, n), rng::normal_vec(&mut r, n));
                    (
                        EuclideanJordanAlgebra::compose(&alpha, &frame),
                        EuclideanJordanAlgebra::compose(&beta, &frame),
                    )
                } else {
                    (alg.random_element(&mut r), alg.random_element(&mut r))
                };
                let (rel, _) = commute_rel(&a, &b, &gens, sys.metric_v(), tol);
                let (op, _) = operator_commute(&alg, &a, &b, tol);
                let ok = rel == op && (!constructed || rel);
                tally.add(if ok { 0.0 } else { 1.0 }, ok, || {
                    vec![a.clone(), b.clone()]
                });
            }
            Ok(vec![SuiteEntry::new(tally.report(ctx, tol))])
        }));
    }
    for n in [2usize, 3] {
        jobs.push(job(format!("uxv_vs_symmetry/{n}"), move |ctx| {
            let name = format!("svd:{n}x{n}");
            let sys = registry::system_by_name(&name)?;
            let gens = registry::generators_by_name(&format!("uxv:{n}"))?;
            let tol = ctx.equiv_tol();
            let mut r = rng::stream(&format!("uxv_vs_symmetry/{name}"), ctx.seed);
            let mut tally = Tally::new(format!("uxv_vs_symmetry[{name}]"));
            for i in 0..(ctx.pairs() + ctx.constructed()) {
                let constructed = i >= ctx.pairs();
                let (x, y) = if constructed {
                    let (u, v) = (random_orthogonal(&mut r, n)?, random_orthogonal(&mut r, n)?);
                    let s = Matrix::diag(&rng::normal_vec(&mut r, n));
                    let t = Matrix::diag(&rng::normal_vec(&mut r, n));
                    (&(&u * &s) * &v.transpose(), &(&u * &t) * &v.transpose())
                } else {
                    let x = Matrix::from_row_major(n, n, rng::normal_vec(&mut r, n * n))?;
                    (
                        x,
                        Matrix::from_row_major(n, n, rng::normal_vec(&mut r, n * n))?,
                    )
                };
                let (xv, yv) = (x.as_slice().to_vec(), y.as_slice().to_vec());
                let (rel, _) = commute_rel(&xv, &yv, &gens, sys.metric_v(), tol);
                let xyt = &x * &y.transpose();
                let xty = &x.transpose() * &y;
                let asym = xyt
                    .sub(&xyt.transpose())
                    .frobenius_norm()
                    .max(xty.sub(&xty.transpose()).frobenius_norm());
                let sym = asym <= tol * (x.frobenius_norm() * y.frobenius_norm()).max(1.0);
                let ok = rel == sym && (!constructed || rel);
                tally.add(if ok { 0.0 } else { 1.0 }, ok, || {
                    vec![xv.clone(), yv.clone()]
                });
            }
            Ok(vec![SuiteEntry::new(tally.report(ctx, tol))])
        }));
    }
}

fn center_jobs(jobs: &mut Vec<Job>) {
    jobs.push(job("weak_center", |ctx| {
        let mut out = Vec::new();
        let mut dim_check = |gens_name: String, expected: usize| -> Result<()> {
            let dim = weak_center(&registry::generators_by_name(&gens_name)?, ctx.tol)?.len();
            let r = single(
                format!("weak_center.dim[{gens_name}]"),
                dim == expected,
                expected.abs_diff(dim) as f64,
                None,
                ctx,
                0.0,
            );
            out.push(SuiteEntry::noted(
                r,
                format!("dimension {dim}, expected {expected}"),
            ));
            Ok(())
        };
        for n in [2usize, 3, 4, 6] {
            dim_check(format!("perm:{n}"), n)?;
        }
        for n in [2usize, 3, 4] {
            dim_check(format!("skew:{n}"), 0)?;
        }
        for n in [2usize, 3, 4] {
            let gens_name = format!("deriv:sym_eja:{n}");
            let basis = weak_center(&registry::generators_by_name(&gens_name)?, ctx.tol)?;
            let e = svec(&Matrix::identity(n));
            let ne = norm(&e);
            let misalignment = match basis.as_slice() {
                [b] => 1.0 - (dot(b, &e) / (norm(b) * ne)).abs(),
                _ => f64::INFINITY,
            };
            let ok = basis.len() == 1 && misalignment <= 1e-8;
            let r = single(
                format!("weak_center.identity[{gens_name}]"),
                ok,
                misalignment.min(f64::MAX),
                None,
                ctx,
                1e-8,
            );
            out.push(SuiteEntry::noted(r, format!("dimension {}", basis.len())));
        }
        Ok(out)
    }));
    jobs.push(job("center_probe", |ctx| {
        let name = "sym_eja:3";
        let sys = registry::system_by_name(name)?;
        let e = svec(&Matrix::identity(3));
        let mut r = rng::stream("center_probe/sym_eja:3", ctx.seed);
        let probes = ctx.constructed().clamp(5, 20);
        let mut multiples = Tally::new(format!("center_probe.multiples_of_identity[{name}]"));
        for alpha in [0.0, 1.0, -2.5, rng::normal(&mut r)] {
            let x = scale(alpha, &e);
            let rep = center_probe(&sys, &x, probes, ctx.seed, ctx.tol)?;
            multiples.add(rep.max_residual, rep.passed(), || vec![x.clone()]);
        }
        let mut others = Tally::new(format!("center_probe.non_multiples[{name}]"));
        for _ in 0..ctx.constructed() {
            let x = sys.sample(&mut r);
            let rep = center_probe(&sys, &x, probes, ctx.seed, ctx.tol)?;
            let rejected = rep.status == Status::Fail;
            others.add(if rejected { 0.0 } else { 1.0 }, rejected, || {
                vec![x.clone()]
            });
        }
        Ok(vec![
            SuiteEntry::new(multiples.report(ctx, ctx.tol)),
            SuiteEntry::new(others.report(ctx, ctx.tol)),
        ])
    }));
}

fn hyperbolic_jobs(jobs: &mut Vec<Job>) {
    for n in [3usize, 4, 6] {
        jobs.push(job(format!("eigmap_vs_sort/{n}"), move |ctx| {
            let name = format!("hyp_product:{n}");
            let hs = registry::hyperbolic_by_name(&name)?;
            let mut r = rng::stream(&format!("eigmap_vs_sort/{name}"), ctx.seed);
            let mut tally = Tally::new(format!("eigmap_vs_sort[{name}]"));
            for _ in 0..ctx.samples {
                let x = rng::normal_vec(&mut r, n);
                let res = norm(&sub(&hs.eigmap(&x)?, &sorted_desc(&x)));
                tally.add(res, res <= ctx.tol * norm(&x).max(1.0), || vec![x.clone()]);
            }
            Ok(vec![SuiteEntry::new(tally.report(ctx, ctx.tol))])
        }));
    }
    for n in [2usize, 3, 4] {
        jobs.push(job(format!("eigmap_vs_sym_eig/{n}"), move |ctx| {
            let name = format!("hyp_det:{n}");
            let hs = registry::hyperbolic_by_name(&name)?;
            let d = hs.poly.dim;
            let mut r = rng::stream(&format!("eigmap_vs_sym_eig/{name}"), ctx.seed);
            let mut eig = Tally::new(format!("eigmap_vs_sym_eig[{name}]"));
            let mut pol = Tally::new(format!("polarization_vs_trace[{name}]"));
            for _ in 0..ctx.samples {
                let (x, y) = (rng::normal_vec(&mut r, d), rng::normal_vec(&mut r, d));
                let oracle = sym_eig(&smat(&x, n), 1e-12)?.values;
                let res = norm(&sub(&hs.eigmap(&x)?, &oracle));
                eig.add(res, res <= ctx.tol * norm(&x).max(1.0), || vec![x.clone()]);
                let gap = (polarization_inner(&hs.poly, &x, &y)? - dot(&x, &y)).abs();
                pol.add(gap, gap <= ctx.tol * (norm(&x) * norm(&y)).max(1.0), || {
                    vec![x.clone(), y.clone()]
                });
            }
            Ok(vec![
                SuiteEntry::new(eig.report(ctx, ctx.tol)),
                SuiteEntry::new(pol.report(ctx, ctx.tol)),
            ])
        }));
    }
    for name in ["hyp_product:4", "hyp_spin:3", "hyp_det:3"] {
        jobs.push(job(format!("lidskii/{name}"), move |ctx| {
            let hs = registry::hyperbolic_by_name(name)?;
            Ok(vec![named(
                lidskii_check(&hs, ctx.pairs(), ctx.seed, ctx.tol)?,
                name,
            )])
        }));
        jobs.push(job(format!("strong_commute_char/{name}"), move |ctx| {
            let hs = registry::hyperbolic_by_name(name)?;
            Ok(vec![named(
                characterization_battery(&hs, ctx.pairs(), ctx.seed, ctx.tol)?,
                name,
            )])
        }));
    }
}

fn counterexample_jobs(jobs: &mut Vec<Job>) {
    jobs.push(job("subspace_ex59", |ctx| {
        let ss = make_plane_subspace_system();
        let sys = &ss.system;
        let name = "subspace_ex59";
        let (c_parent, u_parent) = (vec![3.0, 1.0, 0.0], vec![-3.0, -1.0, 0.0]);
        let (c, u) = (ss.coordinates(&c_parent), ss.coordinates(&u_parent));
        let orbit = sys.enumerate_orbit(&u)?;
        let only_u = orbit.len() == 1 && norm(&sub(&orbit[0], &u)) <= 1e-12;
        let orbit_rep = single(
            format!("orbit_enumeration[{name}]"),
            only_u,
            orbit.len().abs_diff(1) as f64,
            Some(orbit.clone()),
            ctx,
            1e-12,
        );
        let f = ftvn_residual(sys, &c, &u)?;
        let res = (f.residual - 9.0).abs();
        let ftvn_rep = single(
            format!("ftvn_residual_is_9[{name}]"),
            res <= 1e-9,
            res,
            Some(vec![c.clone(), u.clone()]),
            ctx,
            1e-9,
        );
        let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let mut out = vec![
            SuiteEntry::noted(orbit_rep, format!("orbit size {}", orbit.len())),
            SuiteEntry::noted(
                ftvn_rep,
                format!("achieved {} predicted {}", f.achieved, f.predicted),
            ),
        ];
        let range = match ss.range_nonconvexity(&grid)? {
            Some((w1, w2, r)) => SuiteEntry::noted(
                single(
                    format!("range_nonconvexity[{name}]"),
                    r > 0.01,
                    r,
                    Some(vec![w1, w2]),
                    ctx,
                    0.01,
                ),
                format!("midpoint preimage residual {r:.6}"),
            ),
            None => SuiteEntry::new(single(
                format!("range_nonconvexity[{name}]"),
                false,
                0.0,
                None,
                ctx,
                0.01,
            )),
        };
        out.push(range);
        let probe = isometric_probe(sys, &c, &u, MIN_REFUTATION_RESTARTS, ctx.seed, ctx.tol)?;
        let rep = probe.report(&c, &u, MIN_REFUTATION_RESTARTS, ctx.seed, ctx.tol);
        out.push(named(rep, name));
        Ok(out)
    }));
    jobs.push(job("compose_ex43", |ctx| {
        let sys = make_sort_spin_composition();
        let name = "compose_ex43";
        let (c, u) = (vec![1.0, -1.0], vec![-1.0, 2.0]);
        let (nc, nu) = (sys.lambda(&c)?, sys.lambda(&u)?);
        let exact = nc == [2.0, 0.0] && nu == [3.0, 1.0];
        let dev = norm(&sub(&nc, &[2.0, 0.0])).max(norm(&sub(&nu, &[3.0, 1.0])));
        let values = single(format!("nu_values[{name}]"), exact, dev, Some(vec![nc.clone(), nu.clone()]), ctx, 0.0);
        let orbit = sys.enumerate_orbit(&u)?;
        let (best, argmax) = orbit
            .iter()
            .map(|x| (sys.inner_v(&c, x), x.clone()))
            .fold((f64::NEG_INFINITY, Vec::new()), |acc, p| if p.0 > acc.0 { p } else { acc });
        let predicted = sys.inner_w(&nc, &nu);
        let gap = (best - 6.0).abs();
        let finding = if gap <= ctx.tol * 6.0 {
            format!(
                "finding: brute-force orbit maximum {best} equals <nu(c),nu(u)> = {predicted} over {} orbit points; \
                 the FTvN identity holds at this pair",
                orbit.len()
            )
        } else {
            format!("finding: brute-force orbit maximum {best} differs from 6 by {gap:.3e}")
        };
        let mut compared = single(format!("orbit_max_vs_6[{name}]"), true, gap, Some(vec![c, u, argmax]), ctx, ctx.tol);
        compared.samples = orbit.len() as u64;

        // brute-force FTvN residual over random pairs
        let mut r = rng::stream("compose_ex43/ftvn_search", ctx.seed);
        let mut worst = (0.0, Vec::new());
        for _ in 0..ctx.samples {
            let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
            let best = sys.enumerate_orbit(&u)?.iter().map(|x| sys.inner_v(&c, x)).fold(f64::NEG_INFINITY, f64::max);
            let res = (best - sys.inner_w(&sys.lambda(&c)?, &sys.lambda(&u)?)).abs();
            if res > worst.0 {
                worst = (res, vec![c, u]);
            }
        }
        let found = worst.0 > ctx.tol;
        let mut search = single(format!("ftvn_search[{name}]"), true, worst.0, found.then_some(worst.1), ctx, ctx.tol);
        search.samples = ctx.samples as u64;
        let search_note = if found {
            format!("finding: FTvN identity fails at a sampled pair by {:.6}; witness (c, u)", worst.0)
        } else {
            "no FTvN violation among sampled pairs".to_string()
        };
        Ok(vec![
            SuiteEntry::new(values),
            SuiteEntry::noted(compared, finding),
            SuiteEntry::noted(search, search_note),
        ])
    }));
}

fn principles_jobs(jobs: &mut Vec<Job>) {
    jobs.push(job("isospectral", |ctx| {
        let name = "sym_eja:3";
        let sys = registry::system_by_name(name)?;
        let gens = registry::generators_by_name("deriv:sym_eja:3")?;
        let mut r = rng::stream("principles.isospectral/sym_eja:3", ctx.seed);
        let mut runs = Tally::new(format!("principles.isospectral[{name}]"));
        let mut perturbed = Tally::new(format!("principles.perturbation_rejected[{name}]"));
        let mut rejected = 0usize;
        const RUNS: usize = 50;
        for _ in 0..RUNS {
            let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
            let set = InvariantSet::orbit(&sys, &u);
            let obj = ObjectiveSpec::linear(sys.metric_v(), &c);
            let (a, cert) = minimize_invariant(
                &sys,
                &gens,
                &set,
                &obj,
                &u,
                StepSchedule::Auto,
                500,
                ctx.tol,
            )?;
            let ok = cert.verdict == Status::Pass && cert.max_residual <= ctx.cert_tol();
            runs.add(cert.max_residual, ok, || vec![c.clone(), u.clone()]);
            let moved = orbit_perturbation(
                &gens,
                sys.metric_v(),
                &a,
                0.1 * sys.norm_v(&a).max(1.0),
                &mut r,
            );
            let bad = certify(&moved, &c, &gens, sys.metric_v(), ctx.cert_tol());
            if !bad.passed() {
                rejected += 1;
            }
        }
        let fraction = rejected as f64 / RUNS as f64;
        perturbed.add(1.0 - fraction, fraction >= 0.9, Vec::new);
        let mut p = perturbed.report(ctx, 0.1);
        p.samples = RUNS as u64;
        Ok(vec![
            SuiteEntry::new(runs.report(ctx, ctx.cert_tol())),
            SuiteEntry::noted(
                p,
                format!("{rejected}/{RUNS} perturbed optimizers rejected"),
            ),
        ])
    }));
    jobs.push(job("complementarity", |ctx| {
        let mut r = rng::stream("principles.complementarity", ctx.seed);
        let mut out = Vec::new();
        let demos: [(&str, EuclideanJordanAlgebra); 4] = [
            ("rn:3", EuclideanJordanAlgebra::componentwise(3)),
            ("sym_eja:2", EuclideanJordanAlgebra::symmetric(2)),
            ("sym_eja:3", EuclideanJordanAlgebra::symmetric(3)),
            ("spin:3", EuclideanJordanAlgebra::spin(3)),
        ];
        for (label, alg) in demos {
            let d = alg.dim;
            let mut tally = Tally::new(format!("principles.complementarity[{label}]"));
            for _ in 0..3 {
                let b = Matrix::from_row_major(d, d, rng::normal_vec(&mut r, d * d))?;
                let m = (&b.transpose() * &b)
                    .scale(1.0 / d as f64)
                    .add(&Matrix::identity(d));
                let q = rng::normal_vec(&mut r, d);
                let demo = complementarity_demo(&alg, &m, &q, 200_000, ctx.cert_tol())?;
                tally.add(demo.report.max_residual, demo.report.passed(), || {
                    vec![m.as_slice().to_vec(), q.clone()]
                });
            }
            out.push(SuiteEntry::new(tally.report(ctx, ctx.cert_tol())));
        }
        Ok(out)
    }));
    for name in FTVN_SYSTEMS {
        jobs.push(job(format!("orbit_max/{name}"), move |ctx| {
            let sys = registry::system_by_name(name)?;
            let mut r = rng::stream(&format!("principles.orbit_max/{name}"), ctx.seed);
            let mut value = Tally::new(format!("principles.orbit_max_value[{name}]"));
            let mut gap = Tally::new(format!("principles.orbit_max_strong_gap[{name}]"));
            for _ in 0..ctx.samples {
                let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
                let m = orbit_max(&sys, &c, &u)?;
                let dv = (m.value - m.predicted).abs();
                value.add(dv, dv <= ctx.tol * m.predicted.abs().max(1.0), || {
                    vec![c.clone(), u.clone()]
                });
                let g = strong_gap(&sys, &c, &m.argmax, ctx.tol)?;
                let bound = ctx.tol * (sys.norm_v(&c) * sys.norm_v(&m.argmax)).max(1.0);
                gap.add(g, g <= bound, || vec![c.clone(), m.argmax.clone()]);
            }
            Ok(vec![
                SuiteEntry::new(value.report(ctx, ctx.tol)),
                SuiteEntry::new(gap.report(ctx, ctx.tol)),
            ])
        }));
    }
}

fn all_jobs() -> Vec<Job> {
    let mut jobs = Vec::new();
    axiom_jobs(&mut jobs);
    micro_jobs(&mut jobs);
    strong_relative_jobs(&mut jobs);
    equivalence_jobs(&mut jobs);
    center_jobs(&mut jobs);
    hyperbolic_jobs(&mut jobs);
    counterexample_jobs(&mut jobs);
    principles_jobs(&mut jobs);
    jobs
}

/// Runs the battery and returns the entries sorted by check name. A job
/// that errors becomes a failing entry carrying the error message.
pub fn run_suite(
    seed: u64,
    samples: usize,
    tol: f64,
    jobs: Option<usize>,
) -> std::result::Result<Vec<SuiteEntry>, Error> {
    let ctx = Ctx {
        seed,
        samples: samples.max(1),
        tol,
    };
    let list = all_jobs();
    let execute = || -> Vec<SuiteEntry> {
        list.par_iter()
            .flat_map_iter(|j| match (j.run)(&ctx) {
                Ok(entries) => entries,
                Err(e) => {
                    let report = CheckReport {
                        check_name: j.name.clone(),
                        status: Status::Fail,
                        max_residual: 0.0,
                        witness: None,
                        samples: 0,
                        seed,
                        tol,
                    };
                    vec![SuiteEntry::noted(report, format!("error: {e}"))]
                }
            })
            .collect()
    };
    let mut entries = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?
            .install(execute),
        None => execute(),
    };
    entries.sort_by(|a, b| a.report.check_name.cmp(&b.report.check_name));
    Ok(entries)
}

/// Exit 0 iff no check fails; inconclusive checks do not count.
pub fn cmd_suite(config: &RunConfig) -> i32 {
    let entries = match run_suite(config.seed, config.samples, config.tol, config.jobs) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let records: Vec<Record> = entries.iter().map(SuiteEntry::record).collect();
    if let Err(e) = emit(config, &records) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_IO;
    }
    let count = |s: Status| entries.iter().filter(|e| e.report.status == s).count();
    eprintln!(
        "suite: {} checks, {} pass, {} fail, {} inconclusive",
        entries.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Inconclusive)
    );
    exit_for(entries.iter().map(|e| e.report.status), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_are_unique() {
        let entries = run_suite(3, 10, 1e-8, None).unwrap();
        let mut names: Vec<&str> = entries
            .iter()
            .map(|e| e.report.check_name.as_str())
            .collect();
        let n = names.len();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn notes_serialize_beside_report_fields() {
        let e = SuiteEntry::noted(
            CheckReport {
                check_name: "x".into(),
                status: Status::Pass,
                max_residual: 0.0,
                witness: None,
                samples: 1,
                seed: 1,
                tol: 1e-8,
            },
            "n",
        );
        let s = serde_json::to_string(&e).unwrap();
        assert!(
            s.starts_with(r#"{"check":"x","status":"pass""#) && s.ends_with(r#""note":"n"}"#),
            "{s}"
        );
    }
}
