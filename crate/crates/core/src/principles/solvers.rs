use serde::Serialize;

use super::certificate::{certify, subdifferential_candidates, CommutationCertificate};
use super::objective::{ObjectiveSpec, StepSchedule};
use super::sets::InvariantSet;
use crate::error::{Error, Result};
use crate::ftvn::{CheckReport, Metric, SemiFtvnSystem, Status};
use crate::lie::{commute_rel, eja_cone_lie_span, LieGeneratorSet};
use crate::numkernel::vector::{add, scale, sub};
use crate::numkernel::{exp_operator, svd, sym_eig, Matrix};
use crate::rng::{self, Rng};
use crate::systems::eja::{smat, svec};
use crate::systems::EuclideanJordanAlgebra;

/// Largest distance of a starting point from the feasible set, relative to
/// its norm, that is still accepted and projected away.
/// All subgradients known at a point.
pub type SubgradientFn<'a> = dyn Fn(&[f64]) -> Result<Vec<Vec<f64>>> + 'a;

pub const FEASIBLE_START_TOL: f64 = 1e-6;

fn check_dims(sys: &SemiFtvnSystem, gens: &LieGeneratorSet, x: &[f64]) -> Result<()> {
    for found in [x.len(), gens.dim] {
        if found != sys.dim_v {
            return Err(Error::DimensionMismatch {
                expected: sys.dim_v,
                found,
            });
        }
    }
    Ok(())
}

fn feasible_start(set: &InvariantSet, x0: &[f64]) -> Result<Vec<f64>> {
    let distance = set.distance(x0)?;
    if distance > FEASIBLE_START_TOL * set.metric.norm(x0).max(1.0) {
        return Err(Error::InfeasibleStart { distance });
    }
    set.project(x0)
}

/// Projected iteration `a ← Π(a − s_k·dir(a))` until `‖a − Π(a − s_k·dir(a))‖`
/// drops to `tol·max(1, ‖a‖)`. Returns the most stationary iterate, its
/// residual, the number of steps and whether it converged.
fn projected_iteration(
    set: &InvariantSet,
    dir: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    start: Vec<f64>,
    schedule: StepSchedule,
    iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64, usize, bool)> {
    let mut a = start;
    let mut best = (a.clone(), f64::INFINITY);
    for k in 1..=iters + 1 {
        let s = schedule.step(k);
        let next = set.project(&sub(&a, &scale(s, &dir(&a)?)))?;
        let r = set.metric.norm(&sub(&a, &next));
        if r < best.1 {
            best = (a.clone(), r);
        }
        if r <= tol * set.metric.norm(&a).max(1.0) {
            return Ok((a, r, k - 1, true));
        }
        if k > iters {
            break;
        }
        a = next;
    }
    Ok((best.0, best.1, iters, false))
}

/// Projected gradient descent for `Θ + F∘λ` over `E`, then a certificate
/// that the stationary point commutes with `Θ′(a)` relative to `gens`.
/// Without convergence the most stationary iterate is returned with an
/// inconclusive verdict.
#[allow(clippy::too_many_arguments)]
pub fn minimize_invariant(
    sys: &SemiFtvnSystem,
    gens: &LieGeneratorSet,
    set: &InvariantSet,
    obj: &ObjectiveSpec,
    x0: &[f64],
    schedule: StepSchedule,
    iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, CommutationCertificate)> {
    check_dims(sys, gens, x0)?;
    let start = feasible_start(set, x0)?;
    let schedule = schedule.resolve(obj, &start, 0)?;
    let (a, r, steps, converged) =
        projected_iteration(set, &|x| obj.gradient(x), start, schedule, iters, tol)?;
    let cert = certify(&a, &obj.theta_gradient(&a)?, gens, sys.metric_v(), tol)
        .with_convergence(r, steps, converged);
    Ok((a, cert))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMax {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// `⟨λ(c), λ(u)⟩`, the value an FTvN system attains.
    pub predicted: f64,
}

/// `max_{x ∈ [u]} ⟨c, x⟩` through the system's maximizer or enumerator.
pub fn orbit_max(sys: &SemiFtvnSystem, c: &[f64], u: &[f64]) -> Result<OrbitMax> {
    let argmax = sys.orbit_argmax(c, u)?;
    Ok(OrbitMax {
        value: sys.inner_v(c, &argmax),
        predicted: sys.inner_w(&sys.lambda(c)?, &sys.lambda(u)?),
        argmax,
    })
}

/// Solves `VI(h, E)` by `a ← Π(a − step·h(a))` and certifies that `a`
/// commutes with `h(a)`.
#[allow(clippy::too_many_arguments)]
pub fn vi_solve_and_certify(
    sys: &SemiFtvnSystem,
    gens: &LieGeneratorSet,
    set: &InvariantSet,
    h: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    x0: &[f64],
    step: f64,
    iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, CommutationCertificate)> {
    check_dims(sys, gens, x0)?;
    let start = feasible_start(set, x0)?;
    let (a, r, steps, converged) =
        projected_iteration(set, h, start, StepSchedule::Constant(step), iters, tol)?;
    let cert =
        certify(&a, &h(&a)?, gens, sys.metric_v(), tol).with_convergence(r, steps, converged);
    Ok((a, cert))
}

/// Solution of `CP(h, K)` for `h(x) = Mx + q` on a symmetric cone, with the
/// residuals of each optimality and commutation condition. Residuals are
/// normalized by `max(1, scale)`.
#[derive(Debug, Clone, Serialize)]
pub struct ComplementarityOutcome {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    /// `x ∈ K` and `h(x) ∈ K`.
    pub feasibility: f64,
    /// `⟨x, h(x)⟩ = 0`.
    pub complementarity: f64,
    /// `L_xL_h = L_hL_x`.
    pub operator_commutativity: f64,
    /// `x ∘ h(x) = 0`.
    pub jordan_product: f64,
    /// Commutativity relative to the Lie algebra of `Aut(K)`.
    pub relative_commutativity: f64,
    pub stationarity: f64,
    pub iterations: usize,
    pub converged: bool,
    pub report: CheckReport,
}

/// Projected fixed-point solve of `CP(Mx + q, K)` and its certificate.
pub fn complementarity_demo(
    alg: &EuclideanJordanAlgebra,
    m: &Matrix,
    q: &[f64],
    iters: usize,
    tol: f64,
) -> Result<ComplementarityOutcome> {
    let d = alg.dim;
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.rows(),
        });
    }
    if q.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: q.len(),
        });
    }
    let sym = sym_eig(&m.add(&m.transpose()).scale(0.5), 1e-12)?;
    let mu = *sym.values.last().unwrap_or(&0.0);
    let lip = svd(m, 1e-12)?
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0);
    if mu <= 1e-12 * lip.max(1.0) {
        return Err(Error::NotPositiveDefinite("complementarity operator"));
    }
    // x ↦ Π(x − s·h(x)) contracts by ρ for s = μ/L²
    let s = mu / (lip * lip);
    let rho = (1.0 - (mu / lip).powi(2)).max(0.0).sqrt();
    let metric = Metric::from_gram(alg.trace_gram.clone())?;
    let h = |x: &[f64]| add(&m.matvec(x), q);
    // distance to the solution is at most r/(1−ρ); the 0.1/(1+L) margin keeps
    // the bilinear residuals below tol
    let target = (0.1 * tol * (1.0 - rho) * metric.norm(q).max(1.0) / (1.0 + lip)).max(1e-15);

    let mut x = vec![0.0; d];
    let mut r = f64::INFINITY;
    let mut steps = 0;
    for k in 0..=iters {
        let next = alg.cone_projection(&sub(&x, &scale(s, &h(&x))))?;
        r = metric.norm(&sub(&x, &next));
        steps = k;
        if r <= target || k == iters {
            break;
        }
        x = next;
    }
    let converged = r <= target;
    let hx = h(&x);

    let (nx, nh) = (metric.norm(&x), metric.norm(&hx));
    let unit = |v: f64| v.max(1.0);
    let min_eig = |v: &[f64]| alg.min_eigenvalue(v);
    let feasibility = (-min_eig(&x)?).max(-min_eig(&hx)?).max(0.0) / unit(nx.max(nh));
    let complementarity = metric.inner(&x, &hx).abs() / unit(nx * nh);
    let (lx, lh) = (alg.l_op(&x), alg.l_op(&hx));
    let operator_commutativity =
        lx.commutator(&lh).frobenius_norm() / unit(lx.frobenius_norm() * lh.frobenius_norm());
    let jordan_product = metric.norm(&alg.product(&x, &hx)) / unit(nx * nh);
    let relative_commutativity = eja_cone_lie_span(alg)
        .generators
        .iter()
        .map(|dop| metric.inner(&dop.matvec(&x), &hx).abs() / unit(dop.frobenius_norm() * nx * nh))
        .fold(0.0, f64::max);

    let max_residual = [
        feasibility,
        complementarity,
        operator_commutativity,
        jordan_product,
        relative_commutativity,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let status = match (converged, max_residual <= tol) {
        (false, _) => Status::Inconclusive,
        (true, true) => Status::Pass,
        (true, false) => Status::Fail,
    };
    let report = CheckReport {
        check_name: "principles.complementarity".into(),
        status,
        max_residual,
        witness: Some(vec![x.clone(), hx.clone()]),
        samples: 1,
        seed: 0,
        tol,
    };
    Ok(ComplementarityOutcome {
        x,
        h: hx,
        feasibility,
        complementarity,
        operator_commutativity,
        jordan_product,
        relative_commutativity,
        stationarity: r,
        iterations: steps,
        converged,
        report,
    })
}

/// Projected subgradient method for a convex `f` over a convex `E`. The
/// oracle returns a finite generating list of `∂f(x)`. At the best iterate
/// the generated subdifferential is searched for the element that commutes
/// best with `a`, and the most stationary element decides convergence.
/// Nonsmooth stationarity `min_g ‖a − Π(a − g)‖` is accepted at `√tol`.
#[allow(clippy::too_many_arguments)]
pub fn subgradient_certify(
    sys: &SemiFtvnSystem,
    gens: &LieGeneratorSet,
    set: &InvariantSet,
    f_eval: &dyn Fn(&[f64]) -> Result<f64>,
    f_subgrad: &SubgradientFn,
    x0: &[f64],
    schedule: StepSchedule,
    iters: usize,
    tol: f64,
    seed: u64,
) -> Result<(Vec<f64>, CommutationCertificate)> {
    check_dims(sys, gens, x0)?;
    let schedule = match schedule {
        StepSchedule::Auto => StepSchedule::InverseSqrt(1.0),
        s => s,
    };
    let mut a = feasible_start(set, x0)?;
    let mut best = (a.clone(), f_eval(&a)?);
    for k in 1..=iters {
        let list = f_subgrad(&a)?;
        let Some(g) = list.first() else { break };
        a = set.project(&sub(&a, &scale(schedule.step(k), g)))?;
        let f = f_eval(&a)?;
        if f < best.1 {
            best = (a.clone(), f);
        }
    }
    let a = best.0;
    let candidates = subdifferential_candidates(&f_subgrad(&a)?, 100, seed);
    if candidates.is_empty() {
        return Err(Error::NoConvergence {
            what: "subgradient oracle",
            iterations: iters,
        });
    }
    let mut stationarity = f64::INFINITY;
    for g in &candidates {
        stationarity = stationarity.min(set.metric.norm(&sub(&a, &set.project(&sub(&a, g))?)));
    }
    let best_g = candidates
        .iter()
        .min_by(|x, y| {
            let rx = commute_rel(&a, x, gens, sys.metric_v(), tol).1;
            let ry = commute_rel(&a, y, gens, sys.metric_v(), tol).1;
            rx.total_cmp(&ry)
        })
        .expect("nonempty");
    let converged = stationarity <= tol.sqrt() * set.metric.norm(&a).max(1.0);
    let cert = certify(&a, best_g, gens, sys.metric_v(), tol).with_convergence(
        stationarity,
        iters,
        converged,
    );
    Ok((a, cert))
}

/// Probes `⟨d, x − a⟩ ≤ 0` on sampled `x ∈ E`, then certifies that `a`
/// commutes with `d`.
#[allow(clippy::too_many_arguments)]
pub fn normal_cone_certify(
    gens: &LieGeneratorSet,
    set: &InvariantSet,
    a: &[f64],
    d: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CommutationCertificate> {
    if a.len() != gens.dim || d.len() != gens.dim {
        return Err(Error::DimensionMismatch {
            expected: gens.dim,
            found: a.len().min(d.len()),
        });
    }
    if !set.contains(a, tol)? {
        return Err(Error::InfeasibleStart {
            distance: set.distance(a)?,
        });
    }
    let metric = &set.metric;
    let mut r = rng::stream("normal_cone_probe", seed);
    let radius = metric.norm(a).max(1.0);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples {
        let spread = [0.1, 1.0, 10.0][i % 3] * radius;
        let z: Vec<f64> = a.iter().map(|v| v + spread * rng::normal(&mut r)).collect();
        let x = set.project(&z)?;
        let diff = sub(&x, a);
        let excess = metric.inner(d, &diff) - tol * (metric.norm(d) * metric.norm(&diff)).max(1.0);
        worst = worst.max(excess);
    }
    if worst > 0.0 {
        return Err(Error::NotNormal { violation: worst });
    }
    Ok(certify(a, d, gens, metric, tol))
}

/// `exp(τD)a` for a random unit combination `D` of the generators, with `τ`
/// chosen so the first-order displacement `τ‖Da‖` equals `t`.
pub fn orbit_perturbation(
    gens: &LieGeneratorSet,
    metric: &Metric,
    a: &[f64],
    t: f64,
    rng: &mut Rng,
) -> Vec<f64> {
    let mut d = Matrix::zeros(gens.dim, gens.dim);
    for g in &gens.generators {
        d = d.add(&g.scale(rng::normal(rng) / g.frobenius_norm().max(f64::MIN_POSITIVE)));
    }
    let speed = metric.norm(&d.matvec(a));
    if speed == 0.0 {
        return a.to_vec();
    }
    exp_operator(&d, t / speed).matvec(a)
}

/// `x ↦ λ₁(X) + ⋯ + λ_k(X)` on `Sⁿ` coordinates, with subgradients
/// `Σ qᵢqᵢᵀ` over the top-`k` eigenvectors. Eigenvalues within
/// `cluster_tol` of `λ_k` are ties, and every admissible choice among them
/// is returned.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSumOracle {
    pub n: usize,
    pub k: usize,
    pub cluster_tol: f64,
}

impl SpectralSumOracle {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        Ok(sym_eig(&smat(x, self.n), 1e-12)?
            .values
            .iter()
            .take(self.k)
            .sum())
    }

    pub fn subgradients(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        const MAX_CHOICES: usize = 64;
        let eig = sym_eig(&smat(x, self.n), 1e-12)?;
        let lk = eig.values[self.k - 1];
        let tied: Vec<usize> = (0..self.n)
            .filter(|&i| (eig.values[i] - lk).abs() <= self.cluster_tol * lk.abs().max(1.0))
            .collect();
        let above: Vec<usize> = (0..tied[0]).collect();
        let need = self.k - above.len();
        let projector = |idx: &[usize]| {
            let mut p = Matrix::zeros(self.n, self.n);
            for &i in idx {
                let q = eig.vectors.column(i);
                p = p.add(&Matrix::outer(&q, &q));
            }
            svec(&p)
        };
        let mut out = Vec::new();
        for choice in combinations(&tied, need).into_iter().take(MAX_CHOICES) {
            let mut idx = above.clone();
            idx.extend(choice);
            out.push(projector(&idx));
        }
        Ok(out)
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut rest in combinations(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out.extend(combinations(&items[1..], k));
    out
}
