use serde::{Deserialize, Serialize};

use crate::ftvn::{Metric, Status};
use crate::lie::{commute_rel, LieGeneratorSet};
use crate::rng;

/// Commutation conditions verified at a computed point `a` against a
/// direction `g` (a gradient, `h(a)`, a subgradient or a normal vector).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationCertificate {
    pub point: Vec<f64>,
    pub gradient: Vec<f64>,
    /// `|⟨Dᵢa, g⟩| / (‖Dᵢ‖_F‖a‖‖g‖)` per generator.
    pub generator_residuals: Vec<f64>,
    pub max_residual: f64,
    /// Fixed-point residual of the solver at `point`.
    pub stationarity: f64,
    pub iterations: usize,
    pub verdict: Status,
    pub tol: f64,
}

impl CommutationCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    /// Downgrades a pass to inconclusive when the solver did not converge.
    pub(crate) fn with_convergence(
        mut self,
        stationarity: f64,
        iterations: usize,
        converged: bool,
    ) -> Self {
        self.stationarity = stationarity;
        self.iterations = iterations;
        if !converged {
            self.verdict = Status::Inconclusive;
        }
        self
    }
}

/// Certificate for `a` commuting with `g` relative to `gens`.
pub fn certify(
    a: &[f64],
    g: &[f64],
    gens: &LieGeneratorSet,
    metric: &Metric,
    tol: f64,
) -> CommutationCertificate {
    let scale = metric.norm(a) * metric.norm(g);
    let generator_residuals: Vec<f64> = gens
        .generators
        .iter()
        .map(|d| {
            metric.inner(&d.matvec(a), g).abs() / (d.frobenius_norm() * scale + f64::MIN_POSITIVE)
        })
        .collect();
    let (ok, max_residual) = commute_rel(a, g, gens, metric, tol);
    CommutationCertificate {
        point: a.to_vec(),
        gradient: g.to_vec(),
        generator_residuals,
        max_residual,
        stationarity: 0.0,
        iterations: 0,
        verdict: if ok { Status::Pass } else { Status::Fail },
        tol,
    }
}

/// Convex combinations used to probe a finitely generated subdifferential:
/// the generators, their barycenter and `mixtures` random Dirichlet mixtures.
pub fn subdifferential_candidates(list: &[Vec<f64>], mixtures: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = list.to_vec();
    if list.len() < 2 {
        return out;
    }
    let dim = list[0].len();
    let combine = |w: &[f64]| {
        let total: f64 = w.iter().sum();
        let mut g = vec![0.0; dim];
        for (wi, gi) in w.iter().zip(list) {
            g.iter_mut().zip(gi).for_each(|(o, v)| *o += wi / total * v);
        }
        g
    };
    out.push(combine(&vec![1.0; list.len()]));
    let mut r = rng::stream("subdifferential_mixtures", seed);
    for _ in 0..mixtures {
        let w: Vec<f64> = (0..list.len())
            .map(|_| -rng::uniform(&mut r, f64::EPSILON, 1.0).ln())
            .collect();
        out.push(combine(&w));
    }
    out
}

/// Whether `a` commutes with every sampled element of the subdifferential
/// generated by `list`; returns the worst residual.
pub fn commutes_with_all(
    a: &[f64],
    list: &[Vec<f64>],
    gens: &LieGeneratorSet,
    metric: &Metric,
    seed: u64,
    tol: f64,
) -> (bool, f64) {
    let worst = subdifferential_candidates(list, 100, seed)
        .iter()
        .map(|g| commute_rel(a, g, gens, metric, tol).1)
        .fold(0.0, f64::max);
    (worst <= tol, worst)
}
