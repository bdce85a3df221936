use rayon::prelude::*;

use crate::error::Result;
use crate::ftvn::{CheckReport, SemiFtvnSystem, Status};
use crate::numkernel::optimize::{nelder_mead, NelderMeadOptions};
use crate::numkernel::vector::{add, sub};
use crate::rng;

/// Restarts below this count never support a `not_found` verdict.
pub const MIN_REFUTATION_RESTARTS: usize = 64;

#[derive(Debug, Clone)]
pub enum IsometricOutcome {
    Found { x: Vec<f64>, residual: f64 },
    NotFound { best: Vec<f64>, residual: f64 },
}

impl IsometricOutcome {
    pub fn found(&self) -> bool {
        matches!(self, IsometricOutcome::Found { .. })
    }

    pub fn residual(&self) -> f64 {
        match self {
            IsometricOutcome::Found { residual, .. }
            | IsometricOutcome::NotFound { residual, .. } => *residual,
        }
    }

    /// `not_found` is inconclusive: the property is existential and the
    /// search is local.
    pub fn report(
        &self,
        y: &[f64],
        z: &[f64],
        restarts: usize,
        seed: u64,
        tol: f64,
    ) -> CheckReport {
        let (status, witness) = match self {
            IsometricOutcome::Found { x, .. } => {
                (Status::Pass, vec![y.to_vec(), z.to_vec(), x.clone()])
            }
            IsometricOutcome::NotFound { best, .. } => (
                Status::Inconclusive,
                vec![y.to_vec(), z.to_vec(), best.clone()],
            ),
        };
        CheckReport {
            check_name: "isometric_probe".into(),
            status,
            max_residual: self.residual(),
            witness: Some(witness),
            samples: restarts as u64,
            seed,
            tol,
        }
    }
}

/// Looks for `x` with `λ(x) = λ(z)` and `λ(x + y) = λ(x) + λ(y)` by
/// minimizing `‖λx − λz‖² + ‖λ(x+y) − λx − λy‖²` from enumerated orbit
/// points, the orbit maximizer of `⟨y, ·⟩`, and random restarts.
pub fn isometric_probe(
    sys: &SemiFtvnSystem,
    y: &[f64],
    z: &[f64],
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<IsometricOutcome> {
    let lz = sys.lambda(z)?;
    let ly = sys.lambda(y)?;
    let residual = |x: &[f64]| -> f64 {
        let (Ok(lx), Ok(lxy)) = (sys.lambda(x), sys.lambda(&add(x, y))) else {
            return f64::INFINITY;
        };
        let a = sys.norm_w(&sub(&lx, &lz));
        let b = sys.norm_w(&sub(&lxy, &add(&lx, &ly)));
        a * a + b * b
    };

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    if let Ok(points) = sys.enumerate_orbit(z) {
        candidates.extend(points);
    }
    if sys.maximizer().is_some() {
        candidates.push(sys.orbit_argmax(y, z)?);
    }
    candidates.push(z.to_vec());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x in candidates {
        let r = residual(&x);
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, x));
        }
    }
    if let Some((r, x)) = &best {
        if *r < tol {
            return Ok(IsometricOutcome::Found {
                x: x.clone(),
                residual: *r,
            });
        }
    }

    let mut rng = rng::stream("isometric_probe", seed);
    let scale = sys.norm_v(z).max(1.0);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|_| {
            rng::normal_vec(&mut rng, sys.dim_v)
                .into_iter()
                .map(|v| v * scale)
                .collect()
        })
        .collect();
    let opts = NelderMeadOptions {
        initial_step: 0.5 * scale,
        max_iter: 1500,
        ..Default::default()
    };
    let runs: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|x0| {
            let r = nelder_mead(residual, x0, opts);
            (r.value, r.x)
        })
        .collect();
    for (r, x) in runs {
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, x));
        }
    }
    let (r, x) = best.expect("at least one candidate");
    Ok(if r < tol {
        IsometricOutcome::Found { x, residual: r }
    } else {
        IsometricOutcome::NotFound {
            best: x,
            residual: r,
        }
    })
}
