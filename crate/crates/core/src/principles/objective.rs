use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::ftvn::{Metric, SemiFtvnSystem};
use crate::numkernel::vector::{add, norm, sub};
use crate::numkernel::Matrix;
use crate::rng;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// `Θ + F∘λ`, where `Θ` is differentiable and `F` is defined on `W`.
/// Gradients are taken with respect to the inner product of `V`.
#[derive(Clone)]
pub struct ObjectiveSpec {
    pub theta_eval: ScalarFn,
    pub theta_grad: Option<VectorFn>,
    pub f_spectral: Option<ScalarFn>,
    pub metric: Metric,
    lambda: Option<crate::ftvn::LambdaFn>,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("analytic_gradient", &self.theta_grad.is_some())
            .field("spectral_part", &self.f_spectral.is_some())
            .finish_non_exhaustive()
    }
}

const FD_STEP: f64 = 1e-6;

/// Central-difference gradient of `f` in the inner product of `metric`.
pub fn fd_gradient(
    f: &dyn Fn(&[f64]) -> Result<f64>,
    metric: &Metric,
    x: &[f64],
) -> Result<Vec<f64>> {
    let mut partials = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = FD_STEP * x[i].abs().max(1.0);
        probe[i] = x[i] + h;
        let up = f(&probe)?;
        probe[i] = x[i] - h;
        let down = f(&probe)?;
        probe[i] = x[i];
        partials.push((up - down) / (2.0 * h));
    }
    metric.raise(&partials)
}

impl ObjectiveSpec {
    pub fn new(metric: &Metric, theta_eval: ScalarFn, theta_grad: Option<VectorFn>) -> Self {
        Self {
            theta_eval,
            theta_grad,
            f_spectral: None,
            metric: metric.clone(),
            lambda: None,
        }
    }

    /// `⟨c, x⟩`.
    pub fn linear(metric: &Metric, c: &[f64]) -> Self {
        let (m, c1, c2) = (metric.clone(), c.to_vec(), c.to_vec());
        Self::new(
            metric,
            Arc::new(move |x| Ok(m.inner(&c1, x))),
            Some(Arc::new(move |_| Ok(c2.clone()))),
        )
    }

    /// `½⟨x, Qx⟩ + ⟨c, x⟩` with `Q` self-adjoint for the metric.
    pub fn quadratic(metric: &Metric, q: &Matrix, c: &[f64]) -> Self {
        let (m, q1, q2, c1, c2) = (metric.clone(), q.clone(), q.clone(), c.to_vec(), c.to_vec());
        Self::new(
            metric,
            Arc::new(move |x| Ok(0.5 * m.inner(x, &q1.matvec(x)) + m.inner(&c1, x))),
            Some(Arc::new(move |x| Ok(add(&q2.matvec(x), &c2)))),
        )
    }

    /// Adds the invariant part `F∘λ`.
    pub fn with_spectral(mut self, sys: &SemiFtvnSystem, f: ScalarFn) -> Self {
        self.f_spectral = Some(f);
        self.lambda = Some(sys.lambda_fn());
        self
    }

    pub fn theta(&self, x: &[f64]) -> Result<f64> {
        (self.theta_eval)(x)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let mut v = self.theta(x)?;
        if let (Some(f), Some(l)) = (&self.f_spectral, &self.lambda) {
            v += f(&l(x)?)?;
        }
        Ok(v)
    }

    /// `Θ′(x)`, analytic when available.
    pub fn theta_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.theta_grad {
            Some(g) => g(x),
            None => fd_gradient(&*self.theta_eval, &self.metric, x),
        }
    }

    /// Gradient of `Θ + F∘λ`; the spectral part is differenced.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.theta_gradient(x)?;
        match (&self.f_spectral, &self.lambda) {
            (Some(f), Some(l)) => {
                let composed = |y: &[f64]| f(&l(y)?);
                Ok(add(&g, &fd_gradient(&composed, &self.metric, x)?))
            }
            _ => Ok(g),
        }
    }

    /// Relative gap between `Θ′(x)` and central differences.
    pub fn gradient_check(&self, x: &[f64]) -> Result<f64> {
        let g = self.theta_gradient(x)?;
        let fd = fd_gradient(&*self.theta_eval, &self.metric, x)?;
        Ok(norm(&sub(&g, &fd)) / norm(&fd).max(1.0))
    }

    /// Largest sampled `‖∇(x) − ∇(y)‖ / ‖x − y‖` around `x0`.
    pub fn lipschitz_estimate(&self, x0: &[f64], seed: u64) -> Result<f64> {
        let mut r = rng::stream("lipschitz_estimate", seed);
        let radius = norm(x0).max(1.0);
        let mut best = 0.0f64;
        for _ in 0..16 {
            let x: Vec<f64> = x0
                .iter()
                .map(|v| v + radius * rng::normal(&mut r))
                .collect();
            let y: Vec<f64> = x0
                .iter()
                .map(|v| v + radius * rng::normal(&mut r))
                .collect();
            let dx = self.metric.norm(&sub(&x, &y));
            if dx > 0.0 {
                best = best.max(
                    self.metric
                        .norm(&sub(&self.gradient(&x)?, &self.gradient(&y)?))
                        / dx,
                );
            }
        }
        Ok(best)
    }
}

/// Step sizes for projected (sub)gradient iterations, indexed from `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `1/L` from sampled gradients. For `L ≈ 0` (linear objectives) a long
    /// step, so a single projection lands on a minimizer.
    Auto,
    Constant(f64),
    /// `s₀/√k`.
    InverseSqrt(f64),
    /// `s₀·ratioᵏ⁻¹`.
    Geometric {
        initial: f64,
        ratio: f64,
    },
}

impl StepSchedule {
    pub fn step(&self, k: usize) -> f64 {
        let k = k.max(1) as f64;
        match *self {
            StepSchedule::Auto => 1.0,
            StepSchedule::Constant(s) => s,
            StepSchedule::InverseSqrt(s) => s / k.sqrt(),
            StepSchedule::Geometric { initial, ratio } => initial * ratio.powf(k - 1.0),
        }
    }

    /// Replaces `Auto` with a constant step for the given objective.
    pub fn resolve(self, obj: &ObjectiveSpec, x0: &[f64], seed: u64) -> Result<StepSchedule> {
        if self != StepSchedule::Auto {
            return Ok(self);
        }
        let l = obj.lipschitz_estimate(x0, seed)?;
        if l > 1e-12 {
            return Ok(StepSchedule::Constant(1.0 / l));
        }
        let g = obj.metric.norm(&obj.gradient(x0)?);
        let x = obj.metric.norm(x0);
        Ok(StepSchedule::Constant(if g > 0.0 {
            1e4 * (x / g).max(1.0)
        } else {
            1.0
        }))
    }
}
