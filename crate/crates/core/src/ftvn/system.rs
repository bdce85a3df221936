use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numkernel::vector::dot;
use crate::numkernel::{solve, sym_eig, Matrix};
use crate::rng::Rng;

pub type LambdaFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
pub type OrbitEnumerator = Arc<dyn Fn(&[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync>;
pub type OrbitMaximizer = Arc<dyn Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Send + Sync>;
pub type Sampler = Arc<dyn Fn(&mut Rng) -> Vec<f64> + Send + Sync>;

/// Inner product given by a Gram matrix, with a fast path for multiples of
/// the identity.
#[derive(Clone, Debug)]
pub struct Metric {
    gram: Matrix,
    scalar: Option<f64>,
}

impl Metric {
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        Self {
            gram: Matrix::identity(n).scale(s),
            scalar: Some(s),
        }
    }

    /// Validates symmetry and positive definiteness.
    pub fn from_gram(gram: Matrix) -> Result<Self> {
        let n = gram.rows();
        let eig = sym_eig(&gram, 1e-10)?;
        if eig
            .values
            .last()
            .is_some_and(|v| *v <= 1e-12 * eig.values[0].abs().max(1.0))
        {
            return Err(Error::NotPositiveDefinite("Gram matrix"));
        }
        let s = gram[(0, 0)];
        let is_scalar =
            (0..n).all(|i| (0..n).all(|j| gram[(i, j)] == if i == j { s } else { 0.0 }));
        Ok(Self {
            gram,
            scalar: is_scalar.then_some(s),
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.scalar {
            Some(s) => s * dot(x, y),
            None => self.gram.bilinear(x, y),
        }
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `G·x`, the Riesz representer used to turn coordinates into functionals.
    pub fn lower(&self, x: &[f64]) -> Vec<f64> {
        match self.scalar {
            Some(s) => x.iter().map(|v| s * v).collect(),
            None => self.gram.matvec(x),
        }
    }

    /// `G⁻¹·x`, turning a functional back into a vector.
    pub fn raise(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.scalar {
            Some(s) => Ok(x.iter().map(|v| v / s).collect()),
            None => solve(&self.gram, x),
        }
    }
}

/// A triple `(V, W, λ)` together with its inner products and orbit
/// capabilities. Coordinates are arbitrary; inner products are carried by
/// Gram matrices.
#[derive(Clone)]
pub struct SemiFtvnSystem {
    pub name: String,
    pub dim_v: usize,
    pub dim_w: usize,
    lambda: LambdaFn,
    metric_v: Metric,
    metric_w: Metric,
    enumerator: Option<OrbitEnumerator>,
    maximizer: Option<OrbitMaximizer>,
    sampler: Sampler,
}

impl fmt::Debug for SemiFtvnSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemiFtvnSystem")
            .field("name", &self.name)
            .field("dim_v", &self.dim_v)
            .field("dim_w", &self.dim_w)
            .field("enumerator", &self.enumerator.is_some())
            .field("maximizer", &self.maximizer.is_some())
            .finish()
    }
}

impl SemiFtvnSystem {
    pub fn new(
        name: impl Into<String>,
        metric_v: Metric,
        metric_w: Metric,
        lambda: LambdaFn,
        sampler: Sampler,
    ) -> Self {
        Self {
            name: name.into(),
            dim_v: metric_v.dim(),
            dim_w: metric_w.dim(),
            lambda,
            metric_v,
            metric_w,
            enumerator: None,
            maximizer: None,
            sampler,
        }
    }

    pub fn with_enumerator(mut self, e: OrbitEnumerator) -> Self {
        self.enumerator = Some(e);
        self
    }

    pub fn with_maximizer(mut self, m: OrbitMaximizer) -> Self {
        self.maximizer = Some(m);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim_v {
            return Err(Error::DimensionMismatch {
                expected: self.dim_v,
                found: x.len(),
            });
        }
        let w = (self.lambda)(x)?;
        if w.len() != self.dim_w {
            return Err(Error::DimensionMismatch {
                expected: self.dim_w,
                found: w.len(),
            });
        }
        Ok(w)
    }

    pub fn lambda_fn(&self) -> LambdaFn {
        self.lambda.clone()
    }

    pub fn metric_v(&self) -> &Metric {
        &self.metric_v
    }

    pub fn metric_w(&self) -> &Metric {
        &self.metric_w
    }

    pub fn inner_v(&self, x: &[f64], y: &[f64]) -> f64 {
        self.metric_v.inner(x, y)
    }

    pub fn inner_w(&self, x: &[f64], y: &[f64]) -> f64 {
        self.metric_w.inner(x, y)
    }

    pub fn norm_v(&self, x: &[f64]) -> f64 {
        self.metric_v.norm(x)
    }

    pub fn norm_w(&self, x: &[f64]) -> f64 {
        self.metric_w.norm(x)
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        (self.sampler)(rng)
    }

    pub fn sampler(&self) -> Sampler {
        self.sampler.clone()
    }

    pub fn enumerator(&self) -> Option<&OrbitEnumerator> {
        self.enumerator.as_ref()
    }

    pub fn maximizer(&self) -> Option<&OrbitMaximizer> {
        self.maximizer.as_ref()
    }

    pub fn has_orbit_access(&self) -> bool {
        self.enumerator.is_some() || self.maximizer.is_some()
    }

    /// Points of `[u]`; only available for systems with finite orbits.
    pub fn enumerate_orbit(&self, u: &[f64]) -> Result<Vec<Vec<f64>>> {
        match &self.enumerator {
            Some(e) => e(u),
            None => Err(Error::OrbitUnavailable(self.name.clone())),
        }
    }

    /// A maximizer of `⟨c, ·⟩` over `[u]`, by closed form when the system
    /// has one and by exhaustive enumeration otherwise.
    pub fn orbit_argmax(&self, c: &[f64], u: &[f64]) -> Result<Vec<f64>> {
        if let Some(m) = &self.maximizer {
            return m(c, u);
        }
        let points = self.enumerate_orbit(u)?;
        let mut best: Option<(f64, Vec<f64>)> = None;
        for x in points {
            let v = self.inner_v(c, &x);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
        best.map(|(_, x)| x)
            .ok_or_else(|| Error::OrbitUnavailable(format!("{}: empty orbit", self.name)))
    }
}
