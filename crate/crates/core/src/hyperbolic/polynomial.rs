use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::vector::max_abs;
use crate::numkernel::{real_roots, solve, Matrix, UnivariatePolynomial};
use crate::systems::eja::{svec, sym_dim, sym_index_pairs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coef: f64,
}

/// Built-in families whose completeness is known analytically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `x₁x₂⋯xₙ` with `e = (1,…,1)`.
    Product,
    /// `x₁² − x₂² − ⋯ − x_d²` with `e = (1,0,…,0)`.
    Spin,
    /// `det` on symmetric-matrix coordinates with `e = I`.
    Det,
}

/// Homogeneous polynomial on `ℝ^d`, hyperbolic with respect to `direction`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperbolicPolynomial {
    pub dim: usize,
    pub degree: usize,
    pub direction: Vec<f64>,
    pub monomials: Vec<Monomial>,
    #[serde(skip)]
    pub family: Option<Family>,
}

impl HyperbolicPolynomial {
    /// Validates homogeneity and `p(e) ≠ 0`, and merges repeated monomials.
    pub fn new(
        dim: usize,
        degree: usize,
        direction: Vec<f64>,
        monomials: Vec<Monomial>,
    ) -> Result<Self> {
        if dim == 0 || degree == 0 {
            return Err(Error::InvalidPolynomial(
                "dim and degree must be positive".into(),
            ));
        }
        if direction.len() != dim {
            return Err(Error::InvalidPolynomial(format!(
                "direction has length {}, expected {dim}",
                direction.len()
            )));
        }
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for m in monomials {
            if m.exponents.len() != dim {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {:?} has {} exponents, expected {dim}",
                    m.exponents,
                    m.exponents.len()
                )));
            }
            let total: u32 = m.exponents.iter().sum();
            if total as usize != degree {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {:?} has degree {total}, expected {degree}",
                    m.exponents
                )));
            }
            if !m.coef.is_finite() {
                return Err(Error::InvalidPolynomial(
                    "coefficients must be finite".into(),
                ));
            }
            *merged.entry(m.exponents).or_insert(0.0) += m.coef;
        }
        let monomials: Vec<Monomial> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coef)| Monomial { exponents, coef })
            .collect();
        let p = Self {
            dim,
            degree,
            direction,
            monomials,
            family: None,
        };
        if p.eval(&p.direction).abs() <= 1e-12 {
            return Err(Error::InvalidPolynomial("p(e) must be nonzero".into()));
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: HyperbolicPolynomial =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let mut p = Self::new(raw.dim, raw.degree, raw.direction, raw.monomials)?;
        p.family = p.recognize_family();
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomials serialize")
    }

    fn same_as(&self, other: &HyperbolicPolynomial) -> bool {
        self.dim == other.dim
            && self.degree == other.degree
            && self.direction == other.direction
            && self.monomials.len() == other.monomials.len()
            && self.monomials.iter().zip(&other.monomials).all(|(a, b)| {
                a.exponents == b.exponents && (a.coef - b.coef).abs() <= 1e-12 * b.coef.abs()
            })
    }

    /// Tags a loaded polynomial that coincides with a built-in family.
    fn recognize_family(&self) -> Option<Family> {
        let mut candidates = vec![product_polynomial(self.dim)];
        if self.dim >= 2 {
            candidates.push(spin_polynomial(self.dim));
        }
        if let Some(n) = crate::systems::eja::sym_order(self.dim) {
            candidates.push(det_polynomial(n));
        }
        candidates
            .into_iter()
            .find(|c| self.same_as(c))
            .and_then(|c| c.family)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|m| {
                m.coef
                    * m.exponents
                        .iter()
                        .zip(x)
                        .map(|(e, v)| v.powi(*e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Coefficients (ascending in `t`) of `t ↦ p(te − x)`, interpolated at
    /// Chebyshev nodes in `[−1, 1]`.
    pub fn characteristic(&self, x: &[f64]) -> Result<UnivariatePolynomial> {
        let n = self.degree;
        let mut v = Matrix::zeros(n + 1, n + 1);
        let mut rhs = vec![0.0; n + 1];
        for (k, slot) in rhs.iter_mut().enumerate() {
            // Chebyshev nodes keep the Vandermonde system well conditioned
            let t = (std::f64::consts::PI * (k as f64 + 0.5) / (n + 1) as f64).cos();
            for j in 0..=n {
                v[(k, j)] = t.powi(j as i32);
            }
            let point: Vec<f64> = self
                .direction
                .iter()
                .zip(x)
                .map(|(e, xi)| t * e - xi)
                .collect();
            *slot = self.eval(&point);
        }
        let coeffs = solve(&v, &rhs)?;
        UnivariatePolynomial::new(coeffs)
    }

    /// Roots of `t ↦ p(te − x)` in decreasing order.
    pub fn eigmap(&self, x: &[f64], tol: f64) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let n = self.degree as f64;
        // λ(sx + re) = sλ(x) + r: first find the mean eigenvalue, then
        // recover the spread from a centred unit-scale input
        let s = max_abs(x);
        if s == 0.0 {
            return Ok(vec![0.0; self.degree]);
        }
        let scaled: Vec<f64> = x.iter().map(|v| v / s).collect();
        let q = self.characteristic(&scaled)?;
        let c = q.coeffs();
        let mean = -c[self.degree - 1] / (n * c[self.degree]);
        let centred: Vec<f64> = scaled
            .iter()
            .zip(&self.direction)
            .map(|(v, e)| v - mean * e)
            .collect();
        let spread = max_abs(&centred);
        if spread <= 1e-15 {
            return Ok(vec![mean * s; self.degree]);
        }
        let unit: Vec<f64> = centred.iter().map(|v| v / spread).collect();
        let roots = real_roots(
            &self.characteristic(&unit)?,
            tol * (1.0 + s * (mean.abs() + spread)) / (s * spread),
        )?;
        Ok(roots.into_iter().map(|r| (r * spread + mean) * s).collect())
    }
}

pub fn product_polynomial(n: usize) -> HyperbolicPolynomial {
    let mut p = HyperbolicPolynomial::new(
        n,
        n,
        vec![1.0; n],
        vec![Monomial {
            exponents: vec![1; n],
            coef: 1.0,
        }],
    )
    .expect("valid product polynomial");
    p.family = Some(Family::Product);
    p
}

pub fn spin_polynomial(d: usize) -> HyperbolicPolynomial {
    let mut e = vec![0.0; d];
    e[0] = 1.0;
    let monomials = (0..d)
        .map(|i| {
            let mut exponents = vec![0; d];
            exponents[i] = 2;
            Monomial {
                exponents,
                coef: if i == 0 { 1.0 } else { -1.0 },
            }
        })
        .collect();
    let mut p = HyperbolicPolynomial::new(d, 2, e, monomials).expect("valid spin polynomial");
    p.family = Some(Family::Spin);
    p
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm with sign tracking
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1.0)];
    let mut sign = 1.0;
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `det` on the orthonormal coordinates of Sⁿ, expanded by the Leibniz
/// formula.
pub fn det_polynomial(n: usize) -> HyperbolicPolynomial {
    let d = sym_dim(n);
    let mut index = vec![vec![0usize; n]; n];
    for (k, (i, j)) in sym_index_pairs(n).into_iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let mut monomials = Vec::new();
    for (perm, sign) in permutations(n) {
        let mut exponents = vec![0u32; d];
        let mut coef = sign;
        for (i, &j) in perm.iter().enumerate() {
            exponents[index[i][j]] += 1;
            if i != j {
                coef *= FRAC_1_SQRT_2;
            }
        }
        monomials.push(Monomial { exponents, coef });
    }
    let e = svec(&Matrix::identity(n));
    let mut p = HyperbolicPolynomial::new(d, n, e, monomials).expect("valid determinant");
    // Leibniz terms that cancel leave roundoff-sized coefficients behind
    p.monomials.retain(|m| m.coef.abs() > 1e-14);
    p.family = Some(Family::Det);
    p
}

/// `x₁(x₁² − x₂²)` on `ℝ³` with `e = (1,0,0)`: hyperbolic but blind to `x₃`,
/// hence not complete.
pub fn degenerate_cubic() -> HyperbolicPolynomial {
    HyperbolicPolynomial::new(
        3,
        3,
        vec![1.0, 0.0, 0.0],
        vec![
            Monomial {
                exponents: vec![3, 0, 0],
                coef: 1.0,
            },
            Monomial {
                exponents: vec![1, 2, 0],
                coef: -1.0,
            },
        ],
    )
    .expect("valid cubic")
}
