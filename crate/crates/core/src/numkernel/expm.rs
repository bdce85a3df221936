//! Matrix exponential by scaling and squaring with a Taylor core.

use super::matrix::Matrix;

const TAYLOR_DEGREE: usize = 18;

/// `exp(t·D)`.
pub fn exp_operator(d: &Matrix, t: f64) -> Matrix {
    assert!(d.is_square(), "exp_operator needs a square matrix");
    let a = d.scale(t);
    let norm = a.frobenius_norm();
    let mut squarings = 0;
    let mut scaled = norm;
    while scaled > 0.5 {
        scaled *= 0.5;
        squarings += 1;
    }
    let b = a.scale(0.5_f64.powi(squarings));
    let n = a.rows();
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=TAYLOR_DEGREE {
        term = (&term * &b).scale(1.0 / k as f64);
        result = result.add(&term);
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
