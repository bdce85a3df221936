//! Dense vector helpers on plain slices.

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|a| alpha * a).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

/// Sorts `x` into non-increasing order.
///
/// Returns the sorted vector together with the permutation `perm` such that
/// `sorted[i] == x[perm[i]]`. Ties keep their original index order.
pub fn sort_desc(x: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..x.len()).collect();
    // sort_by is stable, so equal entries keep index order
    perm.sort_by(|&i, &j| x[j].total_cmp(&x[i]));
    let sorted = perm.iter().map(|&i| x[i]).collect();
    (sorted, perm)
}

pub fn sorted_desc(x: &[f64]) -> Vec<f64> {
    sort_desc(x).0
}
