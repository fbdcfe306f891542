//! Orthonormal bases for the complement of the constant vector under a
//! weighted inner product ⟨x, y⟩ = Σ w_i x_i y_i.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplementBasis {
    /// Recursive halving: each split contributes 1_L/w(L) − 1_R/w(R),
    /// normalized. Vectors from the deepest splits come first, left to right.
    #[default]
    HaarBisection,
    /// Modified Gram-Schmidt over (1, e_1, e_2, ...).
    GramSchmidt,
}

/// The unit-norm constant vector with positive entries.
pub fn constant_vector(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    vec![1.0 / total.sqrt(); weights.len()]
}

pub fn weighted_dot(weights: &[f64], x: &[f64], y: &[f64]) -> f64 {
    weights.iter().zip(x).zip(y).map(|((w, a), b)| w * a * b).sum()
}

/// `weights.len() - 1` orthonormal vectors spanning the complement of the
/// constant vector.
pub fn complement(weights: &[f64], method: ComplementBasis) -> Vec<Vec<f64>> {
    match method {
        ComplementBasis::HaarBisection => haar_bisection(weights),
        ComplementBasis::GramSchmidt => gram_schmidt(weights),
    }
}

fn haar_bisection(weights: &[f64]) -> Vec<Vec<f64>> {
    let n = weights.len();
    let mut found: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    let mut stack = vec![(0usize, n, 0usize)];
    while let Some((lo, hi, depth)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let mid = lo + (hi - lo).div_ceil(2);
        let wl: f64 = weights[lo..mid].iter().sum();
        let wr: f64 = weights[mid..hi].iter().sum();
        let norm = (1.0 / wl + 1.0 / wr).sqrt();
        let mut u = vec![0.0; n];
        for x in &mut u[lo..mid] {
            *x = 1.0 / (wl * norm);
        }
        for x in &mut u[mid..hi] {
            *x = -1.0 / (wr * norm);
        }
        found.push((depth, lo, u));
        stack.push((lo, mid, depth + 1));
        stack.push((mid, hi, depth + 1));
    }
    found.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    found.into_iter().map(|(_, _, u)| u).collect()
}

fn gram_schmidt(weights: &[f64]) -> Vec<Vec<f64>> {
    let n = weights.len();
    let mut basis = vec![constant_vector(weights)];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut u = vec![0.0; n];
        u[i] = 1.0;
        for b in &basis {
            let proj = weighted_dot(weights, b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
        let norm = weighted_dot(weights, &u, &u).sqrt();
        if norm > 1e-12 {
            basis.push(u.iter().map(|x| x / norm).collect());
        }
    }
    basis.remove(0);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_orthonormal(weights: &[f64], vecs: &[Vec<f64>]) {
        let mut all = vec![constant_vector(weights)];
        all.extend_from_slice(vecs);
        assert_eq!(all.len(), weights.len());
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((weighted_dot(weights, a, b) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn haar_on_eight_equal_weights() {
        let w = vec![1.0 / 32.0; 8];
        let c = complement(&w, ComplementBasis::HaarBisection);
        check_orthonormal(&w, &c);
        let r2 = 2f64.sqrt();
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&c[0], &[4.0, -4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(close(&c[3], &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, -4.0]));
        assert!(close(
            &c[4],
            &[2.0 * r2, 2.0 * r2, -2.0 * r2, -2.0 * r2, 0.0, 0.0, 0.0, 0.0]
        ));
        assert!(close(&c[6], &[2.0, 2.0, 2.0, 2.0, -2.0, -2.0, -2.0, -2.0]));
        assert!(close(&constant_vector(&w), &[2.0; 8]));
    }

    #[test]
    fn uneven_sizes_and_weights() {
        for n in 1..12 {
            let w: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
            check_orthonormal(&w, &complement(&w, ComplementBasis::HaarBisection));
            check_orthonormal(&w, &complement(&w, ComplementBasis::GramSchmidt));
        }
    }

    #[test]
    fn gram_schmidt_first_vector() {
        let w = vec![0.5, 0.5];
        let c = complement(&w, ComplementBasis::GramSchmidt);
        assert_eq!(c.len(), 1);
        assert!((c[0][0] - 1.0).abs() < 1e-12 && (c[0][1] + 1.0).abs() < 1e-12);
    }
}
