//! Small dense linear algebra: a cyclic Jacobi eigensolver and principal
//! angles between column spans.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct JacobiConfig {
    /// Stop once the off-diagonal Frobenius norm falls below
    /// `tol * max(1, ‖A‖_F)`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Allowed |A - Aᵀ| entry before the input is rejected.
    pub symmetry_tol: f64,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        JacobiConfig {
            tol: 1e-13,
            max_sweeps: 100,
            symmetry_tol: 1e-12,
        }
    }
}

/// Ascending eigenvalues and matching orthonormal eigenvector columns; each
/// eigenvector's first nonzero entry is positive.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn eig_sym(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    eig_sym_with(a, &JacobiConfig::default())
}

pub fn eig_sym_with(a: &DMatrix<f64>, config: &JacobiConfig) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    let asym = (a - a.transpose()).amax();
    if asym > config.symmetry_tol * a.amax().max(1.0) {
        return Err(Error::AsymmetricInput(asym));
    }
    let mut m = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let threshold = config.tol * m.norm().max(1.0);
    let off = |m: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) >= threshold {
        if sweeps == config.max_sweeps {
            return Err(Error::ConvergenceFailure(format!(
                "Jacobi sweeps exceeded {}",
                config.max_sweeps
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut x = v.column(i).into_owned();
        if let Some(first) = x.iter().find(|e| e.abs() > 1e-12) {
            if *first < 0.0 {
                x = -x;
            }
        }
        vectors.set_column(col, &x);
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Orthonormal basis (modified Gram-Schmidt) of the span of the columns;
/// columns whose remainder is below `eps` are dropped.
pub fn orthonormalize(columns: &DMatrix<f64>, eps: f64) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for j in 0..columns.ncols() {
        let mut u = columns.column(j).into_owned();
        for _ in 0..2 {
            for b in &kept {
                let proj = b.dot(&u);
                u -= b * proj;
            }
        }
        let norm = u.norm();
        if norm > eps {
            kept.push(u / norm);
        }
    }
    if kept.is_empty() {
        DMatrix::zeros(columns.nrows(), 0)
    } else {
        DMatrix::from_columns(&kept)
    }
}

/// Principal angles (ascending) between the column spans of `a` and `b`,
/// one per dimension of the smaller span. The columns need not be
/// orthonormal.
pub fn principal_angles(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let qa = orthonormalize(a, 1e-10);
    let qb = orthonormalize(b, 1e-10);
    let (q1, q2) = if qa.ncols() <= qb.ncols() { (qa, qb) } else { (qb, qa) };
    if q1.ncols() == 0 {
        return Ok(Vec::new());
    }
    let m = q1.transpose() * &q2;
    let resid = &q1 - &q2 * m.transpose();
    // Singular values keep small angles accurate where squared quantities
    // would lose half the digits.
    let mut cos: Vec<f64> = m.svd(false, false).singular_values.iter().cloned().collect();
    let mut sin: Vec<f64> = resid.svd(false, false).singular_values.iter().cloned().collect();
    cos.sort_by(|a, b| b.total_cmp(a));
    sin.sort_by(f64::total_cmp);
    Ok(cos
        .iter()
        .zip(&sin)
        .map(|(c, s)| s.max(0.0).atan2(c.max(0.0)))
        .collect())
}
