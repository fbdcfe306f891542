//! Spectral radii and the common Perron-Frobenius eigenvector.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::KGraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfData {
    /// ρ(A_i) per color.
    pub rho: Vec<f64>,
    /// Positive common eigenvector with ℓ¹ norm 1, indexed by vertex.
    pub x: Vec<f64>,
}

impl PfData {
    /// ρ(Λ)^{d} = Π ρ_i^{d_i}.
    pub fn rho_pow(&self, d: &Degree) -> f64 {
        self.rho
            .iter()
            .zip(d.entries())
            .map(|(r, &n)| r.powi(n as i32))
            .product()
    }

    pub fn rho_product(&self) -> f64 {
        self.rho.iter().product()
    }
}

#[derive(Clone, Debug)]
pub struct PfConfig {
    /// Stop when successive iterates differ by less than this in ℓ∞.
    pub tol: f64,
    pub max_iter: usize,
    /// Allowed spread of the per-vertex Rayleigh quotients.
    pub spread_tol: f64,
}

impl Default for PfConfig {
    fn default() -> Self {
        PfConfig {
            tol: 1e-13,
            max_iter: 1_000_000,
            spread_tol: 1e-10,
        }
    }
}

/// True when every vertex reaches every other along edges of any color.
pub fn is_strongly_connected(graph: &KGraph) -> bool {
    let n = graph.vertex_count();
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for e in graph.edges() {
        forward[e.source].push(e.range);
        backward[e.range].push(e.source);
    }
    let reach_all = |adj: &Vec<Vec<usize>>| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(&forward) && reach_all(&backward)
}

/// Fails with `HasSources` if some vertex receives no edge of some color.
pub fn check_no_sources(graph: &KGraph) -> Result<()> {
    for v in 0..graph.vertex_count() {
        for c in 0..graph.k() {
            if graph.incoming_count(v, c) == 0 {
                return Err(Error::HasSources {
                    vertex: graph.vertex_name(v).to_string(),
                    color: c + 1,
                });
            }
        }
    }
    Ok(())
}

pub fn float_matrices(graph: &KGraph) -> Vec<DMatrix<f64>> {
    graph.vertex_matrices().iter().map(|m| m.map(|x| x as f64)).collect()
}

pub fn pf_data(graph: &KGraph) -> Result<PfData> {
    pf_data_with(graph, &PfConfig::default())
}

/// Power iteration on I + Σ A_i, which is primitive for a strongly
/// connected graph and shares the common eigenvector of the A_i.
pub fn pf_data_with(graph: &KGraph, config: &PfConfig) -> Result<PfData> {
    if !is_strongly_connected(graph) {
        return Err(Error::NotStronglyConnected);
    }
    check_no_sources(graph)?;
    let n = graph.vertex_count();
    let mats = float_matrices(graph);
    let mut b = DMatrix::<f64>::identity(n, n);
    for m in &mats {
        b += m;
    }
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut converged = false;
    for _ in 0..config.max_iter {
        let mut next = &b * &x;
        let norm: f64 = next.iter().sum();
        next /= norm;
        let diff = (&next - &x).amax();
        x = next;
        if diff < config.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "power iteration did not settle within {} steps",
            config.max_iter
        )));
    }
    let mut rho = Vec::with_capacity(mats.len());
    for (i, m) in mats.iter().enumerate() {
        let ax = m * &x;
        let quotients: Vec<f64> = (0..n).map(|v| ax[v] / x[v]).collect();
        let hi = quotients.iter().cloned().fold(f64::MIN, f64::max);
        let lo = quotients.iter().cloned().fold(f64::MAX, f64::min);
        if hi - lo > config.spread_tol * hi.max(1.0) {
            return Err(Error::ConvergenceFailure(format!(
                "Rayleigh quotients of A_{} spread by {:e}",
                i + 1,
                hi - lo
            )));
        }
        rho.push(quotients.iter().sum::<f64>() / n as f64);
    }
    Ok(PfData {
        rho,
        x: x.iter().cloned().collect(),
    })
}

/// Perron-Frobenius data with exact rational eigenvector, available when
/// every ρ(A_i) is an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPf {
    pub rho: Vec<i64>,
    pub x: Vec<Rational64>,
}

impl ExactPf {
    pub fn rho_pow(&self, d: &Degree) -> Rational64 {
        self.rho
            .iter()
            .zip(d.entries())
            .fold(Rational64::one(), |acc, (&r, &n)| {
                acc * Rational64::from_integer(r.pow(n))
            })
    }

    pub fn to_float(&self) -> PfData {
        PfData {
            rho: self.rho.iter().map(|&r| r as f64).collect(),
            x: self.x.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect(),
        }
    }
}

pub fn pf_exact(graph: &KGraph) -> Result<ExactPf> {
    let approx = pf_data(graph)?;
    let mut rho = Vec::with_capacity(approx.rho.len());
    for (i, &r) in approx.rho.iter().enumerate() {
        let rounded = r.round();
        if (r - rounded).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "ρ(A_{}) = {r} is not an integer; exact mode unavailable",
                i + 1
            )));
        }
        rho.push(rounded as i64);
    }
    let n = graph.vertex_count();
    let mats = graph.vertex_matrices();
    // Rows of (A_i - ρ_i I) x = 0 plus Σ x = 1.
    let mut rows: Vec<Vec<Rational64>> = Vec::new();
    for (m, &r) in mats.iter().zip(&rho) {
        for v in 0..n {
            let mut row: Vec<Rational64> = (0..n)
                .map(|w| {
                    let mut a = Rational64::from_integer(m[(v, w)] as i64);
                    if v == w {
                        a -= Rational64::from_integer(r);
                    }
                    a
                })
                .collect();
            row.push(Rational64::zero());
            rows.push(row);
        }
    }
    let mut last = vec![Rational64::one(); n + 1];
    last[n] = Rational64::one();
    rows.push(last);
    let x = solve_exact(rows, n)
        .ok_or_else(|| Error::ConvergenceFailure("exact eigenvector system has no unique solution".into()))?;
    Ok(ExactPf { rho, x })
}

/// Gauss-Jordan elimination on an augmented system with `n` unknowns.
/// Returns the unique solution, or None if it is inconsistent or singular.
fn solve_exact(mut rows: Vec<Vec<Rational64>>, n: usize) -> Option<Vec<Rational64>> {
    let mut pivot_row = 0;
    for col in 0..n {
        let found = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, found);
        let p = rows[pivot_row][col];
        for entry in rows[pivot_row].iter_mut() {
            *entry /= p;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col];
                for (entry, pv) in row.iter_mut().zip(&pivot) {
                    *entry -= f * pv;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let x: Vec<Rational64> = rows[..n].iter().map(|r| r[n]).collect();
    if x.iter().any(|q| !q.is_positive()) {
        return None;
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HausdorffDimension {
    pub value: f64,
    /// False when some vertex matrix has an entry above 1, in which case the
    /// fractal embedding behind the formula does not exist.
    pub all_zero_one: bool,
}

/// s = (1/k) ln ρ(A_1⋯A_k) / ln N with N = |Λ⁰|.
pub fn hausdorff_dimension(graph: &KGraph) -> Result<HausdorffDimension> {
    let n = graph.vertex_count();
    if n <= 1 {
        return Err(Error::DegenerateVertexCount);
    }
    let pf = pf_data(graph)?;
    Ok(HausdorffDimension {
        value: pf.rho_product().ln() / (graph.k() as f64 * (n as f64).ln()),
        all_zero_one: !graph.has_multi_edges(),
    })
}
