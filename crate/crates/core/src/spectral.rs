//! Signed incidence matrices, the k-graph Laplacian Δ = Σ_s M_s M_sᵀ, the
//! graph Fourier transform and spectral wavelets ψ_{g,t,n}.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::kgraph::KGraph;
use crate::linalg::{self, JacobiConfig};

/// M_s for each color s: rows are vertices, columns the color-s edges in id
/// order; a non-loop edge has +1 at its range and −1 at its source, a loop
/// column is zero.
pub fn incidence_matrices(graph: &KGraph) -> Vec<DMatrix<i64>> {
    (0..graph.k())
        .map(|c| {
            let edges = graph.edges_of_color(c);
            let mut m = DMatrix::<i64>::zeros(graph.vertex_count(), edges.len());
            for (j, &e) in edges.iter().enumerate() {
                let edge = graph.edge(e);
                if edge.range != edge.source {
                    m[(edge.range, j)] = 1;
                    m[(edge.source, j)] = -1;
                }
            }
            m
        })
        .collect()
}

pub fn laplacian(incidence: &[DMatrix<i64>]) -> DMatrix<i64> {
    let n = incidence.first().map_or(0, |m| m.nrows());
    incidence
        .iter()
        .fold(DMatrix::zeros(n, n), |acc, m| acc + m * m.transpose())
}

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub laplacian: DMatrix<f64>,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column ℓ is the unit eigenvector for `values[ℓ]`.
    pub vectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<SpectralData> {
        Self::from_matrix_with(m, &JacobiConfig::default())
    }

    pub fn from_matrix_with(m: &DMatrix<f64>, config: &JacobiConfig) -> Result<SpectralData> {
        let eig = linalg::eig_sym_with(m, config)?;
        Ok(SpectralData {
            laplacian: m.clone(),
            values: eig.values,
            vectors: eig.vectors,
        })
    }

    pub fn of_graph(graph: &KGraph) -> Result<SpectralData> {
        let l = laplacian(&incidence_matrices(graph)).map(|x| x as f64);
        SpectralData::from_matrix(&l)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalue threshold below which a value counts as zero.
    pub fn zero_tol(&self) -> f64 {
        1e-9 * self.values.iter().fold(1.0f64, |a, v| a.max(v.abs()))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    /// f̂(ℓ) = ⟨v_ℓ, f⟩.
    pub fn gft(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f.len())?;
        Ok((self.vectors.transpose() * DVector::from_column_slice(f))
            .iter()
            .cloned()
            .collect())
    }

    pub fn igft(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check_len(coeffs.len())?;
        Ok((&self.vectors * DVector::from_column_slice(coeffs))
            .iter()
            .cloned()
            .collect())
    }

    /// g(tλ_ℓ) with round-off negatives clamped to zero.
    fn filter(&self, kernel: &KernelSpec, t: f64) -> Result<Vec<f64>> {
        let tol = self.zero_tol();
        self.values
            .iter()
            .map(|&l| {
                let l = if l < 0.0 && l > -tol { 0.0 } else { l };
                kernel.eval(t * l)
            })
            .collect()
    }

    /// ψ_{g,t,n}(m) = Σ_ℓ g(tλ_ℓ) v_ℓ(n) v_ℓ(m).
    pub fn spectral_wavelet(&self, kernel: &KernelSpec, t: f64, n: usize) -> Result<Vec<f64>> {
        if t < 0.0 {
            return Err(Error::NegativeArgument(t));
        }
        if n >= self.dim() {
            return Err(Error::InvalidArgument(format!("vertex index {n} out of range")));
        }
        let g = self.filter(kernel, t)?;
        let mut out = vec![0.0; self.dim()];
        for (l, gl) in g.iter().enumerate() {
            let a = gl * self.vectors[(n, l)];
            for (m, o) in out.iter_mut().enumerate() {
                *o += a * self.vectors[(m, l)];
            }
        }
        Ok(out)
    }

    /// The operator T_g^t = V diag(g(tλ)) Vᵀ.
    pub fn wavelet_operator(&self, kernel: &KernelSpec, t: f64) -> Result<DMatrix<f64>> {
        let g = self.filter(kernel, t)?;
        Ok(&self.vectors * DMatrix::from_diagonal(&DVector::from_vec(g)) * self.vectors.transpose())
    }

    pub fn default_grid(&self) -> Result<TGrid> {
        let tol = self.zero_tol();
        let positive: Vec<f64> = self.values.iter().cloned().filter(|&l| l > tol).collect();
        let (Some(min), Some(max)) = (
            positive.iter().cloned().reduce(f64::min),
            positive.iter().cloned().reduce(f64::max),
        ) else {
            return Err(Error::InvalidArgument("Laplacian has no positive eigenvalue".into()));
        };
        Ok(TGrid {
            lo: 1e-4 / max,
            hi: 1e4 / min,
            count: 2000,
        })
    }
}

/// Logarithmically spaced t values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl TGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.count >= 2) {
            return Err(Error::InvalidArgument(format!(
                "t-grid needs 0 < lo < hi and at least two points, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let step = (b - a) / (self.count - 1) as f64;
        (0..self.count).map(|i| (a + step * i as f64).exp()).collect()
    }

    /// Trapezoid weights for ∫ h(t) dt/t = ∫ h d(ln t).
    pub fn log_weights(&self) -> Vec<f64> {
        let step = (self.hi.ln() - self.lo.ln()) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 || i + 1 == self.count {
                    step / 2.0
                } else {
                    step
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub signal: Vec<f64>,
    pub cg: f64,
    /// (eigenvalue, ∫ g(tλ)² dt/t on the grid) for each positive eigenvalue.
    pub per_eigenvalue: Vec<(f64, f64)>,
}

/// f ≈ (1/C_g) Σ_n ∫ ⟨ψ_{g,t,n}, f⟩ ψ_{g,t,n} dt/t on the grid. The
/// component of f in the kernel of Δ is annihilated since g(0) = 0.
pub fn reconstruct(
    spec: &SpectralData,
    kernel: &KernelSpec,
    f: &[f64],
    grid: &TGrid,
    bound: f64,
) -> Result<Reconstruction> {
    spec.check_len(f.len())?;
    grid.validate()?;
    let cg = kernel.cg_constant()?;
    let ts = grid.points();
    let ws = grid.log_weights();
    let tol = spec.zero_tol();
    let mut per_eigenvalue = Vec::new();
    for &l in spec.values.iter().filter(|&&l| l > tol) {
        let mut q = 0.0;
        for (t, w) in ts.iter().zip(&ws) {
            let g = kernel.eval(t * l)?;
            q += w * g * g;
        }
        if ((q - cg) / cg).abs() > bound {
            return Err(Error::GridTooCoarse {
                eigenvalue: l,
                got: q,
                expected: cg,
            });
        }
        per_eigenvalue.push((l, q));
    }
    let n = spec.dim();
    let fv = DVector::from_column_slice(f);
    let mut acc = DVector::<f64>::zeros(n);
    for (t, w) in ts.iter().zip(&ws) {
        for v in 0..n {
            let psi = DVector::from_vec(spec.spectral_wavelet(kernel, *t, v)?);
            acc += &psi * (w * psi.dot(&fv));
        }
    }
    acc /= cg;
    Ok(Reconstruction {
        signal: acc.iter().cloned().collect(),
        cg,
        per_eigenvalue,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationRow {
    pub t: f64,
    /// |ψ_{g,t,n}(m)| / ‖ψ_{g,t,n}‖.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationTable {
    pub n: usize,
    pub m: usize,
    pub rows: Vec<LocalizationRow>,
    /// Least-squares slope of ln ratio against ln t over positive ratios.
    pub slope: Option<f64>,
}

pub fn localization_probe(
    spec: &SpectralData,
    kernel: &KernelSpec,
    n: usize,
    m: usize,
    ts: &[f64],
) -> Result<LocalizationTable> {
    if m >= spec.dim() {
        return Err(Error::InvalidArgument(format!("vertex index {m} out of range")));
    }
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let psi = spec.spectral_wavelet(kernel, t, n)?;
        let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let ratio = if norm > 0.0 { psi[m].abs() / norm } else { 0.0 };
        rows.push(LocalizationRow { t, ratio });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio > 1e-300 && r.t > 0.0)
        .map(|r| (r.t.ln(), r.ratio.ln()))
        .collect();
    let slope = (pts.len() >= 2).then(|| {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(LocalizationTable { n, m, rows, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kernel::default_kernel;

    #[test]
    fn bouquet_is_all_loops() {
        let g = fixtures::bouquet3();
        let inc = incidence_matrices(&g);
        assert!(inc[0].iter().all(|&x| x == 0));
        assert!(laplacian(&inc).iter().all(|&x| x == 0));
    }

    #[test]
    fn single_edge_column() {
        let g = KGraph::from_adjacency(&[vec![0, 0], vec![1, 0]]).unwrap();
        let m = &incidence_matrices(&g)[0];
        assert_eq!(m[(1, 0)], 1);
        assert_eq!(m[(0, 0)], -1);
    }

    #[test]
    fn laplacian_annihilates_constants() {
        for g in fixtures::all() {
            let l = laplacian(&incidence_matrices(&g));
            let ones = DMatrix::<i64>::from_element(g.vertex_count(), 1, 1);
            assert!((&l * ones).iter().all(|&x| x == 0));
            assert_eq!(l, l.transpose());
        }
    }

    #[test]
    fn gft_round_trip() {
        let s = SpectralData::of_graph(&fixtures::ledrappier()).unwrap();
        let f = [0.3, -1.2, 2.5, 0.7];
        let back = s.igft(&s.gft(&f).unwrap()).unwrap();
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(s.gft(&[1.0]).unwrap_err().kind(), "dimension-mismatch");
        let c = s.gft(&[1.0; 4]).unwrap();
        assert!(c[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn wavelet_basics() {
        let s = SpectralData::of_graph(&fixtures::ledrappier()).unwrap();
        let g = default_kernel();
        assert!(s.spectral_wavelet(&g, 0.0, 1).unwrap().iter().all(|&x| x == 0.0));
        for t in [0.05, 0.3, 1.0, 4.0] {
            for n in 0..4 {
                let psi = s.spectral_wavelet(&g, t, n).unwrap();
                assert!(psi.iter().all(|x| x.abs() > 1e-12));
                for m in 0..4 {
                    let other = s.spectral_wavelet(&g, t, m).unwrap();
                    assert!((psi[m] - other[n]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn frame_identity() {
        let s = SpectralData::of_graph(&fixtures::ledrappier()).unwrap();
        let g = default_kernel();
        let f = DVector::from_vec(vec![1.0, -2.0, 0.5, 0.25]);
        for t in [0.1, 0.5, 2.0] {
            let mut lhs = DVector::zeros(4);
            for n in 0..4 {
                let psi = DVector::from_vec(s.spectral_wavelet(&g, t, n).unwrap());
                lhs += &psi * psi.dot(&f);
            }
            let fhat = s.gft(f.as_slice()).unwrap();
            let mut rhs = DVector::zeros(4);
            for l in 0..4 {
                let gl = g.eval(t * s.values[l].max(0.0)).unwrap();
                rhs += s.vectors.column(l) * (gl * gl * fhat[l]);
            }
            assert!((lhs - rhs).amax() < 1e-12);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let s = SpectralData::of_graph(&fixtures::ledrappier()).unwrap();
        let grid = TGrid {
            lo: 0.1,
            hi: 1.0,
            count: 10,
        };
        let err = reconstruct(&s, &default_kernel(), &[1.0, -1.0, 0.0, 0.0], &grid, 1e-3).unwrap_err();
        assert_eq!(err.kind(), "grid-too-coarse");
    }

    #[test]
    fn path_graph_localization() {
        // 0 -> 1 -> 2 -> 3 -> 4; g(x) = x² below 1 makes ψ a column of t²Δ².
        let mut adj = vec![vec![0u32; 5]; 5];
        for v in 0..4 {
            adj[v + 1][v] = 1;
        }
        let g = KGraph::from_adjacency(&adj).unwrap();
        let s = SpectralData::of_graph(&g).unwrap();
        let lmax = s.values.iter().cloned().fold(0.0, f64::max);
        let ts: Vec<f64> = (1..=10).map(|i| i as f64 / (10.0 * lmax)).collect();
        let far = localization_probe(&s, &default_kernel(), 0, 3, &ts).unwrap();
        assert!(far.rows.iter().all(|r| r.ratio < 1e-12));
        let near = localization_probe(&s, &default_kernel(), 0, 2, &ts).unwrap();
        assert!(near.rows.iter().all(|r| r.ratio > 1e-3));
        assert!(near.slope.unwrap().abs() < 1e-9);
    }
}
