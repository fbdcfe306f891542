//! Rectangular wavelets on the path space, Markov wavelets on the full
//! shift, and subspace comparison between shapes.
//!
//! For a shape J and vertex v, D_v^J lists the paths of degree J with range
//! v. The vectors c^{m,v} over D_v^J are orthonormal for the weights
//! M(Z(λ)), with c^{0,v} constant; f^{m,v} = Σ_λ c^{m,v}_λ Θ_λ. The level-n
//! basis is Θ_v/√x_v together with S_λ f^{m,v} for m ≥ 1, d(λ) = jJ,
//! s(λ) = v and j < n.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complement::{self, ComplementBasis};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::{KGraph, VertexId};
use crate::linalg;
use crate::measure::{CylinderFn, CylinderRecord, MeasureSpec};
use crate::path::Path;
use crate::sbfs::{apply_s, LevelSpace};

#[derive(Clone, Debug)]
pub struct VertexFamily {
    pub vertex: VertexId,
    /// D_v^J in path order.
    pub d_index: Vec<Path>,
    /// c^{0,v}, c^{1,v}, ... indexed like `d_index`.
    pub c_vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct WaveletFamily {
    pub shape: Degree,
    pub method: ComplementBasis,
    pub spec: MeasureSpec,
    pub per_vertex: Vec<VertexFamily>,
}

pub fn build_wavelet_family(
    graph: &KGraph,
    spec: &MeasureSpec,
    shape: &Degree,
    method: ComplementBasis,
) -> Result<WaveletFamily> {
    if shape.k() != graph.k() {
        return Err(Error::DegreeLength {
            expected: graph.k(),
            got: shape.k(),
        });
    }
    if shape.entries().contains(&0) {
        return Err(Error::BadShape(shape.clone()));
    }
    let mut per_vertex = Vec::with_capacity(graph.vertex_count());
    for v in 0..graph.vertex_count() {
        let d_index = graph.enumerate_paths(shape, Some(v), None);
        if d_index.is_empty() {
            return Err(Error::EmptyDv(graph.vertex_name(v).to_string()));
        }
        let weights: Vec<f64> = d_index.iter().map(|p| spec.cylinder(p)).collect();
        let mut c_vectors = vec![complement::constant_vector(&weights)];
        c_vectors.extend(complement::complement(&weights, method));
        per_vertex.push(VertexFamily {
            vertex: v,
            d_index,
            c_vectors,
        });
    }
    Ok(WaveletFamily {
        shape: shape.clone(),
        method,
        spec: spec.clone(),
        per_vertex,
    })
}

impl WaveletFamily {
    /// f^{m,v} as a combination of degree-J cylinders.
    pub fn function(&self, v: VertexId, m: usize) -> CylinderFn {
        let fam = &self.per_vertex[v];
        CylinderFn::from_terms(
            fam.d_index
                .iter()
                .zip(&fam.c_vectors[m])
                .filter(|(_, c)| **c != 0.0)
                .map(|(p, &c)| (p.clone(), c)),
        )
    }

    /// Θ_v / √M(Z(v)), equal to f^{0,v}.
    pub fn scaling(&self, graph: &KGraph, v: VertexId) -> CylinderFn {
        CylinderFn::from_terms([(graph.vertex_path(v), 1.0 / self.spec.vertex_mass(v).sqrt())])
    }

    /// (v, m, f^{m,v}) for every m ≥ 1, vertices in order.
    pub fn wavelets(&self) -> Vec<(VertexId, usize, CylinderFn)> {
        self.per_vertex
            .iter()
            .flat_map(|fam| (1..fam.c_vectors.len()).map(move |m| (fam.vertex, m, self.function(fam.vertex, m))))
            .collect()
    }

    pub fn wavelet_count(&self) -> usize {
        self.per_vertex.iter().map(|f| f.c_vectors.len() - 1).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelKind {
    Scaling,
    Wavelet,
}

/// Bookkeeping for one basis vector: S_{shift} f^{m,vertex} at scale j, or a
/// scaling function when `kind` is `Scaling`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub kind: LabelKind,
    pub j: Option<u32>,
    pub vertex: String,
    pub m: usize,
    pub shift: Vec<String>,
}

/// A finite orthonormal system of cylinder functions at one level, with
/// coordinates in the normalized indicator basis of that level.
#[derive(Clone, Debug)]
pub struct WaveletBasis {
    pub level: Degree,
    pub labels: Vec<BasisLabel>,
    pub vectors: Vec<CylinderFn>,
    space: LevelSpace,
    coords: DMatrix<f64>,
}

impl WaveletBasis {
    pub fn new(
        graph: &KGraph,
        spec: &MeasureSpec,
        level: &Degree,
        labels: Vec<BasisLabel>,
        vectors: Vec<CylinderFn>,
    ) -> Result<WaveletBasis> {
        let space = LevelSpace::new(graph, spec, level)?;
        let mut coords = DMatrix::zeros(space.dim(), vectors.len());
        for (j, f) in vectors.iter().enumerate() {
            coords.set_column(j, &DVector::from_vec(space.coords(graph, f)?));
        }
        Ok(WaveletBasis {
            level: level.clone(),
            labels,
            vectors,
            space,
            coords,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Dimension of the ambient level space, |Λ^level|.
    pub fn level_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn gram(&self) -> DMatrix<f64> {
        self.coords.transpose() * &self.coords
    }

    /// max |Gram − I|.
    pub fn gram_deviation(&self) -> f64 {
        let n = self.len();
        (self.gram() - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Orthonormal coordinate columns of the basis vectors.
    pub fn coordinates(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn space(&self) -> &LevelSpace {
        &self.space
    }

    /// ⟨b_i, f⟩ for each basis vector.
    pub fn analyze(&self, graph: &KGraph, f: &CylinderFn) -> Result<Vec<f64>> {
        let x = DVector::from_vec(self.space.coords(graph, f)?);
        Ok((self.coords.transpose() * x).iter().cloned().collect())
    }

    /// Σ a_i b_i as a level function.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<CylinderFn> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let y = &self.coords * DVector::from_column_slice(coeffs);
        Ok(self.space.function(y.as_slice()))
    }

    pub fn records(&self, graph: &KGraph) -> Vec<BasisRecord> {
        self.labels
            .iter()
            .zip(&self.vectors)
            .map(|(label, f)| BasisRecord {
                label: label.clone(),
                terms: f.to_records(graph),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    #[serde(flatten)]
    pub label: BasisLabel,
    pub terms: Vec<CylinderRecord>,
}

/// The shifted wavelets S_λ f^{m,v}, d(λ) = jJ, s(λ) = v, with labels.
pub fn detail_space(graph: &KGraph, family: &WaveletFamily, j: u32) -> (Vec<BasisLabel>, Vec<CylinderFn>) {
    let shift_degree = family.shape.scale(j);
    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    for fam in &family.per_vertex {
        let shifts = graph.enumerate_paths(&shift_degree, None, Some(fam.vertex));
        for m in 1..fam.c_vectors.len() {
            let f = family.function(fam.vertex, m);
            for lambda in &shifts {
                labels.push(BasisLabel {
                    kind: LabelKind::Wavelet,
                    j: Some(j),
                    vertex: graph.vertex_name(fam.vertex).to_string(),
                    m,
                    shift: graph.word_of(lambda),
                });
                vectors.push(apply_s(graph, &family.spec, lambda, &f));
            }
        }
    }
    (labels, vectors)
}

/// Scaling functions plus the detail spaces j = 0..depth-1, at level depth·J.
pub fn wavelet_basis(graph: &KGraph, family: &WaveletFamily, depth: u32) -> Result<WaveletBasis> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    for v in 0..graph.vertex_count() {
        labels.push(BasisLabel {
            kind: LabelKind::Scaling,
            j: None,
            vertex: graph.vertex_name(v).to_string(),
            m: 0,
            shift: Vec::new(),
        });
        vectors.push(family.scaling(graph, v));
    }
    for j in 0..depth {
        let (l, f) = detail_space(graph, family, j);
        labels.extend(l);
        vectors.extend(f);
    }
    WaveletBasis::new(graph, &family.spec, &family.shape.scale(depth), labels, vectors)
}

/// Scaling functions p_k^{-1/2} Θ_k and wavelets p_k^{-1/2} Σ_ℓ c^j_ℓ Θ_{kℓ}
/// for the Bernoulli measure on the N-letter full shift, shifted by every
/// word of length < `depth`, on words of length depth + 1.
pub fn markov_wavelets(
    n: usize,
    weights: &[f64],
    depth: u32,
    method: ComplementBasis,
) -> Result<(KGraph, WaveletBasis)> {
    if n < 2 {
        return Err(Error::BadWeights("need at least two letters".into()));
    }
    let graph = KGraph::bouquet(n);
    let spec = MeasureSpec::bernoulli(&graph, weights.to_vec())?;
    let letters: Vec<Path> = (0..n).map(|i| graph.edge_path(i)).collect();
    let c = complement::complement(weights, method);

    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    let mut mother = Vec::new();
    for (k, letter) in letters.iter().enumerate() {
        let scale = 1.0 / weights[k].sqrt();
        labels.push(BasisLabel {
            kind: LabelKind::Scaling,
            j: None,
            vertex: graph.edge(k).name.clone(),
            m: 0,
            shift: Vec::new(),
        });
        vectors.push(CylinderFn::from_terms([(letter.clone(), scale)]));
        for (j, cj) in c.iter().enumerate() {
            let f = CylinderFn::from_terms(
                letters
                    .iter()
                    .zip(cj)
                    .map(|(l, &x)| (graph.compose(letter, l).expect("bouquet words compose"), scale * x)),
            );
            mother.push((k, j + 1, f));
        }
    }
    for m in 0..depth {
        let words = graph.enumerate_paths(&Degree::new(vec![m]), None, None);
        for w in &words {
            for (k, j, f) in &mother {
                labels.push(BasisLabel {
                    kind: LabelKind::Wavelet,
                    j: Some(m),
                    vertex: graph.edge(*k).name.clone(),
                    m: *j,
                    shift: graph.word_of(w),
                });
                vectors.push(apply_s(&graph, &spec, w, f));
            }
        }
    }
    let basis = WaveletBasis::new(&graph, &spec, &Degree::new(vec![depth + 1]), labels, vectors)?;
    Ok((graph, basis))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceComparison {
    pub multiple: u32,
    pub dim_coarse: usize,
    pub dim_fine: usize,
    pub principal_angles: Vec<f64>,
    pub equal: bool,
}

/// Compares W_0 for the shape `fine` = ℓJ with W_0 ⊕ ... ⊕ W_{ℓ-1} for the
/// shape `coarse` = J, both at level ℓJ.
pub fn subspace_compare(
    graph: &KGraph,
    spec: &MeasureSpec,
    coarse: &Degree,
    fine: &Degree,
    method: ComplementBasis,
) -> Result<SubspaceComparison> {
    let ell = fine
        .multiple_of(coarse)
        .ok_or_else(|| Error::ShapeMismatch(format!("{fine} is not a positive multiple of {coarse}")))?;
    let small = build_wavelet_family(graph, spec, coarse, method)?;
    let big = build_wavelet_family(graph, spec, fine, method)?;
    let space = LevelSpace::new(graph, spec, fine)?;
    let to_matrix = |fs: &[CylinderFn]| -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(space.dim(), fs.len());
        for (j, f) in fs.iter().enumerate() {
            m.set_column(j, &DVector::from_vec(space.coords(graph, f)?));
        }
        Ok(m)
    };
    let mut coarse_fns = Vec::new();
    for j in 0..ell {
        coarse_fns.extend(detail_space(graph, &small, j).1);
    }
    let fine_fns: Vec<CylinderFn> = big.wavelets().into_iter().map(|(_, _, f)| f).collect();
    let a = to_matrix(&coarse_fns)?;
    let b = to_matrix(&fine_fns)?;
    let dim_coarse = linalg::orthonormalize(&a, 1e-10).ncols();
    let dim_fine = linalg::orthonormalize(&b, 1e-10).ncols();
    let angles = linalg::principal_angles(&a, &b)?;
    let equal = dim_coarse == dim_fine && angles.iter().all(|&t| t < 1e-8);
    Ok(SubspaceComparison {
        multiple: ell,
        dim_coarse,
        dim_fine,
        principal_angles: angles,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::inner_product;

    fn pf(g: &KGraph) -> MeasureSpec {
        MeasureSpec::perron_frobenius(g).unwrap()
    }

    #[test]
    fn lambda3_family() {
        let g = fixtures::lambda3();
        let fam = build_wavelet_family(&g, &pf(&g), &Degree::new(vec![1, 1]), ComplementBasis::default()).unwrap();
        assert_eq!(fam.per_vertex[0].d_index.len(), 2);
        let w = fam.wavelets();
        assert_eq!(w.len(), 1);
        let psi = &w[0].2;
        assert_eq!(psi.coefficient(&g.parse_path("e f1").unwrap()), 1.0);
        assert_eq!(psi.coefficient(&g.parse_path("e f2").unwrap()), -1.0);
    }

    #[test]
    fn bad_shape() {
        let g = fixtures::lambda3();
        let err = build_wavelet_family(&g, &pf(&g), &Degree::new(vec![0, 1]), ComplementBasis::default()).unwrap_err();
        assert_eq!(err.kind(), "bad-shape");
    }

    #[test]
    fn single_path_vertex_has_no_wavelets() {
        let g = KGraph::from_adjacency(&[vec![0, 1], vec![1, 0]]).unwrap();
        let fam = build_wavelet_family(&g, &pf(&g), &Degree::new(vec![1]), ComplementBasis::default()).unwrap();
        assert_eq!(fam.wavelet_count(), 0);
        let basis = wavelet_basis(&g, &fam, 2).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis.gram_deviation() < 1e-12);
    }

    #[test]
    fn lambda3_basis_sizes() {
        let g = fixtures::lambda3();
        let spec = pf(&g);
        let fam = build_wavelet_family(&g, &spec, &Degree::new(vec![1, 1]), ComplementBasis::default()).unwrap();
        for n in 1..=3 {
            let b = wavelet_basis(&g, &fam, n).unwrap();
            assert_eq!(b.len(), 1 << n);
            assert_eq!(b.len(), b.level_dim());
            assert!(b.gram_deviation() < 1e-12);
        }
    }

    #[test]
    fn lambda3_analyze_example() {
        let g = fixtures::lambda3();
        let spec = pf(&g);
        let fam = build_wavelet_family(&g, &spec, &Degree::new(vec![1, 1]), ComplementBasis::default()).unwrap();
        let b = wavelet_basis(&g, &fam, 1).unwrap();
        let f = CylinderFn::indicator(g.parse_path("e f1").unwrap());
        let coeffs = b.analyze(&g, &f).unwrap();
        assert!((coeffs[0] - 0.5).abs() < 1e-14 && (coeffs[1] - 0.5).abs() < 1e-14);
        let back = b.synthesize(&coeffs).unwrap();
        assert!(back.approx_eq(&g, &f, 1e-14).unwrap());
        for (v, i) in b.vectors.iter().zip(&coeffs) {
            assert!((inner_product(&spec, &g, v, &f) - i).abs() < 1e-14);
        }
    }

    #[test]
    fn scaling_coefficient() {
        let g = fixtures::ledrappier();
        let spec = pf(&g);
        let fam = build_wavelet_family(&g, &spec, &Degree::new(vec![1, 2]), ComplementBasis::default()).unwrap();
        let b = wavelet_basis(&g, &fam, 1).unwrap();
        let c = b.analyze(&g, &CylinderFn::indicator(g.vertex_path(2))).unwrap();
        for (i, x) in c.iter().enumerate() {
            let want = if i == 2 { 0.5 } else { 0.0 };
            assert!((x - want).abs() < 1e-13);
        }
    }

    #[test]
    fn markov_haar() {
        let (g, b) = markov_wavelets(2, &[0.5, 0.5], 0, ComplementBasis::default()).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.gram_deviation() < 1e-14);
        let (_, b) = markov_wavelets(2, &[0.5, 0.5], 1, ComplementBasis::default()).unwrap();
        let psi0 = &b.vectors[2];
        let r2 = 2f64.sqrt();
        assert!((psi0.coefficient(&g.parse_path("0 0").unwrap()) - r2).abs() < 1e-14);
        assert!((psi0.coefficient(&g.parse_path("0 1").unwrap()) + r2).abs() < 1e-14);
    }

    #[test]
    fn markov_counts() {
        let (_, b) = markov_wavelets(2, &[0.25, 0.75], 2, ComplementBasis::default()).unwrap();
        assert_eq!(b.len(), 8);
        assert!(b.gram_deviation() < 1e-12);
        assert_eq!(
            markov_wavelets(2, &[0.3, 0.3], 1, ComplementBasis::default())
                .unwrap_err()
                .kind(),
            "bad-weights"
        );
    }

    #[test]
    fn compare_self_and_mismatch() {
        let g = fixtures::lambda3();
        let spec = pf(&g);
        let j = Degree::new(vec![1, 1]);
        let r = subspace_compare(&g, &spec, &j, &j, ComplementBasis::default()).unwrap();
        assert!(r.equal && r.principal_angles.iter().all(|&a| a < 1e-12));
        let r = subspace_compare(&g, &spec, &j, &j.scale(2), ComplementBasis::default()).unwrap();
        assert_eq!((r.dim_coarse, r.dim_fine), (3, 3));
        assert!(r.equal && r.principal_angles.iter().all(|&a| a < 1e-12));
        let err = subspace_compare(&g, &spec, &j, &Degree::new(vec![2, 1]), ComplementBasis::default()).unwrap_err();
        assert_eq!(err.kind(), "shape-mismatch");
    }
}
