//! Cuntz-Krieger partial isometries of the path-space representation, as
//! matrices between finite cylinder levels.
//!
//! The level-n space is spanned by the normalized indicators
//! Θ_λ / √M(Z(λ)) with d(λ) = n, an orthonormal basis for L²(M) functions
//! constant on degree-n cylinders. S_λ maps level n to level n + d(λ).

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::KGraph;
use crate::measure::{CylinderFn, MeasureSpec};
use crate::path::Path;

#[derive(Clone, Debug)]
pub struct LevelSpace {
    pub level: Degree,
    pub basis: Vec<Path>,
    pub weights: Vec<f64>,
    index: HashMap<Path, usize>,
}

impl LevelSpace {
    pub fn new(graph: &KGraph, spec: &MeasureSpec, level: &Degree) -> Result<LevelSpace> {
        if level.k() != graph.k() {
            return Err(Error::DegreeLength {
                expected: graph.k(),
                got: level.k(),
            });
        }
        let basis = graph.enumerate_paths(level, None, None);
        let weights: Vec<f64> = basis.iter().map(|p| spec.cylinder(p)).collect();
        if let Some(i) = weights.iter().position(|&w| w <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cylinder of {} has zero measure",
                graph.label(&basis[i])
            )));
        }
        let index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(LevelSpace {
            level: level.clone(),
            basis,
            weights,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coordinates of f in the normalized basis: c_λ √M(Z(λ)) after refining.
    pub fn coords(&self, graph: &KGraph, f: &CylinderFn) -> Result<Vec<f64>> {
        let refined = f.refine(graph, &self.level)?;
        let mut out = vec![0.0; self.dim()];
        for (p, c) in refined.terms() {
            let i = self.index_of(p).expect("refined path lies in the level basis");
            out[i] += c * self.weights[i].sqrt();
        }
        Ok(out)
    }

    /// Inverse of [`LevelSpace::coords`].
    pub fn function(&self, coords: &[f64]) -> CylinderFn {
        CylinderFn::from_terms(
            self.basis
                .iter()
                .zip(coords)
                .zip(&self.weights)
                .filter(|((_, c), _)| **c != 0.0)
                .map(|((p, c), w)| (p.clone(), c / w.sqrt())),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub domain: Degree,
    pub codomain: Degree,
    pub matrix: DMatrix<f64>,
}

impl OperatorMatrix {
    /// `self ∘ rhs`; the codomain of `rhs` must be the domain of `self`.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rhs.codomain != self.domain {
            return Err(Error::LevelMismatch(format!(
                "cannot apply an operator on level {} to level {}",
                self.domain, rhs.codomain
            )));
        }
        Ok(OperatorMatrix {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rhs.domain != self.domain || rhs.codomain != self.codomain {
            return Err(Error::LevelMismatch("operands act between different levels".into()));
        }
        Ok(OperatorMatrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix + &rhs.matrix,
        })
    }

    /// Max absolute entry of `self - rhs`.
    pub fn distance(&self, rhs: &OperatorMatrix) -> f64 {
        assert_eq!(self.matrix.shape(), rhs.matrix.shape());
        (&self.matrix - &rhs.matrix).amax()
    }
}

/// Matrix of S_λ from level `domain` to level `domain + d(λ)`.
pub fn s_matrix(graph: &KGraph, spec: &MeasureSpec, lambda: &Path, domain: &Degree) -> Result<OperatorMatrix> {
    let codomain = domain + lambda.degree();
    let from = LevelSpace::new(graph, spec, domain)?;
    let to = LevelSpace::new(graph, spec, &codomain)?;
    s_matrix_between(graph, spec, lambda, &from, &to)
}

pub(crate) fn s_matrix_between(
    graph: &KGraph,
    spec: &MeasureSpec,
    lambda: &Path,
    from: &LevelSpace,
    to: &LevelSpace,
) -> Result<OperatorMatrix> {
    let phi = spec.shift_factor(lambda);
    let mut m = DMatrix::zeros(to.dim(), from.dim());
    for (j, mu) in from.basis.iter().enumerate() {
        if mu.range() != lambda.source() {
            continue;
        }
        let lm = graph.compose(lambda, mu)?;
        let i = to.index_of(&lm).expect("λμ has the codomain degree");
        m[(i, j)] = (to.weights[i] / (phi * from.weights[j])).sqrt();
    }
    Ok(OperatorMatrix {
        domain: from.level.clone(),
        codomain: to.level.clone(),
        matrix: m,
    })
}

/// Matrix of S_λ* from level `domain` to level `domain - d(λ)`.
pub fn s_star_matrix(graph: &KGraph, spec: &MeasureSpec, lambda: &Path, domain: &Degree) -> Result<OperatorMatrix> {
    let lower = domain.checked_sub(lambda.degree())?;
    Ok(s_matrix(graph, spec, lambda, &lower)?.adjoint())
}

/// S_λ f computed on cylinder terms: S_λ Θ_μ = Φ_λ^{-1/2} Θ_{λμ} when
/// r(μ) = s(λ); other terms are dropped.
pub fn apply_s(graph: &KGraph, spec: &MeasureSpec, lambda: &Path, f: &CylinderFn) -> CylinderFn {
    let scale = spec.shift_factor(lambda).powf(-0.5);
    CylinderFn::from_terms(
        f.terms()
            .filter(|(mu, _)| mu.range() == lambda.source())
            .map(|(mu, c)| (graph.compose(lambda, mu).expect("composable by filter"), scale * c)),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub degree: Degree,
    pub vertex: Option<String>,
    pub paths: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationDeviation {
    pub relation: &'static str,
    pub max_deviation: f64,
    pub checks: usize,
    pub witness: Option<Witness>,
}

impl RelationDeviation {
    fn new(relation: &'static str) -> Self {
        RelationDeviation {
            relation,
            max_deviation: 0.0,
            checks: 0,
            witness: None,
        }
    }

    fn record(&mut self, dev: f64, witness: impl FnOnce() -> Witness) {
        self.checks += 1;
        if self.witness.is_none() || dev > self.max_deviation {
            self.max_deviation = dev;
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CkReport {
    pub level: Degree,
    pub relations: Vec<RelationDeviation>,
}

impl CkReport {
    pub fn max_deviation(&self) -> f64 {
        self.relations.iter().map(|r| r.max_deviation).fold(0.0, f64::max)
    }

    pub fn deviation(&self, relation: &str) -> f64 {
        self.relations
            .iter()
            .find(|r| r.relation == relation)
            .map(|r| r.max_deviation)
            .unwrap_or(f64::NAN)
    }
}

/// Checks the four Cuntz-Krieger relations as matrix identities on cylinder
/// levels up to `level`:
/// CK1 vertex projections are orthogonal and sum to the identity at `level`;
/// CK2 S_μ S_λ = S_{μλ} whenever d(μ) + d(λ) ≤ `level`;
/// CK3 S_μ* S_μ = S_{s(μ)} for d(μ) ≤ `level`;
/// CK4 S_v = Σ_{λ ∈ vΛ^n} S_λ S_λ* at `level` for every n ≤ `level`.
pub fn check_ck_relations(graph: &KGraph, spec: &MeasureSpec, level: &Degree) -> Result<CkReport> {
    if level.k() != graph.k() {
        return Err(Error::DegreeLength {
            expected: graph.k(),
            got: level.k(),
        });
    }
    if level.is_zero() {
        return Err(Error::LevelTooSmall(level.clone()));
    }
    let mut spaces: HashMap<Degree, LevelSpace> = HashMap::new();
    for d in level.below() {
        spaces.insert(d.clone(), LevelSpace::new(graph, spec, &d)?);
    }
    let s_at = |lambda: &Path, domain: &Degree| -> Result<OperatorMatrix> {
        let to = domain + lambda.degree();
        s_matrix_between(graph, spec, lambda, &spaces[domain], &spaces[&to])
    };
    let paths_of = |d: &Degree| graph.enumerate_paths(d, None, None);
    let names = |ps: &[&Path]| ps.iter().map(|p| graph.label(p)).collect::<Vec<_>>();
    let vertex_name = |v: usize| Some(graph.vertex_name(v).to_string());

    let mut ck1 = RelationDeviation::new("CK1");
    let top = &spaces[level];
    let projections: Vec<OperatorMatrix> = (0..graph.vertex_count())
        .map(|v| s_at(&graph.vertex_path(v), level))
        .collect::<Result<_>>()?;
    let mut sum = DMatrix::<f64>::zeros(top.dim(), top.dim());
    for (v, pv) in projections.iter().enumerate() {
        sum += &pv.matrix;
        for (w, pw) in projections.iter().enumerate() {
            let prod = &pv.matrix * &pw.matrix;
            let dev = if v == w {
                (&prod - &pv.matrix).amax()
            } else {
                prod.amax()
            };
            ck1.record(dev, || Witness {
                degree: level.clone(),
                vertex: vertex_name(v),
                paths: vec![graph.vertex_name(w).to_string()],
            });
        }
    }
    let dev = (&sum - DMatrix::<f64>::identity(top.dim(), top.dim())).amax();
    ck1.record(dev, || Witness {
        degree: level.clone(),
        vertex: None,
        paths: Vec::new(),
    });

    let mut ck2 = RelationDeviation::new("CK2");
    for a in level.below() {
        let rest = level.checked_sub(&a)?;
        for b in rest.below() {
            let domain = rest.checked_sub(&b)?;
            for mu in paths_of(&a) {
                for lambda in graph.enumerate_paths(&b, Some(mu.source()), None) {
                    let lhs = s_at(&mu, &(&domain + &b))?.compose(&s_at(&lambda, &domain)?)?;
                    let rhs = s_at(&graph.compose(&mu, &lambda)?, &domain)?;
                    ck2.record(lhs.distance(&rhs), || Witness {
                        degree: &a + &b,
                        vertex: None,
                        paths: names(&[&mu, &lambda]),
                    });
                }
            }
        }
    }

    let mut ck3 = RelationDeviation::new("CK3");
    for a in level.below() {
        let domain = level.checked_sub(&a)?;
        for mu in paths_of(&a) {
            let s = s_at(&mu, &domain)?;
            let lhs = s.adjoint().compose(&s)?;
            let rhs = s_at(&graph.vertex_path(mu.source()), &domain)?;
            ck3.record(lhs.distance(&rhs), || Witness {
                degree: a.clone(),
                vertex: vertex_name(mu.source()),
                paths: names(&[&mu]),
            });
        }
    }

    let mut ck4 = RelationDeviation::new("CK4");
    for n in level.below() {
        let lower = level.checked_sub(&n)?;
        for v in 0..graph.vertex_count() {
            let mut acc = OperatorMatrix {
                domain: level.clone(),
                codomain: level.clone(),
                matrix: DMatrix::zeros(top.dim(), top.dim()),
            };
            for lambda in graph.enumerate_paths(&n, Some(v), None) {
                let s = s_at(&lambda, &lower)?;
                acc = acc.add(&s.compose(&s.adjoint())?)?;
            }
            ck4.record(acc.distance(&projections[v]), || Witness {
                degree: n.clone(),
                vertex: vertex_name(v),
                paths: Vec::new(),
            });
        }
    }

    Ok(CkReport {
        level: level.clone(),
        relations: vec![ck1, ck2, ck3, ck4],
    })
}

/// Largest |M(Z(λμ)) / (Φ_λ M(Z(μ))) − 1| over composable λ, μ with
/// d(λ), d(μ) ≤ `bound`; zero means the Radon-Nikodym derivative of each
/// prefixing map is the constant Φ_λ.
pub fn radon_nikodym_deviation(graph: &KGraph, spec: &MeasureSpec, bound: &Degree) -> f64 {
    let mut worst = 0.0f64;
    for a in bound.below() {
        for lambda in graph.enumerate_paths(&a, None, None) {
            let phi = spec.shift_factor(&lambda);
            for b in bound.below() {
                for mu in graph.enumerate_paths(&b, Some(lambda.source()), None) {
                    let lm = graph.compose(&lambda, &mu).expect("composable");
                    let ratio = spec.cylinder(&lm) / (phi * spec.cylinder(&mu));
                    worst = worst.max((ratio - 1.0).abs());
                }
            }
        }
    }
    worst
}
