//! Cylinder-set measures on the infinite path space and finite linear
//! combinations of cylinder indicators.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::KGraph;
use crate::path::Path;
use crate::pf::{self, ExactPf, PfData};

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    /// M(Z(λ)) = ρ(Λ)^{-d(λ)} x_{s(λ)}.
    PerronFrobenius(PfData),
    /// Product measure on a one-vertex 1-graph; weight i belongs to the
    /// i-th edge in id order.
    Bernoulli(Vec<f64>),
}

impl MeasureSpec {
    pub fn perron_frobenius(graph: &KGraph) -> Result<MeasureSpec> {
        Ok(MeasureSpec::PerronFrobenius(pf::pf_data(graph)?))
    }

    pub fn bernoulli(graph: &KGraph, weights: Vec<f64>) -> Result<MeasureSpec> {
        if graph.k() != 1 || graph.vertex_count() != 1 {
            return Err(Error::NotBouquet);
        }
        validate_weights(&weights, graph.edges().len())?;
        Ok(MeasureSpec::Bernoulli(weights))
    }

    /// M(Z(λ)).
    pub fn cylinder(&self, lambda: &Path) -> f64 {
        match self {
            MeasureSpec::PerronFrobenius(pf) => pf.x[lambda.source()] / pf.rho_pow(lambda.degree()),
            MeasureSpec::Bernoulli(p) => lambda.word().iter().map(|&e| p[e]).product(),
        }
    }

    /// Φ_λ = M(Z(λμ)) / M(Z(μ)), the same for every μ with r(μ) = s(λ).
    pub fn shift_factor(&self, lambda: &Path) -> f64 {
        match self {
            MeasureSpec::PerronFrobenius(pf) => 1.0 / pf.rho_pow(lambda.degree()),
            MeasureSpec::Bernoulli(p) => lambda.word().iter().map(|&e| p[e]).product(),
        }
    }

    pub fn vertex_mass(&self, v: usize) -> f64 {
        match self {
            MeasureSpec::PerronFrobenius(pf) => pf.x[v],
            MeasureSpec::Bernoulli(_) => 1.0,
        }
    }
}

pub fn validate_weights(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::BadWeights(format!("expected {n} weights, got {}", p.len())));
    }
    if let Some(bad) = p.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::BadWeights(format!("weight {bad} is outside (0,1)")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// M(Z(λ)) in exact arithmetic.
pub fn cylinder_exact(pf: &ExactPf, lambda: &Path) -> Rational64 {
    pf.x[lambda.source()] / pf.rho_pow(lambda.degree())
}

/// Paths τ of degree d(λ) ∨ d(μ) extending both λ and μ; Z(λ) ∩ Z(μ) is the
/// disjoint union of their cylinders.
pub fn mce(graph: &KGraph, lambda: &Path, mu: &Path) -> Vec<Path> {
    if lambda.range() != mu.range() {
        return Vec::new();
    }
    let top = lambda.degree().join(mu.degree());
    let rest = top.checked_sub(lambda.degree()).expect("join dominates");
    let zero = Degree::zero(graph.k());
    graph
        .extensions(lambda, &rest)
        .into_iter()
        .filter(|tau| graph.segment(tau, &zero, mu.degree()).expect("segment in range") == *mu)
        .collect()
}

/// Σ c_λ Θ_λ, a finite combination of cylinder indicators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CylinderFn {
    terms: BTreeMap<Path, f64>,
}

impl CylinderFn {
    pub fn new() -> Self {
        CylinderFn::default()
    }

    pub fn indicator(p: Path) -> Self {
        let mut f = CylinderFn::new();
        f.add_term(p, 1.0);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, f64)>>(terms: I) -> Self {
        let mut f = CylinderFn::new();
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn add_term(&mut self, p: Path, c: f64) {
        *self.terms.entry(p).or_insert(0.0) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, p: &Path) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, a: f64) -> CylinderFn {
        CylinderFn {
            terms: self.terms.iter().map(|(p, &c)| (p.clone(), a * c)).collect(),
        }
    }

    pub fn plus(&self, other: &CylinderFn) -> CylinderFn {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), c);
        }
        out
    }

    /// Drops terms whose coefficient is at most `eps` in absolute value.
    pub fn pruned(&self, eps: f64) -> CylinderFn {
        CylinderFn {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > eps)
                .map(|(p, &c)| (p.clone(), c))
                .collect(),
        }
    }

    /// Join of the degrees of all terms, or None when empty.
    pub fn max_degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys().map(|p| p.degree().clone());
        let first = it.next()?;
        Some(it.fold(first, |a, d| a.join(&d)))
    }

    /// Rewrites every Θ_μ as the sum of Θ_{μλ} over the extensions of μ to
    /// degree `level`.
    pub fn refine(&self, graph: &KGraph, level: &Degree) -> Result<CylinderFn> {
        let mut out = CylinderFn::new();
        for (p, c) in self.terms() {
            let rest = level.checked_sub(p.degree())?;
            if rest.is_zero() {
                out.add_term(p.clone(), c);
                continue;
            }
            for tau in graph.extensions(p, &rest) {
                out.add_term(tau, c);
            }
        }
        Ok(out)
    }

    /// ∫ f dM.
    pub fn integral(&self, spec: &MeasureSpec) -> f64 {
        self.terms().map(|(p, c)| c * spec.cylinder(p)).sum()
    }

    /// True when both refine to coefficient vectors within `tol` at the join
    /// of their degrees.
    pub fn approx_eq(&self, graph: &KGraph, other: &CylinderFn, tol: f64) -> Result<bool> {
        let level = match (self.max_degree(), other.max_degree()) {
            (Some(a), Some(b)) => a.join(&b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return Ok(true),
        };
        let diff = self
            .refine(graph, &level)?
            .plus(&other.refine(graph, &level)?.scaled(-1.0));
        let close = diff.terms().all(|(_, c)| c.abs() <= tol);
        Ok(close)
    }

    pub fn to_records(&self, graph: &KGraph) -> Vec<CylinderRecord> {
        self.terms()
            .map(|(p, c)| CylinderRecord {
                path: graph.word_of(p),
                vertex: p.is_vertex().then(|| graph.vertex_name(p.range()).to_string()),
                coeff: c,
            })
            .collect()
    }

    pub fn from_records(graph: &KGraph, records: &[CylinderRecord]) -> Result<CylinderFn> {
        let mut f = CylinderFn::new();
        for r in records {
            let p = match (&r.vertex, r.path.is_empty()) {
                (Some(v), true) => graph.vertex_path(graph.vertex(v)?),
                (None, false) => graph.path_from_names(&r.path)?,
                _ => {
                    return Err(Error::Parse(
                        "a record needs either a non-empty path or a vertex, not both".into(),
                    ))
                }
            };
            f.add_term(p, r.coeff);
        }
        Ok(f)
    }
}

/// ⟨f, g⟩ = Σ c_λ c'_μ M(Z(λ) ∩ Z(μ)).
pub fn inner_product(spec: &MeasureSpec, graph: &KGraph, f: &CylinderFn, g: &CylinderFn) -> f64 {
    let mut total = 0.0;
    for (l, a) in f.terms() {
        for (m, b) in g.terms() {
            if l.range() != m.range() {
                continue;
            }
            let overlap = if l.degree() == m.degree() {
                if l == m {
                    spec.cylinder(l)
                } else {
                    0.0
                }
            } else {
                mce(graph, l, m).iter().map(|t| spec.cylinder(t)).sum()
            };
            total += a * b * overlap;
        }
    }
    total
}

/// Serialized cylinder-function term. Vertex paths carry `vertex` and an
/// empty `path`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderRecord {
    pub path: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    pub coeff: f64,
}

/// The N-adic subinterval of [0, 1] coding the vertex itinerary of λ:
/// r(λ) followed by the source after each edge of the normal-form word.
pub fn embed_to_interval(graph: &KGraph, lambda: &Path) -> Result<(f64, f64)> {
    for (c, m) in graph.vertex_matrices().iter().enumerate() {
        if let Some(&value) = m.iter().find(|&&x| x > 1) {
            return Err(Error::NotZeroOne { color: c + 1, value });
        }
    }
    let n = graph.vertex_count() as f64;
    let mut digits = vec![lambda.range()];
    digits.extend(lambda.word().iter().map(|&e| graph.edge(e).source));
    let mut lo = 0.0;
    let mut scale = 1.0;
    for d in digits {
        scale /= n;
        lo += d as f64 * scale;
    }
    Ok((lo, lo + scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pf::pf_exact;

    fn spec(g: &KGraph) -> MeasureSpec {
        MeasureSpec::perron_frobenius(g).unwrap()
    }

    #[test]
    fn lambda3_values_exact() {
        let g = fixtures::lambda3();
        let pf = pf_exact(&g).unwrap();
        let m = |w: &str| cylinder_exact(&pf, &g.parse_path(w).unwrap());
        assert_eq!(m("e"), Rational64::new(1, 1));
        assert_eq!(m("e f1"), Rational64::new(1, 2));
        assert_eq!(m("e f2"), Rational64::new(1, 2));
        assert_eq!(m("e f1 e"), Rational64::new(1, 2));
        assert_eq!(m("e f1 e f2"), Rational64::new(1, 4));
    }

    #[test]
    fn ledrappier_level_weight() {
        let g = fixtures::ledrappier();
        let s = spec(&g);
        for p in g.enumerate_paths(&Degree::new(vec![1, 2]), None, None) {
            assert!((s.cylinder(&p) - 1.0 / 32.0).abs() < 1e-14);
        }
        assert!((s.cylinder(&g.vertex_path(2)) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn refine_examples() {
        let g = fixtures::lambda3();
        let e = CylinderFn::indicator(g.parse_path("e").unwrap());
        let r = e.refine(&g, &Degree::new(vec![1, 1])).unwrap();
        let labels: Vec<String> = r.terms().map(|(p, _)| g.label(p)).collect();
        assert_eq!(labels, ["ef1", "ef2"]);
        assert_eq!(r.refine(&g, &Degree::new(vec![1, 1])).unwrap(), r);
        assert!(r.refine(&g, &Degree::new(vec![0, 1])).is_err());

        let l = fixtures::ledrappier();
        let v1 = CylinderFn::indicator(l.vertex_path(0));
        assert_eq!(v1.refine(&l, &Degree::new(vec![1, 2])).unwrap().len(), 8);
    }

    #[test]
    fn mce_examples() {
        let g = fixtures::lambda3();
        let p = |w: &str| g.parse_path(w).unwrap();
        assert_eq!(mce(&g, &p("e"), &p("e")), vec![p("e")]);
        let common: Vec<String> = mce(&g, &p("e"), &p("f1")).iter().map(|t| g.label(t)).collect();
        assert_eq!(common, ["ef2"]);
        assert!(mce(&g, &p("e f1"), &p("e f2")).is_empty());
    }

    #[test]
    fn inner_products() {
        let g = fixtures::lambda3();
        let s = spec(&g);
        let e = CylinderFn::indicator(g.parse_path("e").unwrap());
        let f1 = CylinderFn::indicator(g.parse_path("f1").unwrap());
        assert!((inner_product(&s, &g, &e, &f1) - 0.5).abs() < 1e-15);

        let l = fixtures::ledrappier();
        let s = spec(&l);
        for v in 0..4 {
            for w in 0..4 {
                let a = CylinderFn::indicator(l.vertex_path(v));
                let b = CylinderFn::indicator(l.vertex_path(w));
                let want = if v == w { 0.25 } else { 0.0 };
                assert!((inner_product(&s, &l, &a, &b) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bernoulli_spec() {
        let g = fixtures::bouquet2();
        let s = MeasureSpec::bernoulli(&g, vec![0.25, 0.75]).unwrap();
        let w = g.parse_path("1 0 1").unwrap();
        assert!((s.cylinder(&w) - 0.75 * 0.25 * 0.75).abs() < 1e-15);
        assert_eq!(
            MeasureSpec::bernoulli(&g, vec![0.5, 0.6]).unwrap_err().kind(),
            "bad-weights"
        );
        assert_eq!(MeasureSpec::bernoulli(&g, vec![1.0]).unwrap_err().kind(), "bad-weights");
        assert_eq!(
            MeasureSpec::bernoulli(&fixtures::ledrappier(), vec![0.5, 0.5])
                .unwrap_err()
                .kind(),
            "not-bouquet"
        );
    }

    #[test]
    fn embedding() {
        let full = KGraph::from_adjacency(&[vec![1, 1], vec![1, 1]]).unwrap();
        let v0 = full.vertex_path(0);
        assert_eq!(embed_to_interval(&full, &v0).unwrap(), (0.0, 0.5));
        // range 1, source 0: binary 0.10
        let e = full.edge_id("e1_0_0").unwrap();
        let p = full.normal_form(&[e]).unwrap();
        assert_eq!(embed_to_interval(&full, &p).unwrap(), (0.5, 0.75));

        let l = fixtures::ledrappier();
        let acc = l.parse_path("acc").unwrap();
        // itinerary 1,1,1,1 -> vertex indices 0,0,0,0
        assert_eq!(embed_to_interval(&l, &acc).unwrap(), (0.0, 1.0 / 256.0));
        let multi = KGraph::from_adjacency(&[vec![2]]).unwrap();
        assert_eq!(
            embed_to_interval(&multi, &multi.vertex_path(0)).unwrap_err().kind(),
            "not-zero-one"
        );
    }

    #[test]
    fn records_round_trip() {
        let g = fixtures::ledrappier();
        let f = CylinderFn::from_terms([
            (g.parse_path("acc").unwrap(), 4.0),
            (g.parse_path("ace").unwrap(), -4.0),
            (g.vertex_path(1), 0.5),
        ]);
        let recs = f.to_records(&g);
        let text = serde_json::to_string(&recs).unwrap();
        let back: Vec<CylinderRecord> = serde_json::from_str(&text).unwrap();
        assert_eq!(CylinderFn::from_records(&g, &back).unwrap(), f);
    }
}
