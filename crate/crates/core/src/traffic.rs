//! Vertex wavelets from preferred paths.
//!
//! Fix a root v and for each vertex w a path λ_w with range v and source w.
//! The weight ν̃(w) = ρ(Λ)^{-d(λ_w)} x_w is the measure of Z(λ_w); vertices
//! whose preferred paths share a degree J carry an orthonormal complement of
//! the constant vector, which becomes the wavelets g^{m,J}.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complement::{self, ComplementBasis};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::{KGraph, VertexId};
use crate::path::Path;
use crate::pf::PfData;

#[derive(Clone, Debug, PartialEq)]
pub struct PreferredPaths {
    pub root: VertexId,
    /// λ_w indexed by w.
    pub paths: Vec<Path>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferredPathsDocument {
    pub root: String,
    pub paths: Vec<PreferredPathRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferredPathRecord {
    pub vertex: String,
    /// Edge ids; empty for the vertex path at the root.
    pub path: Vec<String>,
}

impl PreferredPaths {
    pub fn new(graph: &KGraph, root: VertexId, paths: Vec<Path>) -> Result<PreferredPaths> {
        if paths.len() != graph.vertex_count() {
            return Err(Error::BadPreferredPaths(format!(
                "{} paths for {} vertices",
                paths.len(),
                graph.vertex_count()
            )));
        }
        for (w, p) in paths.iter().enumerate() {
            if p.range() != root || p.source() != w {
                return Err(Error::BadPreferredPaths(format!(
                    "path {} for vertex {} must run from {} to {}",
                    graph.label(p),
                    graph.vertex_name(w),
                    graph.vertex_name(w),
                    graph.vertex_name(root)
                )));
            }
        }
        Ok(PreferredPaths { root, paths })
    }

    pub fn from_document(graph: &KGraph, doc: &PreferredPathsDocument) -> Result<PreferredPaths> {
        let root = graph.vertex(&doc.root)?;
        let mut slots: Vec<Option<Path>> = vec![None; graph.vertex_count()];
        for rec in &doc.paths {
            let w = graph.vertex(&rec.vertex)?;
            if slots[w].is_some() {
                return Err(Error::BadPreferredPaths(format!("vertex {} listed twice", rec.vertex)));
            }
            slots[w] = Some(if rec.path.is_empty() {
                graph.vertex_path(w)
            } else {
                graph.path_from_names(&rec.path)?
            });
        }
        let paths = slots
            .into_iter()
            .enumerate()
            .map(|(w, p)| {
                p.ok_or_else(|| Error::BadPreferredPaths(format!("no path for vertex {}", graph.vertex_name(w))))
            })
            .collect::<Result<Vec<_>>>()?;
        PreferredPaths::new(graph, root, paths)
    }

    pub fn parse(graph: &KGraph, text: &str) -> Result<PreferredPaths> {
        let doc: PreferredPathsDocument = serde_json::from_str(text)?;
        PreferredPaths::from_document(graph, &doc)
    }

    pub fn to_document(&self, graph: &KGraph) -> PreferredPathsDocument {
        PreferredPathsDocument {
            root: graph.vertex_name(self.root).to_string(),
            paths: self
                .paths
                .iter()
                .enumerate()
                .map(|(w, p)| PreferredPathRecord {
                    vertex: graph.vertex_name(w).to_string(),
                    path: graph.word_of(p),
                })
                .collect(),
        }
    }

    /// For each vertex, the lexicographically least path from it to `root`
    /// among those of least degree in graded-lex order.
    pub fn default_for(graph: &KGraph, root: VertexId) -> Result<PreferredPaths> {
        let n = graph.vertex_count();
        let k = graph.k();
        let mut slots: Vec<Option<Path>> = vec![None; n];
        slots[root] = Some(graph.vertex_path(root));
        let mut remaining = n - 1;
        // Any vertex reachable at all is reachable with at most n - 1 edges.
        for total in 1..n as u32 {
            if remaining == 0 {
                break;
            }
            for d in degrees_of_total(k, total) {
                for p in graph.enumerate_paths(&d, Some(root), None) {
                    let w = p.source();
                    if slots[w].is_none() {
                        slots[w] = Some(p);
                        remaining -= 1;
                    }
                }
            }
        }
        let paths = slots
            .into_iter()
            .enumerate()
            .map(|(w, p)| {
                p.ok_or_else(|| {
                    Error::BadPreferredPaths(format!(
                        "vertex {} cannot reach {}",
                        graph.vertex_name(w),
                        graph.vertex_name(root)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PreferredPaths::new(graph, root, paths)
    }
}

/// Degrees with the given entry sum, in lexicographic order.
fn degrees_of_total(k: usize, total: u32) -> Vec<Degree> {
    Degree::constant(k, total)
        .below()
        .into_iter()
        .filter(|d| d.total() == total)
        .collect()
}

/// ν̃(w) = ρ(Λ)^{-d(λ_w)} x_w.
pub fn traffic_measure(pf: &PfData, prefs: &PreferredPaths) -> Vec<f64> {
    prefs
        .paths
        .iter()
        .enumerate()
        .map(|(w, p)| pf.x[w] / pf.rho_pow(p.degree()))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TrafficWavelet {
    pub degree: Degree,
    pub m: usize,
    /// Values indexed by vertex.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrafficFamily {
    pub weights: Vec<f64>,
    pub wavelets: Vec<TrafficWavelet>,
    /// The unit constant function, present when every preferred path has
    /// the same degree.
    pub constant: Option<Vec<f64>>,
    pub complete: bool,
}

pub fn traffic_wavelet_family(pf: &PfData, prefs: &PreferredPaths, method: ComplementBasis) -> Result<TrafficFamily> {
    let weights = traffic_measure(pf, prefs);
    let n = weights.len();
    let mut classes: BTreeMap<(u32, Vec<u32>), Vec<VertexId>> = BTreeMap::new();
    for (w, p) in prefs.paths.iter().enumerate() {
        classes.entry(p.degree().graded_key()).or_default().push(w);
    }
    if classes.values().all(|ws| ws.len() < 2) {
        return Err(Error::NoWaveletDegree);
    }
    let mut wavelets = Vec::new();
    for ((_, entries), ws) in &classes {
        if ws.len() < 2 {
            continue;
        }
        let local: Vec<f64> = ws.iter().map(|&w| weights[w]).collect();
        for (m, c) in complement::complement(&local, method).into_iter().enumerate() {
            let mut values = vec![0.0; n];
            for (&w, x) in ws.iter().zip(c) {
                values[w] = x;
            }
            wavelets.push(TrafficWavelet {
                degree: Degree::new(entries.clone()),
                m: m + 1,
                values,
            });
        }
    }
    let complete = classes.len() == 1;
    let constant = complete.then(|| {
        let j = prefs.paths[0].degree();
        vec![pf.rho_pow(j).sqrt(); n]
    });
    Ok(TrafficFamily {
        weights,
        wavelets,
        constant,
        complete,
    })
}
