//! Finite k-graphs given by a colored skeleton plus factorization squares.
//!
//! A k-graph is presented by its edges (morphisms of degree e_i) and, for
//! every pair of colors i < j, a bijection between composable (color i,
//! color j) edge pairs and composable (color j, color i) edge pairs with the
//! same endpoints. Every morphism is then an edge word modulo the square
//! relations; [`crate::path`] rewrites words to a canonical normal form.

use std::collections::{BTreeSet, HashMap, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Zero-based color; documents number colors from 1.
    pub color: usize,
    pub source: VertexId,
    pub range: VertexId,
}

/// A commuting square `low = high` where `low` is the (color i, color j)
/// word and `high` the (color j, color i) word, i < j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationSquare {
    pub colors: (usize, usize),
    pub low: (EdgeId, EdgeId),
    pub high: (EdgeId, EdgeId),
}

#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertices: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    squares: Vec<FactorizationSquare>,
    /// Maps each composable bicolored pair to the other side of its square.
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// `incoming[v][c]`: edges of color c with range v, sorted.
    incoming: Vec<Vec<Vec<EdgeId>>>,
}

/// On-disk form of a k-graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub squares: Vec<SquareRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub color: usize,
    pub source: String,
    pub range: String,
}

/// `left = right` as edge words in composition order (leftmost edge has the
/// range of the composite). Either side may carry the lower color first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareRecord {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<GraphDocument> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

impl KGraph {
    /// Parses and validates a k-graph document.
    pub fn load(text: &str) -> Result<KGraph> {
        KGraph::from_document(&GraphDocument::parse(text)?)
    }

    pub fn from_document(doc: &GraphDocument) -> Result<KGraph> {
        if doc.k == 0 {
            return Err(ValidationError::ZeroRank.into());
        }
        if doc.vertices.is_empty() {
            return Err(ValidationError::NoVertices.into());
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in doc.vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(ValidationError::DuplicateVertex(v.clone()).into());
            }
        }

        let mut records: Vec<&EdgeRecord> = doc.edges.iter().collect();
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut edges = Vec::with_capacity(records.len());
        let mut edge_index = HashMap::new();
        for rec in records {
            if edge_index.insert(rec.id.clone(), edges.len()).is_some() {
                return Err(ValidationError::DuplicateEdge(rec.id.clone()).into());
            }
            if rec.color == 0 || rec.color > doc.k {
                return Err(ValidationError::ColorOutOfRange {
                    edge: rec.id.clone(),
                    color: rec.color,
                    k: doc.k,
                }
                .into());
            }
            let lookup = |name: &String| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| ValidationError::DanglingVertex {
                        edge: rec.id.clone(),
                        vertex: name.clone(),
                    })
            };
            edges.push(Edge {
                name: rec.id.clone(),
                color: rec.color - 1,
                source: lookup(&rec.source)?,
                range: lookup(&rec.range)?,
            });
        }

        let mut incoming = vec![vec![Vec::new(); doc.k]; doc.vertices.len()];
        for (id, e) in edges.iter().enumerate() {
            incoming[e.range][e.color].push(id);
        }

        let mut graph = KGraph {
            k: doc.k,
            vertices: doc.vertices.clone(),
            vertex_index,
            edges,
            edge_index,
            squares: Vec::new(),
            swap: HashMap::new(),
            incoming,
        };
        for sq in &doc.squares {
            graph.add_square(sq)?;
        }
        graph.check_squares_complete()?;
        if graph.k >= 3 {
            graph.check_cube_condition()?;
        }
        graph.check_commuting()?;
        Ok(graph)
    }

    fn add_square(&mut self, rec: &SquareRecord) -> Result<()> {
        let malformed = |reason: &str| ValidationError::MalformedSquare {
            left: rec.left.clone(),
            right: rec.right.clone(),
            reason: reason.to_string(),
        };
        if rec.left.len() != 2 || rec.right.len() != 2 {
            return Err(malformed("each side must have exactly two edges").into());
        }
        let id = |name: &String| {
            self.edge_index
                .get(name)
                .copied()
                .ok_or_else(|| ValidationError::DanglingEdge(name.clone()))
        };
        let (a, b) = (id(&rec.left[0])?, id(&rec.left[1])?);
        let (c, d) = (id(&rec.right[0])?, id(&rec.right[1])?);
        let color = |e: EdgeId| self.edges[e].color;
        if color(a) == color(b) {
            return Err(malformed("a side uses one color twice").into());
        }
        if color(a) != color(d) || color(b) != color(c) {
            return Err(malformed("the two sides must use the colors in opposite orders").into());
        }
        for (x, y) in [(a, b), (c, d)] {
            if self.edges[x].source != self.edges[y].range {
                return Err(malformed("a side is not composable").into());
            }
        }
        if self.edges[a].range != self.edges[c].range || self.edges[b].source != self.edges[d].source {
            return Err(malformed("the two sides have different endpoints").into());
        }
        let (low, high) = if color(a) < color(b) {
            ((a, b), (c, d))
        } else {
            ((c, d), (a, b))
        };
        for side in [low, high] {
            if self.swap.contains_key(&side) {
                return Err(ValidationError::NonBijectiveSquares(self.word_names(&[side.0, side.1])).into());
            }
        }
        self.swap.insert(low, high);
        self.swap.insert(high, low);
        self.squares.push(FactorizationSquare {
            colors: (color(low.0), color(low.1)),
            low,
            high,
        });
        Ok(())
    }

    fn check_squares_complete(&self) -> Result<()> {
        for (x, ex) in self.edges.iter().enumerate() {
            for &y in self.incoming[ex.source].iter().flatten() {
                if self.edges[y].color != ex.color && !self.swap.contains_key(&(x, y)) {
                    return Err(ValidationError::MissingSquare(self.word_names(&[x, y])).into());
                }
            }
        }
        Ok(())
    }

    fn check_cube_condition(&self) -> Result<()> {
        for (x, ex) in self.edges.iter().enumerate() {
            for &y in self.incoming[ex.source].iter().flatten() {
                let ey = &self.edges[y];
                if ey.color == ex.color {
                    continue;
                }
                for &z in self.incoming[ey.source].iter().flatten() {
                    let cz = self.edges[z].color;
                    if cz == ex.color || cz == ey.color {
                        continue;
                    }
                    let forms = self.normal_forms_all_orders(&[x, y, z]);
                    if forms.len() != 1 {
                        return Err(ValidationError::CubeConditionFailure {
                            word: self.word_names(&[x, y, z]),
                            forms: forms.iter().map(|w| self.word_names(w)).collect(),
                        }
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    fn check_commuting(&self) -> Result<()> {
        let mats = self.vertex_matrices();
        for i in 0..self.k {
            for j in i + 1..self.k {
                if &mats[i] * &mats[j] != &mats[j] * &mats[i] {
                    return Err(ValidationError::NonCommutingMatrices(i + 1, j + 1).into());
                }
            }
        }
        Ok(())
    }

    /// Every terminal word reachable by rewriting color-descending adjacent
    /// pairs in any order. A single element means the rewriting is confluent
    /// on this word.
    pub fn normal_forms_all_orders(&self, word: &[EdgeId]) -> BTreeSet<Vec<EdgeId>> {
        let mut seen = BTreeSet::new();
        let mut terminal = BTreeSet::new();
        let mut queue = VecDeque::from([word.to_vec()]);
        seen.insert(word.to_vec());
        while let Some(w) = queue.pop_front() {
            let mut is_terminal = true;
            for i in 0..w.len().saturating_sub(1) {
                if self.edges[w[i]].color > self.edges[w[i + 1]].color {
                    is_terminal = false;
                    let (p, q) = self.swap[&(w[i], w[i + 1])];
                    let mut next = w.clone();
                    next[i] = p;
                    next[i + 1] = q;
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            if is_terminal {
                terminal.insert(w);
            }
        }
        terminal
    }

    /// A one-vertex 1-graph with `n` loops named `0`, `1`, ..., `n-1`.
    pub fn bouquet(n: usize) -> KGraph {
        let width = n.saturating_sub(1).to_string().len();
        let doc = GraphDocument {
            k: 1,
            vertices: vec!["v".into()],
            edges: (0..n)
                .map(|i| EdgeRecord {
                    id: format!("{i:0width$}"),
                    color: 1,
                    source: "v".into(),
                    range: "v".into(),
                })
                .collect(),
            squares: Vec::new(),
        };
        KGraph::from_document(&doc).expect("bouquet is a valid 1-graph")
    }

    /// The 1-graph with `adjacency[v][w]` edges from vertex w to vertex v.
    /// Vertices are named `0..n`, edges `e{v}_{w}_{t}`.
    pub fn from_adjacency(adjacency: &[Vec<u32>]) -> Result<KGraph> {
        let n = adjacency.len();
        let mut edges = Vec::new();
        for (v, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (w, &count) in row.iter().enumerate() {
                for t in 0..count {
                    edges.push(EdgeRecord {
                        id: format!("e{v}_{w}_{t}"),
                        color: 1,
                        source: w.to_string(),
                        range: v.to_string(),
                    });
                }
            }
        }
        KGraph::from_document(&GraphDocument {
            k: 1,
            vertices: (0..n).map(|v| v.to_string()).collect(),
            edges,
            squares: Vec::new(),
        })
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            k: self.k,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.name.clone(),
                    color: e.color + 1,
                    source: self.vertices[e.source].clone(),
                    range: self.vertices[e.range].clone(),
                })
                .collect(),
            squares: self
                .squares
                .iter()
                .map(|s| SquareRecord {
                    left: self.word_names(&[s.low.0, s.low.1]),
                    right: self.word_names(&[s.high.0, s.high.1]),
                })
                .collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges sorted by id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// Edges of one (zero-based) color in id order.
    pub fn edges_of_color(&self, color: usize) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].color == color)
            .collect()
    }

    pub fn squares(&self) -> &[FactorizationSquare] {
        &self.squares
    }

    pub(crate) fn incoming(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.incoming[v][color]
    }

    pub(crate) fn swap_pair(&self, x: EdgeId, y: EdgeId) -> (EdgeId, EdgeId) {
        self.swap[&(x, y)]
    }

    pub fn word_names(&self, word: &[EdgeId]) -> Vec<String> {
        word.iter().map(|&e| self.edges[e].name.clone()).collect()
    }

    /// A_i(v, w) = number of color-i edges with range v and source w.
    pub fn vertex_matrices(&self) -> Vec<DMatrix<u64>> {
        let n = self.vertices.len();
        let mut mats = vec![DMatrix::<u64>::zeros(n, n); self.k];
        for e in &self.edges {
            mats[e.color][(e.range, e.source)] += 1;
        }
        mats
    }

    /// True when some vertex matrix has an entry above 1.
    pub fn has_multi_edges(&self) -> bool {
        self.vertex_matrices().iter().any(|m| m.iter().any(|&x| x > 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lambda3_loads() {
        let g = fixtures::lambda3();
        assert_eq!(g.k(), 2);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges_of_color(0).len(), 1);
        assert_eq!(g.edges_of_color(1).len(), 2);
        assert_eq!(g.squares().len(), 2);
    }

    #[test]
    fn sphere_loads() {
        let g = fixtures::lambda1_sphere();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges_of_color(0).len(), 4);
        assert_eq!(g.edges_of_color(1).len(), 4);
    }

    #[test]
    fn missing_square_rejected() {
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.squares
            .retain(|s| s.left != vec!["f1".to_string(), "e".to_string()]);
        let err = KGraph::from_document(&doc).unwrap_err();
        assert!(
            matches!(err, Error::Validation(ValidationError::MissingSquare(_))),
            "{err}"
        );
    }

    #[test]
    fn duplicate_square_rejected() {
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.squares[1] = SquareRecord {
            left: vec!["f2".into(), "e".into()],
            right: vec!["e".into(), "f2".into()],
        };
        let err = KGraph::from_document(&doc).unwrap_err();
        assert!(
            matches!(err, Error::Validation(ValidationError::NonBijectiveSquares(_))),
            "{err}"
        );
    }

    #[test]
    fn dangling_and_color_errors() {
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.edges[0].source = "nowhere".into();
        assert_eq!(KGraph::from_document(&doc).unwrap_err().kind(), "dangling-vertex");
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.edges[0].color = 3;
        assert_eq!(KGraph::from_document(&doc).unwrap_err().kind(), "color-out-of-range");
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.squares[0].left[0] = "zz".into();
        assert_eq!(KGraph::from_document(&doc).unwrap_err().kind(), "dangling-edge");
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"k":1,"vertices":["v"],"edges":[],"squares":[],"extra":1}"#;
        assert!(matches!(KGraph::load(text), Err(Error::Parse(_))));
        let text = r#"{"k":1,"vertices":["v"],"edges":[{"id":"a","color":1,"source":"v","range":"v","w":2}]}"#;
        assert!(matches!(KGraph::load(text), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_square_rejected() {
        let mut doc = GraphDocument::parse(fixtures::LAMBDA3).unwrap();
        doc.squares[0].right = vec!["f1".into(), "e".into()];
        assert_eq!(KGraph::from_document(&doc).unwrap_err().kind(), "malformed-square");
    }

    #[test]
    fn document_round_trip() {
        for g in [fixtures::lambda3(), fixtures::ledrappier(), fixtures::lambda1_sphere()] {
            let doc = g.to_document();
            let again = KGraph::load(&doc.to_json()).unwrap();
            assert_eq!(again.to_document(), doc);
        }
    }

    fn cube_doc(twisted: bool) -> GraphDocument {
        // One vertex, one loop of each of three colors; squares swap the loops.
        // The twisted variant uses two loops of color 3 permuted by color 1
        // only from one side, which breaks associativity of the rewriting.
        let edge = |id: &str, color| EdgeRecord {
            id: id.into(),
            color,
            source: "v".into(),
            range: "v".into(),
        };
        let sq = |l: [&str; 2], r: [&str; 2]| SquareRecord {
            left: l.iter().map(|s| s.to_string()).collect(),
            right: r.iter().map(|s| s.to_string()).collect(),
        };
        let mut squares = vec![
            sq(["a", "b"], ["b", "a"]),
            sq(["b", "c1"], ["c1", "b"]),
            sq(["b", "c2"], ["c2", "b"]),
        ];
        if twisted {
            squares.push(sq(["a", "c1"], ["c2", "a"]));
            squares.push(sq(["a", "c2"], ["c1", "a"]));
            // color 2 swaps the color-3 loops only when passing color 1
            squares[1] = sq(["b", "c1"], ["c2", "b"]);
            squares[2] = sq(["b", "c2"], ["c1", "b"]);
        } else {
            squares.push(sq(["a", "c1"], ["c2", "a"]));
            squares.push(sq(["a", "c2"], ["c1", "a"]));
        }
        GraphDocument {
            k: 3,
            vertices: vec!["v".into()],
            edges: vec![edge("a", 1), edge("b", 2), edge("c1", 3), edge("c2", 3)],
            squares,
        }
    }

    #[test]
    fn three_graph_cube_condition() {
        assert!(KGraph::from_document(&cube_doc(false)).is_ok());
    }

    #[test]
    fn commuting_check_runs_for_twisted_variant() {
        // Both variants commute at the matrix level; the cube check decides.
        let res = KGraph::from_document(&cube_doc(true));
        match res {
            Ok(g) => {
                for e in 0..g.edges().len() {
                    let _ = g.normal_forms_all_orders(&[e]);
                }
            }
            Err(e) => assert_eq!(e.kind(), "cube-condition-failure"),
        }
    }

    #[test]
    fn cube_failure_detected() {
        // a swaps c1<->c2, b fixes them, but a and b are related by a square
        // that forces b to also act: word c1 b a rewrites two ways.
        let edge = |id: &str, color| EdgeRecord {
            id: id.into(),
            color,
            source: "v".into(),
            range: "v".into(),
        };
        let sq = |l: [&str; 2], r: [&str; 2]| SquareRecord {
            left: l.iter().map(|s| s.to_string()).collect(),
            right: r.iter().map(|s| s.to_string()).collect(),
        };
        let doc = GraphDocument {
            k: 3,
            vertices: vec!["v".into()],
            edges: vec![edge("a1", 1), edge("a2", 1), edge("b", 2), edge("c1", 3), edge("c2", 3)],
            squares: vec![
                // color 1/2: b a1 = a2 b, b a2 = a1 b
                sq(["a2", "b"], ["b", "a1"]),
                sq(["a1", "b"], ["b", "a2"]),
                // color 1/3: trivial
                sq(["a1", "c1"], ["c1", "a1"]),
                sq(["a1", "c2"], ["c2", "a1"]),
                sq(["a2", "c1"], ["c1", "a2"]),
                sq(["a2", "c2"], ["c2", "a2"]),
                // color 2/3: trivial
                sq(["b", "c1"], ["c1", "b"]),
                sq(["b", "c2"], ["c2", "b"]),
            ],
        };
        // This presentation is consistent; perturb one 1/3 square so it is not.
        let good = KGraph::from_document(&doc);
        assert!(good.is_ok(), "{:?}", good.err());
        let mut bad = doc.clone();
        bad.squares[2] = sq(["a1", "c1"], ["c2", "a1"]);
        bad.squares[3] = sq(["a1", "c2"], ["c1", "a1"]);
        let err = KGraph::from_document(&bad).unwrap_err();
        assert_eq!(err.kind(), "cube-condition-failure", "{err}");
    }

    #[test]
    fn vertex_matrices_lambda3() {
        let m = fixtures::lambda3().vertex_matrices();
        assert_eq!(m[0][(0, 0)], 1);
        assert_eq!(m[1][(0, 0)], 2);
    }

    #[test]
    fn zero_matrix_for_missing_color() {
        let doc = GraphDocument {
            k: 2,
            vertices: vec!["v".into()],
            edges: vec![EdgeRecord {
                id: "a".into(),
                color: 1,
                source: "v".into(),
                range: "v".into(),
            }],
            squares: vec![],
        };
        let g = KGraph::from_document(&doc).unwrap();
        assert_eq!(g.vertex_matrices()[1][(0, 0)], 0);
    }
}
