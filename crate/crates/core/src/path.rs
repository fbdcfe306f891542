//! Paths (morphisms) of a k-graph in normal form.

use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::kgraph::{EdgeId, KGraph, VertexId};

/// A morphism in normal form: edges sorted into ascending color blocks in
/// composition order. The empty word is the vertex path at `range`.
///
/// Ordering compares the edge-id word first, so sorted lists of paths are
/// lexicographic in edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    word: Vec<EdgeId>,
    range: VertexId,
    source: VertexId,
    degree: Degree,
}

impl Path {
    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn is_vertex(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// A path together with its graph, for display.
pub struct PathDisplay<'a>(&'a KGraph, &'a Path);

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label(self.1))
    }
}

impl KGraph {
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            word: Vec::new(),
            range: v,
            source: v,
            degree: Degree::zero(self.k()),
        }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let edge = self.edge(e);
        Path {
            word: vec![e],
            range: edge.range,
            source: edge.source,
            degree: Degree::unit(self.k(), edge.color),
        }
    }

    /// Rewrites a composable edge word to its normal form.
    pub fn normal_form(&self, word: &[EdgeId]) -> Result<Path> {
        let Some(&first) = word.first() else {
            return Err(Error::InvalidArgument(
                "empty word has no range; use a vertex path".into(),
            ));
        };
        for pair in word.windows(2) {
            if self.edge(pair[0]).source != self.edge(pair[1]).range {
                return Err(Error::Composition(
                    self.edge(pair[0]).name.clone(),
                    self.edge(pair[1]).name.clone(),
                ));
            }
        }
        let mut w = word.to_vec();
        let colors: Vec<usize> = w.iter().map(|&e| self.edge(e).color).collect();
        let mut ranks = colors.clone();
        self.reorder(&mut w, &mut ranks);
        let mut degree = vec![0u32; self.k()];
        for c in colors {
            degree[c] += 1;
        }
        Ok(Path {
            range: self.edge(first).range,
            source: self.edge(*w.last().unwrap()).source,
            word: w,
            degree: Degree::new(degree),
        })
    }

    /// Normal form of a word given by edge names.
    pub fn path_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Path> {
        let word = names
            .iter()
            .map(|n| self.edge_id(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.normal_form(&word)
    }

    /// Parses a path written as edge ids separated by commas or spaces, or
    /// run together when that splits unambiguously into single-character ids.
    /// A bare vertex name gives the vertex path.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Ok(v) = self.vertex(text) {
            return Ok(self.vertex_path(v));
        }
        let tokens: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() == 1 && self.edge_id(tokens[0]).is_err() {
            let chars: Vec<String> = tokens[0].chars().map(String::from).collect();
            if chars.iter().all(|c| self.edge_id(c).is_ok()) {
                return self.path_from_names(&chars);
            }
        }
        self.path_from_names(&tokens)
    }

    /// Edge-id labels run together, e.g. `acc`; vertex paths print the vertex.
    pub fn label(&self, p: &Path) -> String {
        if p.is_vertex() {
            return self.vertex_name(p.range).to_string();
        }
        p.word.iter().map(|&e| self.edge(e).name.as_str()).collect()
    }

    pub fn display<'a>(&'a self, p: &'a Path) -> PathDisplay<'a> {
        PathDisplay(self, p)
    }

    pub fn word_of(&self, p: &Path) -> Vec<String> {
        self.word_names(&p.word)
    }

    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path> {
        if p.source != q.range {
            return Err(Error::Composition(self.label(p), self.label(q)));
        }
        if p.is_vertex() {
            return Ok(q.clone());
        }
        if q.is_vertex() {
            return Ok(p.clone());
        }
        let mut word = p.word.clone();
        word.extend_from_slice(&q.word);
        self.normal_form(&word)
    }

    /// Splits `lambda` into consecutive factors of the given degrees, which
    /// must sum to d(lambda).
    pub fn factor(&self, lambda: &Path, degrees: &[Degree]) -> Result<Vec<Path>> {
        let k = self.k();
        let mut total = Degree::zero(k);
        for d in degrees {
            if d.k() != k {
                return Err(Error::DegreeLength {
                    expected: k,
                    got: d.k(),
                });
            }
            total = &total + d;
        }
        if total != lambda.degree {
            return Err(Error::DegreeRange {
                lower: total,
                upper: lambda.degree.clone(),
            });
        }
        // Target color sequence: each factor in ascending color blocks.
        let target: Vec<usize> = degrees
            .iter()
            .flat_map(|d| (0..k).flat_map(move |c| std::iter::repeat_n(c, d[c] as usize)))
            .collect();
        // Rank the j-th occurrence of color c by its position in the target.
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (pos, &c) in target.iter().enumerate() {
            slots[c].push(pos);
        }
        let mut seen = vec![0usize; k];
        let mut ranks: Vec<usize> = lambda
            .word
            .iter()
            .map(|&e| {
                let c = self.edge(e).color;
                seen[c] += 1;
                slots[c][seen[c] - 1]
            })
            .collect();
        let mut word = lambda.word.clone();
        self.reorder(&mut word, &mut ranks);

        let mut out = Vec::with_capacity(degrees.len());
        let mut start = 0;
        let mut at = lambda.range;
        for d in degrees {
            let len = d.total() as usize;
            let piece = if len == 0 {
                self.vertex_path(at)
            } else {
                Path {
                    word: word[start..start + len].to_vec(),
                    range: at,
                    source: self.edge(word[start + len - 1]).source,
                    degree: d.clone(),
                }
            };
            at = piece.source;
            start += len;
            out.push(piece);
        }
        Ok(out)
    }

    /// λ(p, q): the factor of degree q − p sitting after the degree-p prefix.
    pub fn segment(&self, lambda: &Path, p: &Degree, q: &Degree) -> Result<Path> {
        if !p.le(q) || !q.le(&lambda.degree) {
            return Err(Error::DegreeRange {
                lower: p.clone(),
                upper: q.clone(),
            });
        }
        let mid = q.checked_sub(p)?;
        let rest = lambda.degree.checked_sub(q)?;
        Ok(self.factor(lambda, &[p.clone(), mid, rest])?.swap_remove(1))
    }

    /// Bubble-sorts `word` by `ranks`, rewriting each transposition of
    /// adjacent edges through its factorization square. Ranks of equal-color
    /// edges must be increasing so only distinct colors ever swap.
    fn reorder(&self, word: &mut [EdgeId], ranks: &mut [usize]) {
        let n = word.len();
        for end in (1..n).rev() {
            let mut swapped = false;
            for i in 0..end {
                if ranks[i] > ranks[i + 1] {
                    let (a, b) = self.swap_pair(word[i], word[i + 1]);
                    word[i] = a;
                    word[i + 1] = b;
                    ranks.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }

    /// All normal-form paths of `degree` with the given endpoint filters,
    /// sorted by edge-id word.
    pub fn enumerate_paths(&self, degree: &Degree, range: Option<VertexId>, source: Option<VertexId>) -> Vec<Path> {
        assert_eq!(degree.k(), self.k(), "degree length must equal k");
        let mut colors = Vec::new();
        for c in 0..self.k() {
            colors.extend(std::iter::repeat_n(c, degree[c] as usize));
        }
        let mut out = Vec::new();
        let ranges: Vec<VertexId> = match range {
            Some(v) => vec![v],
            None => (0..self.vertex_count()).collect(),
        };
        for v in ranges {
            let mut word = Vec::new();
            self.extend_rec(v, &colors, &mut word, &mut |w, s| {
                if source.is_none_or(|want| want == s) {
                    out.push(Path {
                        word: w.to_vec(),
                        range: v,
                        source: s,
                        degree: degree.clone(),
                    });
                }
            });
        }
        out.sort();
        out
    }

    fn extend_rec(
        &self,
        at: VertexId,
        colors: &[usize],
        word: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(&[EdgeId], VertexId),
    ) {
        match colors.split_first() {
            None => emit(word, at),
            Some((&c, rest)) => {
                // Paths grow toward the source: the next edge has range `at`.
                let candidates: Vec<EdgeId> = self
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.range == at && e.color == c)
                    .map(|(i, _)| i)
                    .collect();
                for e in candidates {
                    word.push(e);
                    self.extend_rec(self.edge(e).source, rest, word, emit);
                    word.pop();
                }
            }
        }
    }

    /// Every path of degree d(λ) + n whose initial degree-d(λ) segment is λ.
    pub fn extensions(&self, lambda: &Path, n: &Degree) -> Vec<Path> {
        let mut out: Vec<Path> = self
            .enumerate_paths(n, Some(lambda.source), None)
            .iter()
            .map(|mu| self.compose(lambda, mu).expect("extension composes"))
            .collect();
        out.sort();
        out
    }

    /// |vΛ^n w| computed by enumeration.
    pub fn count_paths(&self, degree: &Degree, range: VertexId, source: VertexId) -> usize {
        self.enumerate_paths(degree, Some(range), Some(source)).len()
    }

    /// All composable edge words of the given length, in no particular form.
    pub fn raw_words(&self, len: usize) -> Vec<Vec<EdgeId>> {
        let mut words: Vec<Vec<EdgeId>> = (0..self.edges().len()).map(|e| vec![e]).collect();
        if len == 0 {
            return Vec::new();
        }
        for _ in 1..len {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let s = self.edge(*w.last().unwrap()).source;
                    self.edges()
                        .iter()
                        .enumerate()
                        .filter(move |(_, e)| e.range == s)
                        .map(move |(i, _)| {
                            let mut next = w.clone();
                            next.push(i);
                            next
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        words
    }

    pub(crate) fn incoming_count(&self, v: VertexId, color: usize) -> usize {
        self.incoming(v, color).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &KGraph, p: &Path) -> Vec<String> {
        g.word_of(p)
    }

    #[test]
    fn lambda3_normal_form() {
        let g = fixtures::lambda3();
        let p = g.path_from_names(&["f1", "e"]).unwrap();
        assert_eq!(names(&g, &p), ["e", "f2"]);
        assert_eq!(p.degree(), &Degree::new(vec![1, 1]));
        let e = g.path_from_names(&["e"]).unwrap();
        assert_eq!(names(&g, &e), ["e"]);
    }

    #[test]
    fn sphere_normal_form() {
        let g = fixtures::lambda1_sphere();
        let p = g.path_from_names(&["d", "f"]).unwrap();
        assert_eq!(names(&g, &p), ["h", "b"]);
    }

    #[test]
    fn composition_errors() {
        let g = fixtures::lambda1_sphere();
        let err = g.path_from_names(&["f", "d"]).unwrap_err();
        assert_eq!(err.kind(), "composition");
    }

    #[test]
    fn compose_examples() {
        let g = fixtures::lambda3();
        let e = g.parse_path("e").unwrap();
        let f1 = g.parse_path("f1").unwrap();
        let ef1 = g.compose(&e, &f1).unwrap();
        assert_eq!(g.label(&ef1), "ef1");
        assert_eq!(ef1.degree(), &Degree::new(vec![1, 1]));
        assert_eq!(g.label(&g.compose(&f1, &e).unwrap()), "ef2");
        let v = g.vertex_path(0);
        assert_eq!(g.compose(&v, &ef1).unwrap(), ef1);
    }

    #[test]
    fn segment_examples() {
        let g = fixtures::lambda3();
        let ef2 = g.parse_path("e f2").unwrap();
        let z = Degree::zero(2);
        let s = g.segment(&ef2, &z, &Degree::new(vec![0, 1])).unwrap();
        assert_eq!(g.label(&s), "f1");
        assert_eq!(g.segment(&ef2, &z, ef2.degree()).unwrap(), ef2);
        assert!(g
            .segment(&ef2, &Degree::new(vec![1, 0]), &Degree::new(vec![0, 1]))
            .is_err());

        let l = fixtures::ledrappier();
        let acc = l.parse_path("acc").unwrap();
        let a = l.segment(&acc, &Degree::zero(2), &Degree::new(vec![1, 0])).unwrap();
        assert_eq!(l.label(&a), "a");
    }

    #[test]
    fn ledrappier_census() {
        let g = fixtures::ledrappier();
        let v1 = g.vertex("1").unwrap();
        let paths = g.enumerate_paths(&Degree::new(vec![1, 2]), Some(v1), None);
        let labels: Vec<String> = paths.iter().map(|p| g.label(p)).collect();
        assert_eq!(labels, ["acc", "ace", "aeh", "aej", "dhm", "dho", "djb", "dji"]);
    }

    #[test]
    fn vertex_enumeration() {
        let g = fixtures::ledrappier();
        for v in 0..4 {
            let p = g.enumerate_paths(&Degree::zero(2), Some(v), Some(v));
            assert_eq!(p, vec![g.vertex_path(v)]);
        }
    }

    #[test]
    fn counts_match_vertex_matrices() {
        for g in fixtures::all() {
            let mats = g.vertex_matrices();
            for c in 0..g.k() {
                let d = Degree::unit(g.k(), c);
                for v in 0..g.vertex_count() {
                    for w in 0..g.vertex_count() {
                        assert_eq!(g.count_paths(&d, v, w) as u64, mats[c][(v, w)]);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_path_forms() {
        let g = fixtures::ledrappier();
        assert_eq!(g.label(&g.parse_path("a,c,c").unwrap()), "acc");
        assert_eq!(g.label(&g.parse_path("a c c").unwrap()), "acc");
        assert!(g.parse_path("1").unwrap().is_vertex());
        assert!(g.parse_path("zz").is_err());
    }
}
