//! Example graphs shipped with the crate.

use crate::kgraph::KGraph;

pub const LAMBDA3: &str = include_str!("../fixtures/lambda3.kg");
pub const LAMBDA1_SPHERE: &str = include_str!("../fixtures/lambda1-sphere.kg");
pub const LEDRAPPIER: &str = include_str!("../fixtures/ledrappier.kg");
pub const LEDRAPPIER_PREFS: &str = include_str!("../fixtures/ledrappier-prefs.json");
pub const BOUQUET_2: &str = include_str!("../fixtures/bouquet-2.kg");
pub const BOUQUET_3: &str = include_str!("../fixtures/bouquet-3.kg");

/// One vertex, a color-1 loop `e` and two color-2 loops `f1`, `f2` with
/// `f1 e = e f2` and `f2 e = e f1`.
pub fn lambda3() -> KGraph {
    KGraph::load(LAMBDA3).expect("lambda3 fixture")
}

/// Six-vertex 2-graph with four squares; has sources.
pub fn lambda1_sphere() -> KGraph {
    KGraph::load(LAMBDA1_SPHERE).expect("sphere fixture")
}

/// Four-vertex 2-graph with eight edges of each color.
pub fn ledrappier() -> KGraph {
    KGraph::load(LEDRAPPIER).expect("ledrappier fixture")
}

pub fn bouquet2() -> KGraph {
    KGraph::load(BOUQUET_2).expect("bouquet-2 fixture")
}

pub fn bouquet3() -> KGraph {
    KGraph::load(BOUQUET_3).expect("bouquet-3 fixture")
}

pub fn all() -> Vec<KGraph> {
    vec![lambda3(), lambda1_sphere(), ledrappier(), bouquet2(), bouquet3()]
}

/// The fixtures without sources, usable with the Perron-Frobenius measure.
pub fn strongly_connected() -> Vec<KGraph> {
    vec![lambda3(), ledrappier(), bouquet2(), bouquet3()]
}
