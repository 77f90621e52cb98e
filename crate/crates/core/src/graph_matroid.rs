//! The reduced weight graph `G(w)` and its graphic matroid.
//!
//! Vertices are the labels `2..=n` of the canonical profile; labels `2..=m`
//! are heavy. Flats are named by vertex subsets: a 1-connected flat is the
//! maximal subgraph on a vertex set `S` with total weight above 1.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::subset::VertexSet;
use crate::weights::{HeavyLightProfile, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("edge {0} is not an edge of the reduced weight graph")]
    EdgeNotInGraph(Edge),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// An unordered edge `{lo, hi}` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "loops are not edges of G(w)");
        Edge(a.min(b), a.max(b))
    }

    pub fn vertices(self) -> VertexSet {
        [self.0, self.1].into_iter().collect()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

pub type EdgeSet = BTreeSet<Edge>;

/// `G(w)`: vertices `2..=n`, an edge `{i,j}` exactly when `w_i + w_j > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWeightGraph {
    m: usize,
    n: usize,
    edges: Vec<Edge>,
}

impl ReducedWeightGraph {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(2, self.n)
    }

    pub fn heavy_vertices(&self) -> VertexSet {
        if self.m >= 2 {
            VertexSet::range(2, self.m)
        } else {
            VertexSet::EMPTY
        }
    }

    pub fn is_heavy(&self, v: usize) -> bool {
        (2..=self.m).contains(&v)
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    fn check(&self, e: &EdgeSet) -> Result<(), MatroidError> {
        match e.iter().find(|x| !self.has_edge(**x)) {
            Some(bad) => Err(MatroidError::EdgeNotInGraph(*bad)),
            None => Ok(()),
        }
    }

    /// Total weight of `s` exceeds 1 in the canonical weights.
    pub fn is_heavy_subset(&self, s: VertexSet) -> bool {
        s.len() >= 2 && !s.intersection(self.heavy_vertices()).is_empty()
    }
}

pub fn reduced_weight_graph(p: &HeavyLightProfile) -> Result<ReducedWeightGraph, MatroidError> {
    let (m, n) = (p.m(), p.n());
    if m < 2 {
        return Err(WeightError::TooFewHeavy(m).into());
    }
    let mut edges = Vec::new();
    for i in 2..=n {
        for j in i + 1..=n {
            // at least one endpoint heavy
            if i <= m {
                edges.push(Edge(i, j));
            }
        }
    }
    Ok(ReducedWeightGraph { m, n, edges })
}

/// Union-find over vertex labels.
struct Forest {
    parent: Vec<usize>,
}

impl Forest {
    fn new(size: usize) -> Self {
        Forest { parent: (0..size).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn spanning_forest(g: &ReducedWeightGraph, e: &EdgeSet) -> (Forest, usize) {
    let mut forest = Forest::new(g.n + 1);
    let rank = e.iter().filter(|x| forest.union(x.0, x.1)).count();
    (forest, rank)
}

/// Size of a spanning forest of the subgraph with edge set `e`.
pub fn matroid_rank(g: &ReducedWeightGraph, e: &EdgeSet) -> Result<usize, MatroidError> {
    g.check(e)?;
    Ok(spanning_forest(g, e).1)
}

/// Matroid closure: every edge whose endpoints are already joined by `e`.
pub fn closure(g: &ReducedWeightGraph, e: &EdgeSet) -> Result<EdgeSet, MatroidError> {
    g.check(e)?;
    let (mut forest, _) = spanning_forest(g, e);
    Ok(g.edges.iter().copied().filter(|x| forest.find(x.0) == forest.find(x.1)).collect())
}

/// Label `S` of the 1-connected flat `F_S`.
///
/// Always a proper subset of `{2..n}` containing a heavy vertex and at least
/// two vertices, so that its canonical weight exceeds 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FlatLabel(VertexSet);

impl FlatLabel {
    /// Validates `s` against the reduced weight graph.
    pub fn new(g: &ReducedWeightGraph, s: VertexSet) -> Option<Self> {
        (s.is_subset(g.vertices()) && s != g.vertices() && g.is_heavy_subset(s)).then_some(FlatLabel(s))
    }

    pub fn set(self) -> VertexSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    /// Rank of `F_S` in the graphic matroid.
    pub fn rank(self) -> usize {
        self.0.len() - 1
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub(crate) fn unchecked(s: VertexSet) -> Self {
        FlatLabel(s)
    }
}

impl fmt::Display for FlatLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for FlatLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// All 1-connected flats, in (cardinality, lex) order.
pub fn one_connected_flats(g: &ReducedWeightGraph) -> Vec<FlatLabel> {
    let mut out: Vec<FlatLabel> =
        g.vertices().subsets().filter_map(|s| FlatLabel::new(g, s)).collect();
    out.sort();
    out
}

/// Edges of `F_S`: every edge of `G(w)` with both endpoints in `S`.
pub fn flat_edges(g: &ReducedWeightGraph, label: FlatLabel) -> EdgeSet {
    induced_edges(g, label.set())
}

pub(crate) fn induced_edges(g: &ReducedWeightGraph, s: VertexSet) -> EdgeSet {
    g.edges.iter().copied().filter(|e| s.contains(e.0) && s.contains(e.1)).collect()
}

/// A flat of `M(w)`, described by the vertex sets of its connected
/// components that carry at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    components: Vec<VertexSet>,
}

impl Flat {
    pub fn empty() -> Self {
        Flat { components: Vec::new() }
    }

    fn from_components(mut components: Vec<VertexSet>) -> Self {
        components.retain(|c| c.len() >= 2);
        components.sort();
        Flat { components }
    }

    pub fn components(&self) -> &[VertexSet] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.len() - 1).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn edges(&self, g: &ReducedWeightGraph) -> EdgeSet {
        self.components.iter().flat_map(|c| induced_edges(g, *c)).collect()
    }

    /// Vertex partition of `{2..n}` into blocks, singletons included.
    pub fn blocks(&self, g: &ReducedWeightGraph) -> Vec<VertexSet> {
        let covered = self.components.iter().fold(VertexSet::EMPTY, |a, c| a.union(*c));
        let mut blocks = self.components.clone();
        blocks.extend(g.vertices().difference(covered).iter().map(VertexSet::singleton));
        blocks
    }

    pub fn from_edges(g: &ReducedWeightGraph, e: &EdgeSet) -> Self {
        let mut forest = Forest::new(g.n + 1);
        for x in e {
            forest.union(x.0, x.1);
        }
        let mut comps: std::collections::BTreeMap<usize, VertexSet> = Default::default();
        for x in e {
            for v in [x.0, x.1] {
                let root = forest.find(v);
                comps.entry(root).or_default().insert(v);
            }
        }
        Flat::from_components(comps.into_values().collect())
    }

    /// Flats covering `self`: merge two blocks joined by an edge of `G(w)`.
    pub fn covers(&self, g: &ReducedWeightGraph) -> Vec<Flat> {
        let blocks = self.blocks(g);
        let mut out = BTreeSet::new();
        for a in 0..blocks.len() {
            for b in a + 1..blocks.len() {
                let joined = blocks[a].iter().any(|u| blocks[b].iter().any(|v| g.has_edge(Edge::new(u, v))));
                if joined {
                    let mut comps: Vec<VertexSet> = blocks
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != a && *i != b)
                        .map(|(_, c)| *c)
                        .collect();
                    comps.push(blocks[a].union(blocks[b]));
                    out.insert(Flat::from_components(comps));
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Every flat of `M(w)`, found by closing all edge subsets. Exponential in
/// the number of edges.
pub fn all_flats_by_closure(g: &ReducedWeightGraph) -> BTreeSet<Flat> {
    let edges = g.edges();
    assert!(edges.len() < 26, "closure enumeration is limited to small graphs");
    (0u32..1 << edges.len())
        .map(|mask| {
            let subset: EdgeSet =
                edges.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, e)| *e).collect();
            Flat::from_edges(g, &closure(g, &subset).expect("edges come from the graph"))
        })
        .collect()
}
