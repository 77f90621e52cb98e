use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::graph_matroid::FlatLabel;
use crate::subset::VertexSet;
use crate::weights::WeightVector;

/// Dual graph of the generic curve in a boundary divisor: two components
/// joined at one node. Vertex A carries the legs that avoid 1, vertex B
/// carries the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualGraph {
    n: usize,
    a: VertexSet,
    b: VertexSet,
}

impl DualGraph {
    /// The tree of the split `T | T^c`. Either side gives the same graph.
    pub fn from_split(t: VertexSet, n: usize) -> Self {
        let all = VertexSet::range(1, n);
        let t = t.intersection(all);
        let a = if t.contains(1) { all.difference(t) } else { t };
        DualGraph { n, a, b: all.difference(a) }
    }

    pub fn legs_a(&self) -> VertexSet {
        self.a
    }

    pub fn legs_b(&self) -> VertexSet {
        self.b
    }

    /// Both components stable: leg weight plus one node exceeds 2.
    pub fn is_stable(&self, w: &WeightVector) -> bool {
        let side = |s: VertexSet| s.iter().map(|i| w.weight(i).clone()).sum::<BigRational>() > BigRational::one();
        w.len() == self.n && side(self.a) && side(self.b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": [
                { "name": "A", "legs": self.a },
                { "name": "B", "legs": self.b },
            ],
            "edges": [["A", "B"]],
        })
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{} --- B{}", self.a, self.b)
    }
}

/// Dual graph for the divisor `D^S` of `M̄_{0,w}` with `n` marked points.
pub fn dual_graph(label: FlatLabel, n: usize) -> DualGraph {
    DualGraph::from_split(label.set(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{canonical_form, HeavyLightProfile};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn losev_manin_divisors() {
        let g = dual_graph(FlatLabel::unchecked(set(&[2, 3])), 5);
        assert_eq!(g.legs_a(), set(&[2, 3]));
        assert_eq!(g.legs_b(), set(&[1, 4, 5]));
        let g = dual_graph(FlatLabel::unchecked(set(&[2, 3, 4])), 5);
        assert_eq!(g.legs_b(), set(&[1, 5]));
        let w = canonical_form(&HeavyLightProfile::canonical(2, 5).unwrap()).unwrap();
        assert!(g.is_stable(&w));
        assert!(!DualGraph::from_split(set(&[3, 4]), 5).is_stable(&w));
        assert_eq!(g.to_string(), "A{2,3,4} --- B{1,5}");
    }

    #[test]
    fn complement_gives_same_graph() {
        assert_eq!(DualGraph::from_split(set(&[2, 3]), 5), DualGraph::from_split(set(&[1, 4, 5]), 5));
    }
}
