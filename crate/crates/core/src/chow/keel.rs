use std::collections::BTreeSet;

use crate::graph_matroid::FlatLabel;
use crate::subset::VertexSet;

use super::presentation::orient;
use super::{ChowError, Presentation};

/// Keel's presentation of the Chow ring of `M̄_{0,n}`.
///
/// Boundary divisors are indexed by splits `T | T^c` of `{1..n}` with both
/// sides of size at least 2. `D^T` and `D^{T^c}` are the same generator, so
/// each split is stored by the side that does not contain 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeelPresentation {
    n: usize,
    generators: Vec<VertexSet>,
    incompatible: Vec<(usize, usize)>,
    linear_relations: Vec<Vec<i64>>,
}

/// The side of the split `T | T^c` that avoids 1.
pub fn representative(t: VertexSet, n: usize) -> VertexSet {
    if t.contains(1) {
        VertexSet::range(1, n).difference(t)
    } else {
        t
    }
}

/// Splits `A | A^c` and `B | B^c` index intersecting divisors unless one
/// of `A ⊆ B`, `B ⊆ A`, `A ∩ B = ∅`, `A ∪ B = {1..n}` holds. Invariant
/// under replacing either set by its complement.
pub fn keel_compatible(a: VertexSet, b: VertexSet, n: usize) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b) || a.union(b) == VertexSet::range(1, n)
}

impl KeelPresentation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[VertexSet] {
        &self.generators
    }

    /// Index of the generator named by either side of a split.
    pub fn index_of(&self, t: VertexSet) -> Option<usize> {
        let r = representative(t, self.n);
        self.generators.binary_search(&r).ok()
    }

    pub fn incompatible_pairs(&self) -> &[(usize, usize)] {
        &self.incompatible
    }

    pub fn linear_relations(&self) -> &[Vec<i64>] {
        &self.linear_relations
    }

    /// The same data as a [`Presentation`], with each generator labelled by
    /// its representative.
    pub fn to_presentation(&self) -> Presentation {
        Presentation {
            weights: vec!["1"; self.n].join(","),
            n: self.n,
            generators: self.generators.iter().map(|&t| FlatLabel::unchecked(t)).collect(),
            sr_pairs: self.incompatible.clone(),
            linear_relations: self.linear_relations.clone(),
        }
    }
}

/// Largest `n` accepted; the generator count grows like `2^(n-1)`.
pub const MAX_KEEL_POINTS: usize = 16;

pub fn keel_presentation(n: usize) -> Result<KeelPresentation, ChowError> {
    if !(4..=MAX_KEEL_POINTS).contains(&n) {
        return Err(ChowError::BadPointCount(n));
    }
    let all = VertexSet::range(1, n);
    let generators: Vec<VertexSet> = all
        .subsets()
        .filter(|t| t.len() >= 2 && all.difference(*t).len() >= 2)
        .map(|t| representative(t, n))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut incompatible = Vec::new();
    for a in 0..generators.len() {
        for b in a + 1..generators.len() {
            // Check both sides of the first split so that the choice of
            // representative cannot matter.
            let (s, t) = (generators[a], generators[b]);
            let sc = all.difference(s);
            debug_assert_eq!(keel_compatible(s, t, n), keel_compatible(sc, t, n));
            if !keel_compatible(s, t, n) {
                incompatible.push((a, b));
            }
        }
    }

    // R(ij|kl): generators whose split puts i, j on one side and k, l on
    // the other.
    let separating = |i: usize, j: usize, k: usize, l: usize| -> Vec<i64> {
        generators
            .iter()
            .map(|&t| {
                let side = |v: usize| t.contains(v);
                i64::from(side(i) == side(j) && side(k) == side(l) && side(i) != side(k))
            })
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut linear_relations = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if BTreeSet::from([i, j, k, l]).len() < 4 {
                        continue;
                    }
                    let base = separating(i, j, k, l);
                    for other in [separating(i, k, j, l), separating(i, l, j, k)] {
                        let row = orient(base.iter().zip(&other).map(|(a, b)| a - b).collect());
                        if row.iter().any(|&c| c != 0) && seen.insert(row.clone()) {
                            linear_relations.push(row);
                        }
                    }
                }
            }
        }
    }
    Ok(KeelPresentation { n, generators, incompatible, linear_relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        assert_eq!(keel_presentation(4).unwrap().generators().len(), 3);
        assert_eq!(keel_presentation(5).unwrap().generators().len(), 10);
        assert_eq!(keel_presentation(6).unwrap().generators().len(), 25);
        assert_eq!(keel_presentation(7).unwrap().generators().len(), 56);
        assert!(matches!(keel_presentation(3), Err(ChowError::BadPointCount(3))));
    }

    #[test]
    fn complements_name_one_generator() {
        let k = keel_presentation(5).unwrap();
        let t: VertexSet = [1, 4, 5].into_iter().collect();
        let tc: VertexSet = [2, 3].into_iter().collect();
        assert_eq!(k.index_of(t), k.index_of(tc));
        assert_eq!(k.generators()[k.index_of(t).unwrap()], tc);
        assert!(k.generators().iter().all(|g| !g.contains(1)));
    }

    #[test]
    fn compatibility_cases() {
        let s = |v: &[usize]| v.iter().copied().collect::<VertexSet>();
        assert!(keel_compatible(s(&[2, 3]), s(&[2, 3, 4]), 5));
        assert!(keel_compatible(s(&[2, 3]), s(&[4, 5]), 5));
        assert!(keel_compatible(s(&[1, 2, 3]), s(&[2, 3, 4, 5]), 5));
        assert!(!keel_compatible(s(&[2, 3]), s(&[3, 4]), 5));
    }

    #[test]
    fn n4_relations_identify_all_generators() {
        let k = keel_presentation(4).unwrap();
        assert!(k.incompatible_pairs().len() == 3);
        let m = crate::linalg::ExactMatrix::from_i64_rows(k.linear_relations());
        assert_eq!(m.rank(), 2);
    }
}
