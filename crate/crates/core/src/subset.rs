//! Small sets of marked-point labels packed into a machine word.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest label a [`VertexSet`] can hold.
pub const MAX_LABEL: usize = 63;

/// A set of marked-point labels in `1..=63`, stored as a bitmask.
///
/// Ordering is by cardinality first, then lexicographic on the sorted
/// element lists, which is the canonical order for generators and flats.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits & !1)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The interval `lo..=hi` of labels.
    pub fn range(lo: usize, hi: usize) -> Self {
        (lo..=hi).collect()
    }

    pub fn singleton(v: usize) -> Self {
        assert!((1..=MAX_LABEL).contains(&v), "label {v} out of range");
        VertexSet(1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v <= MAX_LABEL && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        *self = self.union(VertexSet::singleton(v));
    }

    pub fn remove(&mut self, v: usize) {
        if v <= MAX_LABEL {
            self.0 &= !(1 << v);
        }
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(cur.wrapping_sub(full) & full) };
            Some(VertexSet(cur))
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = items.iter().find(|&&v| v == 0 || v > MAX_LABEL) {
            return Err(serde::de::Error::custom(format!("label {bad} out of range")));
        }
        Ok(items.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_cardinality_then_lex() {
        let mut sets: Vec<VertexSet> = vec![
            [2, 4, 5].into_iter().collect(),
            [2, 5].into_iter().collect(),
            [2, 3, 4].into_iter().collect(),
            [2, 3].into_iter().collect(),
        ];
        sets.sort();
        let lists: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
        assert_eq!(lists, vec![vec![2, 3], vec![2, 5], vec![2, 3, 4], vec![2, 4, 5]]);
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s: VertexSet = [2, 4, 7].into_iter().collect();
        let subs: Vec<VertexSet> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(VertexSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn json_is_sorted_array() {
        let s: VertexSet = [5, 2, 3].into_iter().collect();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,3,5]");
        let back: VertexSet = serde_json::from_str("[3,2,5]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<VertexSet>("[0]").is_err());
    }
}
