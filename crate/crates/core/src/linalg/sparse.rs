use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dense::{normalize_divisor_chain, smith_invariants};
use super::int::ExactInt;

/// Sparse integer row, entries sorted by column, no explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow<T> {
    entries: Vec<(u32, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl<T: ExactInt> SparseRow<T> {
    pub fn new(mut entries: Vec<(u32, T)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(u32, T)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => {
                    *lv = T::mul_sub(lv, &T::from_i64(1), &v, &T::from_i64(-1)).expect("entry overflow");
                }
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        SparseRow { entries: merged }
    }

    pub fn from_i64(entries: impl IntoIterator<Item = (u32, i64)>) -> Self {
        Self::new(entries.into_iter().map(|(c, v)| (c, T::from_i64(v))).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, T)] {
        &self.entries
    }

    pub fn get(&self, col: u32) -> Option<&T> {
        self.entries.binary_search_by_key(&col, |e| e.0).ok().map(|i| &self.entries[i].1)
    }

    fn last(&self) -> Option<&(u32, T)> {
        self.entries.last()
    }

    /// `a*self - b*other`.
    fn combine(&self, a: &T, other: &Self, b: &T) -> Result<Self, Overflow> {
        let zero = T::zero();
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let ci = self.entries.get(i).map(|e| e.0);
            let cj = other.entries.get(j).map(|e| e.0);
            let (col, x, y) = match (ci, cj) {
                (Some(ci), Some(cj)) if ci == cj => {
                    i += 1;
                    j += 1;
                    (ci, &self.entries[i - 1].1, &other.entries[j - 1].1)
                }
                (Some(ci), Some(cj)) if ci < cj => {
                    i += 1;
                    (ci, &self.entries[i - 1].1, &zero)
                }
                (Some(ci), None) => {
                    i += 1;
                    (ci, &self.entries[i - 1].1, &zero)
                }
                (_, Some(cj)) => {
                    j += 1;
                    (cj, &zero, &other.entries[j - 1].1)
                }
                (None, None) => unreachable!(),
            };
            let v = T::mul_sub(a, x, b, y).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((col, v));
            }
        }
        Ok(SparseRow { entries: out })
    }

    /// Divides out the content so entries stay small.
    fn make_primitive(&mut self) {
        let mut g = T::zero();
        for (_, v) in &self.entries {
            g = g.gcd_with(v);
            if g.is_unit() {
                return;
            }
        }
        if !g.is_zero() {
            for (_, v) in &mut self.entries {
                *v = v.div_exact(&g);
            }
        }
    }

    fn to_big(&self) -> SparseRow<BigInt> {
        SparseRow { entries: self.entries.iter().map(|(c, v)| (*c, v.to_bigint())).collect() }
    }
}

/// Incremental row echelon form over the rationals with integer rows.
///
/// Each stored row is keyed by its largest column (its pivot), so the
/// columns without a pivot are the earliest columns that stay independent
/// modulo the row space.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pivots: HashMap<u32, SparseRow<T>>,
}

impl<T: ExactInt> Default for Echelon<T> {
    fn default() -> Self {
        Echelon { pivots: HashMap::new() }
    }
}

impl<T: ExactInt> Echelon<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().copied()
    }

    /// Adds `row` to the span. Returns whether the rank went up.
    pub fn insert(&mut self, mut row: SparseRow<T>) -> Result<bool, Overflow> {
        loop {
            let Some((col, lead)) = row.last().cloned() else {
                return Ok(false);
            };
            match self.pivots.get(&col) {
                Some(p) => {
                    let plead = &p.last().expect("pivot rows are nonempty").1;
                    row = row.combine(plead, p, &lead)?;
                    row.make_primitive();
                }
                None => {
                    row.make_primitive();
                    self.pivots.insert(col, row);
                    return Ok(true);
                }
            }
        }
    }

    /// Whether `row` lies in the span, without modifying it.
    pub fn contains(&self, mut row: SparseRow<T>) -> Result<bool, Overflow> {
        loop {
            let Some((col, lead)) = row.last().cloned() else {
                return Ok(true);
            };
            match self.pivots.get(&col) {
                Some(p) => {
                    let plead = &p.last().expect("pivot rows are nonempty").1;
                    row = row.combine(plead, p, &lead)?;
                    row.make_primitive();
                }
                None => return Ok(false),
            }
        }
    }

    /// Reduces a rational vector modulo the row space until it is supported
    /// on non-pivot columns only.
    pub fn reduce(&self, v: &BTreeMap<u32, BigRational>) -> BTreeMap<u32, BigRational> {
        let mut work: BTreeMap<u32, BigRational> =
            v.iter().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (*c, x.clone())).collect();
        let mut out = BTreeMap::new();
        while let Some((col, coeff)) = work.pop_last() {
            match self.pivots.get(&col) {
                Some(p) => {
                    let lead = BigRational::from_integer(p.last().expect("nonempty").1.to_bigint());
                    let factor = coeff / lead;
                    for (c, x) in &p.entries[..p.entries.len() - 1] {
                        let delta = &factor * BigRational::from_integer(x.to_bigint());
                        let slot = work.entry(*c).or_insert_with(BigRational::zero);
                        *slot -= delta;
                        if slot.is_zero() {
                            work.remove(c);
                        }
                    }
                }
                None => {
                    out.insert(col, coeff);
                }
            }
        }
        out
    }

    fn to_big(&self) -> Echelon<BigInt> {
        Echelon { pivots: self.pivots.iter().map(|(c, r)| (*c, r.to_big())).collect() }
    }
}

/// Echelon form that starts with `i128` entries and switches to big
/// integers on the first overflow.
#[derive(Debug, Clone)]
pub enum AdaptiveEchelon {
    Small(Echelon<i128>),
    Big(Echelon<BigInt>),
}

impl Default for AdaptiveEchelon {
    fn default() -> Self {
        AdaptiveEchelon::Small(Echelon::new())
    }
}

impl AdaptiveEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_i64(&mut self, entries: &[(u32, i64)]) -> bool {
        if let AdaptiveEchelon::Small(e) = self {
            match e.insert(SparseRow::from_i64(entries.iter().copied())) {
                Ok(grew) => return grew,
                Err(Overflow) => *self = AdaptiveEchelon::Big(e.to_big()),
            }
        }
        match self {
            AdaptiveEchelon::Big(e) => {
                e.insert(SparseRow::from_i64(entries.iter().copied())).expect("big integers do not overflow")
            }
            AdaptiveEchelon::Small(_) => unreachable!(),
        }
    }

    pub fn contains_i64(&self, entries: &[(u32, i64)]) -> bool {
        match self {
            AdaptiveEchelon::Small(e) => match e.contains(SparseRow::from_i64(entries.iter().copied())) {
                Ok(b) => b,
                Err(Overflow) => e.to_big().contains(SparseRow::from_i64(entries.iter().copied())).unwrap(),
            },
            AdaptiveEchelon::Big(e) => e.contains(SparseRow::from_i64(entries.iter().copied())).unwrap(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AdaptiveEchelon::Small(e) => e.rank(),
            AdaptiveEchelon::Big(e) => e.rank(),
        }
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        match self {
            AdaptiveEchelon::Small(e) => e.is_pivot(col),
            AdaptiveEchelon::Big(e) => e.is_pivot(col),
        }
    }

    pub fn reduce(&self, v: &BTreeMap<u32, BigRational>) -> BTreeMap<u32, BigRational> {
        match self {
            AdaptiveEchelon::Small(e) => e.reduce(v),
            AdaptiveEchelon::Big(e) => e.reduce(v),
        }
    }
}

/// Rank over the rationals of a sparse integer matrix.
pub fn sparse_rank(rows: &[Vec<(u32, i64)>]) -> usize {
    let mut e = AdaptiveEchelon::new();
    for r in rows {
        e.insert_i64(r);
    }
    e.rank()
}

/// Nonzero invariant factors of a sparse integer matrix.
///
/// Unit pivots are eliminated sparsely (unimodular operations, so the
/// cokernel is unchanged); whatever remains goes through dense Smith form.
pub fn sparse_invariant_factors(rows: &[Vec<(u32, i64)>]) -> Vec<BigInt> {
    let mut rows: Vec<Option<SparseRow<BigInt>>> = rows
        .iter()
        .map(|r| SparseRow::from_i64(r.iter().copied()))
        .map(|r| (!r.is_empty()).then_some(r))
        .collect();
    let mut by_col: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in r.entries() {
                by_col.entry(*c).or_default().push(i);
            }
        }
    }
    let mut units = 0usize;
    loop {
        let mut progress = false;
        for i in 0..rows.len() {
            let Some(row) = rows[i].as_ref() else { continue };
            let Some((col, val)) = row.entries().iter().find(|(_, v)| v.is_unit()).cloned() else {
                continue;
            };
            let pivot = rows[i].take().expect("checked above");
            units += 1;
            progress = true;
            let touched = by_col.remove(&col).unwrap_or_default();
            for k in touched {
                let Some(other) = rows[k].as_ref() else { continue };
                let Some(x) = other.get(col).cloned() else { continue };
                let updated = other.combine(&val, &pivot, &x).expect("big integers do not overflow");
                for (c, _) in updated.entries() {
                    if let Some(list) = by_col.get_mut(c) {
                        list.push(k);
                    } else {
                        by_col.insert(*c, vec![k]);
                    }
                }
                rows[k] = (!updated.is_empty()).then_some(updated);
            }
        }
        if !progress {
            break;
        }
    }
    let rest: Vec<&SparseRow<BigInt>> = rows.iter().flatten().collect();
    let mut cols: Vec<u32> = rest.iter().flat_map(|r| r.entries().iter().map(|e| e.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    let index: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let dense: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|r| {
            let mut d = vec![<BigInt as Zero>::zero(); cols.len()];
            for (c, v) in r.entries() {
                d[index[c]] = v.clone();
            }
            d
        })
        .collect();
    let mut factors = vec![BigInt::from(1); units];
    factors.extend(smith_invariants(dense, cols.len()));
    normalize_divisor_chain(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = AdaptiveEchelon::new();
        assert!(e.insert_i64(&[(0, 1), (1, 1)]));
        assert!(e.insert_i64(&[(1, 1), (2, 1)]));
        assert!(!e.insert_i64(&[(0, 1), (1, 2), (2, 1)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains_i64(&[(0, 1), (2, -1)]));
        assert!(!e.contains_i64(&[(0, 1)]));
        assert!(e.contains_i64(&[]));
    }

    #[test]
    fn non_pivot_columns_are_earliest() {
        let mut e = AdaptiveEchelon::new();
        e.insert_i64(&[(0, 1), (1, -1)]);
        e.insert_i64(&[(0, 2), (2, 1)]);
        assert!(!e.is_pivot(0));
        assert!(e.is_pivot(1) && e.is_pivot(2));
        let v: BTreeMap<u32, BigRational> = [(2, BigRational::from_integer(1.into()))].into();
        let r = e.reduce(&v);
        assert_eq!(r, [(0, BigRational::from_integer((-2).into()))].into());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX;
        let mut e = AdaptiveEchelon::new();
        e.insert_i64(&[(0, big), (1, big - 1)]);
        e.insert_i64(&[(0, big - 2), (1, big)]);
        e.insert_i64(&[(0, 3), (1, big), (2, big)]);
        e.insert_i64(&[(1, big - 7), (2, 5)]);
        let dense = super::super::ExactMatrix::from_i64_rows(&[
            vec![big, big - 1, 0],
            vec![big - 2, big, 0],
            vec![3, big, big],
            vec![0, big - 7, 5],
        ]);
        assert_eq!(e.rank(), dense.rank());
        assert!(matches!(e, AdaptiveEchelon::Big(_)));
    }

    #[test]
    fn invariant_factors_match_dense() {
        let rows = vec![vec![(0, 2), (1, 4), (2, 4)], vec![(0, -6), (1, 6), (2, 12)], vec![(0, 10), (1, -4), (2, -16)]];
        let got = sparse_invariant_factors(&rows);
        assert_eq!(got, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let rows = vec![vec![(0, 1), (3, 2)], vec![(3, 2)], vec![(1, 1), (3, 4)]];
        assert_eq!(sparse_invariant_factors(&rows), vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)]);
    }
}
