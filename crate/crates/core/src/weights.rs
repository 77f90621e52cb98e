//! Weight vectors, heavy/light classification and the canonical
//! `(1^m, ε^(n-m))` normal form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::subset::MAX_LABEL;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("weight w_{index} = {value} is outside (0,1]")]
    WeightOutOfRange { index: usize, value: String },
    #[error("total weight {0} must exceed 2")]
    TotalWeightTooSmall(String),
    #[error("need at least 4 marked points, got {0}")]
    TooFewPoints(usize),
    #[error("at most {MAX_LABEL} marked points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("weight vector is not heavy/light: w_{0} is neither heavy nor light")]
    NotHeavyLight(usize),
    #[error("need at least two heavy weights, found {0}")]
    TooFewHeavy(usize),
}

impl WeightError {
    /// Variant name, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            WeightError::MalformedRational(_) => "MalformedRational",
            WeightError::WeightOutOfRange { .. } => "WeightOutOfRange",
            WeightError::TotalWeightTooSmall(_) => "TotalWeightTooSmall",
            WeightError::TooFewPoints(_) => "TooFewPoints",
            WeightError::TooManyPoints(_) => "TooManyPoints",
            WeightError::NotHeavyLight(_) => "NotHeavyLight",
            WeightError::TooFewHeavy(_) => "TooFewHeavy",
        }
    }
}

/// Exact rational weights `w_1, ..., w_n` with every entry in `(0,1]` and
/// total weight above 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self, WeightError> {
        for (i, w) in entries.iter().enumerate() {
            if !w.is_positive() || *w > BigRational::one() {
                return Err(WeightError::WeightOutOfRange { index: i + 1, value: w.to_string() });
            }
        }
        let n = entries.len();
        if n < 4 {
            return Err(WeightError::TooFewPoints(n));
        }
        if n > MAX_LABEL {
            return Err(WeightError::TooManyPoints(n));
        }
        let total: BigRational = entries.iter().sum();
        if total <= BigRational::from_integer(BigInt::from(2)) {
            return Err(WeightError::TotalWeightTooSmall(total.to_string()));
        }
        Ok(WeightVector { entries })
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weight of marked point `i` (1-based).
    pub fn weight(&self, i: usize) -> &BigRational {
        &self.entries[i - 1]
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for WeightVector {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_weights(s)
    }
}

/// Parses a comma-separated list of integers or `p/q` rationals.
/// Whitespace around entries is ignored.
pub fn parse_weights(text: &str) -> Result<WeightVector, WeightError> {
    let entries = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            parse_rational(tok).ok_or_else(|| WeightError::MalformedRational(tok.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    WeightVector::new(entries)
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    let (num, den) = match tok.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (tok, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Partition of the marked points into heavy and light ones.
///
/// Indices are 1-based positions in the originating weight vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeavyLightProfile {
    heavy: Vec<usize>,
    light: Vec<usize>,
}

impl HeavyLightProfile {
    /// The profile of `(1^m, ε^(n-m))`: points `1..=m` heavy, the rest light.
    ///
    /// A lone light point pairs above 1 with every heavy point and has no
    /// light partner, so it is heavy; `m = n - 1` gives the all-heavy profile.
    pub fn canonical(m: usize, n: usize) -> Result<Self, WeightError> {
        if n < 4 {
            return Err(WeightError::TooFewPoints(n));
        }
        if n > MAX_LABEL {
            return Err(WeightError::TooManyPoints(n));
        }
        if m < 2 || m > n {
            return Err(WeightError::TooFewHeavy(m.min(n)));
        }
        let m = if m + 1 == n { n } else { m };
        Ok(HeavyLightProfile { heavy: (1..=m).collect(), light: (m + 1..=n).collect() })
    }

    /// Every distinct heavy/light profile with `n` points, by increasing `m`.
    pub fn all_with_points(n: usize) -> Vec<Self> {
        (2..=n).filter(|&m| m + 1 != n).filter_map(|m| Self::canonical(m, n).ok()).collect()
    }

    pub fn heavy(&self) -> &[usize] {
        &self.heavy
    }

    pub fn light(&self) -> &[usize] {
        &self.light
    }

    /// Number of heavy points.
    pub fn m(&self) -> usize {
        self.heavy.len()
    }

    /// Total number of marked points.
    pub fn n(&self) -> usize {
        self.heavy.len() + self.light.len()
    }

    /// Whether heavy points come first, i.e. labels already match the
    /// canonical labelling.
    pub fn is_canonical_order(&self) -> bool {
        self.heavy.iter().copied().eq(1..=self.m())
    }

    /// Whether canonical label `i` is heavy.
    pub fn is_heavy_label(&self, i: usize) -> bool {
        (1..=self.m()).contains(&i)
    }

    /// Original index of each canonical label (heavy first), 1-based.
    pub fn canonical_order(&self) -> Vec<usize> {
        self.heavy.iter().chain(&self.light).copied().collect()
    }

    /// Canonical light weight `1/(n-m+1)`, or `None` when there are no
    /// light points.
    pub fn epsilon(&self) -> Option<BigRational> {
        let lights = self.light.len();
        (lights > 0).then(|| BigRational::new(BigInt::one(), BigInt::from(lights + 1)))
    }

    /// Short human-readable name such as `(1^2, 1/4^3)`.
    pub fn describe(&self) -> String {
        match self.epsilon() {
            Some(eps) => format!("(1^{}, {}^{})", self.m(), eps, self.light.len()),
            None => format!("(1^{})", self.m()),
        }
    }
}

/// Heavy/light classification of `w`.
///
/// `w_i` is heavy when `w_i + w_j > 1` for every `j != i`; a non-heavy `w_j`
/// is light when every partner with `w_i + w_j > 1` is heavy.
pub fn classify(w: &WeightVector) -> Result<HeavyLightProfile, WeightError> {
    let n = w.len();
    let one = BigRational::one();
    let exceeds = |i: usize, j: usize| w.entries[i].clone() + &w.entries[j] > one;
    let is_heavy: Vec<bool> = (0..n).map(|i| (0..n).all(|j| j == i || exceeds(i, j))).collect();
    let mut heavy = Vec::new();
    let mut light = Vec::new();
    for j in 0..n {
        if is_heavy[j] {
            heavy.push(j + 1);
        } else if (0..n).all(|i| i == j || !exceeds(i, j) || is_heavy[i]) {
            light.push(j + 1);
        } else {
            return Err(WeightError::NotHeavyLight(j + 1));
        }
    }
    if heavy.len() < 2 {
        return Err(WeightError::TooFewHeavy(heavy.len()));
    }
    Ok(HeavyLightProfile { heavy, light })
}

/// `(1^m, ε^(n-m))` with `ε = 1/(n-m+1)`, heavy points first.
pub fn canonical_form(p: &HeavyLightProfile) -> Result<WeightVector, WeightError> {
    if p.m() < 2 {
        return Err(WeightError::TooFewHeavy(p.m()));
    }
    let mut entries = vec![BigRational::one(); p.m()];
    if let Some(eps) = p.epsilon() {
        entries.extend(std::iter::repeat(eps).take(p.light.len()));
    }
    WeightVector::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn parses_losev_manin_weights() {
        let w = parse_weights("1,1,1/10,1/10,1/10").unwrap();
        assert_eq!(w.entries(), &[q(1, 1), q(1, 1), q(1, 10), q(1, 10), q(1, 10)]);
        assert_eq!(w.to_string(), "1,1,1/10,1/10,1/10");
    }

    #[test]
    fn parses_all_ones() {
        let w = parse_weights("1,1,1,1").unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.entries().iter().all(|x| x.is_one()));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_weights("1,1,3"), Err(WeightError::WeightOutOfRange { index: 3, .. })));
        assert!(matches!(parse_weights("1,1,x,1"), Err(WeightError::MalformedRational(_))));
        assert!(matches!(parse_weights("1,1,1/0,1"), Err(WeightError::MalformedRational(_))));
        assert!(matches!(parse_weights("1,1,,1"), Err(WeightError::MalformedRational(_))));
        assert!(matches!(parse_weights("1,1,0,1"), Err(WeightError::WeightOutOfRange { .. })));
        assert!(matches!(parse_weights("1,1/2,1/4,1/4"), Err(WeightError::TotalWeightTooSmall(_))));
        assert!(matches!(parse_weights("1,1,1"), Err(WeightError::TooFewPoints(3))));
    }

    #[test]
    fn whitespace_is_not_significant() {
        assert_eq!(parse_weights(" 1, 1 ,1/2, 1/2 ").unwrap(), parse_weights("1,1,1/2,1/2").unwrap());
    }

    #[test]
    fn classify_losev_manin() {
        let p = classify(&parse_weights("1,1,1/10,1/10,1/10").unwrap()).unwrap();
        assert_eq!(p.heavy(), &[1, 2]);
        assert_eq!(p.light(), &[3, 4, 5]);
        assert_eq!((p.m(), p.n()), (2, 5));
    }

    #[test]
    fn classify_all_heavy() {
        let p = classify(&parse_weights("1,1,1,1").unwrap()).unwrap();
        assert_eq!(p.heavy(), &[1, 2, 3, 4]);
        assert!(p.light().is_empty());
    }

    #[test]
    fn classify_rejects_mixed_weights() {
        let w = parse_weights("3/5,3/5,3/5,3/10,3/10").unwrap();
        assert_eq!(classify(&w), Err(WeightError::NotHeavyLight(1)));
    }

    #[test]
    fn classify_rejects_single_heavy() {
        let w = parse_weights("1,1/2,1/2,1/2,1/2").unwrap();
        assert_eq!(classify(&w), Err(WeightError::TooFewHeavy(1)));
    }

    #[test]
    fn canonical_forms() {
        let p = HeavyLightProfile::canonical(2, 5).unwrap();
        assert_eq!(canonical_form(&p).unwrap().to_string(), "1,1,1/4,1/4,1/4");
        let p = HeavyLightProfile::canonical(4, 4).unwrap();
        assert_eq!(canonical_form(&p).unwrap().to_string(), "1,1,1,1");
        let p = classify(&parse_weights("1,1,2/5,2/5").unwrap()).unwrap();
        assert_eq!(canonical_form(&p).unwrap().to_string(), "1,1,1/3,1/3");
    }

    #[test]
    fn canonical_form_moves_heavy_first() {
        let p = classify(&parse_weights("1/10,1,1/10,1,1/10").unwrap()).unwrap();
        assert_eq!(p.heavy(), &[2, 4]);
        assert!(!p.is_canonical_order());
        assert_eq!(p.canonical_order(), vec![2, 4, 1, 3, 5]);
        assert_eq!(canonical_form(&p).unwrap().to_string(), "1,1,1/4,1/4,1/4");
    }

    #[test]
    fn canonical_profile_rejects_bad_counts() {
        assert!(HeavyLightProfile::canonical(1, 5).is_err());
        assert_eq!(HeavyLightProfile::canonical(4, 5).unwrap(), HeavyLightProfile::canonical(5, 5).unwrap());
        let ms: Vec<usize> = HeavyLightProfile::all_with_points(6).iter().map(|p| p.m()).collect();
        assert_eq!(ms, vec![2, 3, 4, 6]);
        assert!(HeavyLightProfile::canonical(2, 3).is_err());
    }
}
