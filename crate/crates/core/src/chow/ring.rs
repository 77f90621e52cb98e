use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::graph_matroid::FlatLabel;
use crate::linalg::{sparse_invariant_factors, AdaptiveEchelon, ExactMatrix};
use crate::subset::VertexSet;

use super::{ChowError, Presentation};

/// A monomial in the generators, stored as the sorted list of generator
/// indices with repetition. Derived order is lexicographic on that list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut factors: Vec<u32>) -> Self {
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn generator(g: usize) -> Self {
        Monomial(vec![g as u32])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[u32] {
        &self.0
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial::new(v)
    }

    fn times_generator(&self, g: u32) -> Monomial {
        let mut v = self.0.clone();
        let at = v.partition_point(|&x| x <= g);
        v.insert(at, g);
        Monomial(v)
    }

    /// Is every factor squarefree?
    pub fn is_squarefree(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Generator indices with exponents.
    pub fn powers(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, e)) if *h == g => *e += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }
}

/// A polynomial with rational coefficients in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }

    /// Common degree of all terms; the zero polynomial has degree 0.
    pub fn degree(&self) -> Result<usize, ChowError> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let Some(d) = degrees.next() else { return Ok(0) };
        if degrees.all(|e| e == d) {
            Ok(d)
        } else {
            Err(ChowError::InhomogeneousInput)
        }
    }

    /// Parses text such as `2*D{2,3}*D{2,3,5}^2 - D^{2,4} + 1/2*D{2,5}`.
    ///
    /// Factors are `D{..}` or `D^{..}` with an optional `^k`, or rational
    /// constants; terms are joined by `+` and `-`.
    pub fn parse(text: &str, pres: &Presentation) -> Result<Polynomial, ChowError> {
        Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, pres }.polynomial()
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    pres: &'a Presentation,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, what: &str) -> Result<T, ChowError> {
        Err(ChowError::MalformedPolynomial(format!("{what} at position {}", self.pos)))
    }

    fn polynomial(&mut self) -> Result<Polynomial, ChowError> {
        if self.chars.is_empty() {
            return self.fail("empty input");
        }
        let mut out = Polynomial::zero();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * BigRational::from_integer(sign.into()));
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else if self.peek().is_none() {
                return Ok(out);
            } else {
                return self.fail("expected + or -");
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, BigRational), ChowError> {
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some('D') => {
                    self.pos += 1;
                    self.eat('^');
                    let g = self.label()?;
                    let e = if self.eat('^') { self.integer()? } else { 1 };
                    factors.extend(std::iter::repeat_n(g, e));
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let den = if self.eat('/') { self.integer()? } else { 1 };
                    if den == 0 {
                        return self.fail("zero denominator");
                    }
                    coeff *= BigRational::new(num.into(), den.into());
                }
                _ => return self.fail("expected a factor"),
            }
            if !self.eat('*') {
                return Ok((Monomial::new(factors), coeff));
            }
        }
    }

    fn integer(&mut self) -> Result<usize, ChowError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().or_else(|_| self.fail("expected an integer"))
    }

    fn label(&mut self) -> Result<u32, ChowError> {
        if !self.eat('{') {
            return self.fail("expected {");
        }
        let mut items = Vec::new();
        loop {
            items.push(self.integer()?);
            if self.eat('}') {
                break;
            }
            if !self.eat(',') {
                return self.fail("expected , or }");
            }
        }
        let text = format!("{{{}}}", items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        if items.iter().any(|&v| v == 0 || v > crate::subset::MAX_LABEL) {
            return Err(ChowError::UnknownGenerator(text));
        }
        let set: VertexSet = items.into_iter().collect();
        self.pres
            .generators()
            .iter()
            .position(|g| g.set() == set)
            .map(|i| i as u32)
            .ok_or(ChowError::UnknownGenerator(text))
    }
}

/// An element of one graded piece, in coordinates of that piece's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    degree: usize,
    coords: Vec<BigRational>,
}

impl ChowClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// The zero class of degree `k`.
    pub fn zero_in(ring: &ChowRing, k: usize) -> ChowClass {
        ring.reduce_unchecked(k, &Polynomial::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        assert_eq!(self.degree, other.degree, "adding classes of different degree");
        ChowClass { degree: self.degree, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> ChowClass {
        ChowClass { degree: self.degree, coords: self.coords.iter().map(|a| a * c).collect() }
    }
}

/// Basis monomials for every degree `0..=n-3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub degrees: Vec<Vec<Monomial>>,
}

impl GradedBasis {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(Vec::len).collect()
    }
}

struct Piece {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    echelon: AdaptiveEchelon,
    basis: Vec<u32>,
    basis_pos: HashMap<u32, usize>,
}

/// The graded ring of a [`Presentation`], computed one degree at a time.
///
/// Degree `k` is spanned by the nested monomials of degree `k`; the other
/// monomials vanish modulo the monomial relations. The linear relations
/// times nested monomials of degree `k - 1` span the rest of the ideal in
/// degree `k`. The basis of each piece is the lexicographically earliest
/// set of nested monomials that stays independent modulo the ideal.
pub struct ChowRing {
    pres: Presentation,
    compatible: Vec<Vec<bool>>,
    relations: Vec<Vec<(u32, i64)>>,
    pieces: Vec<OnceLock<Piece>>,
    top_scale: OnceLock<BigRational>,
}

impl fmt::Debug for ChowRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChowRing").field("weights", &self.pres.weights()).finish_non_exhaustive()
    }
}

impl ChowRing {
    pub fn new(pres: Presentation) -> Self {
        let count = pres.generators().len();
        let mut compatible = vec![vec![true; count]; count];
        for &(a, b) in pres.sr_pairs() {
            compatible[a][b] = false;
            compatible[b][a] = false;
        }
        let relations = pres
            .linear_relations()
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &c)| c != 0).map(|(g, &c)| (g as u32, c)).collect())
            .collect();
        // One degree past the top is kept for checking that it vanishes.
        let pieces = (0..pres.grading_dimension() + 2).map(|_| OnceLock::new()).collect();
        ChowRing { pres, compatible, relations, pieces, top_scale: OnceLock::new() }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn top_degree(&self) -> usize {
        self.pres.grading_dimension()
    }

    pub fn generators(&self) -> &[FlatLabel] {
        self.pres.generators()
    }

    fn check_degree(&self, k: usize) -> Result<(), ChowError> {
        if k > self.top_degree() {
            Err(ChowError::DegreeOutOfRange { degree: k, max: self.top_degree() })
        } else {
            Ok(())
        }
    }

    /// Whether the support of `m` is a nested set.
    pub fn is_nested(&self, m: &Monomial) -> bool {
        let f = m.factors();
        (0..f.len()).all(|i| (i + 1..f.len()).all(|j| self.compatible[f[i] as usize][f[j] as usize]))
    }

    fn enumerate(&self, k: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.extend(&mut cur, 0, k, &mut out);
        out
    }

    fn extend(&self, cur: &mut Vec<u32>, start: usize, k: usize, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(Monomial(cur.clone()));
            return;
        }
        for g in start..self.compatible.len() {
            if cur.iter().all(|&h| self.compatible[h as usize][g]) {
                cur.push(g as u32);
                self.extend(cur, g, k, out);
                cur.pop();
            }
        }
    }

    /// Degree-`k` monomials with nested support, in lexicographic order.
    pub fn nested_monomials(&self, k: usize) -> Result<Vec<Monomial>, ChowError> {
        self.check_degree(k)?;
        Ok(self.enumerate(k))
    }

    /// Rows `ℓ·μ` of the ideal in degree `k`, over the columns in `index`.
    fn relation_rows<'a>(
        &'a self,
        k: usize,
        index: &'a HashMap<Monomial, u32>,
    ) -> impl Iterator<Item = Vec<(u32, i64)>> + 'a {
        let lower = if k == 0 { Vec::new() } else { self.enumerate(k - 1) };
        lower.into_iter().flat_map(move |mu| {
            self.relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .filter(|&&(g, _)| mu.factors().iter().all(|&h| self.compatible[h as usize][g as usize]))
                        .map(|&(g, c)| (index[&mu.times_generator(g)], c))
                        .collect::<Vec<_>>()
                })
                .filter(|row| !row.is_empty())
                .collect::<Vec<_>>()
        })
    }

    fn piece(&self, k: usize) -> &Piece {
        self.pieces[k].get_or_init(|| {
            let monomials = self.enumerate(k);
            let index: HashMap<Monomial, u32> =
                monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
            let mut echelon = AdaptiveEchelon::new();
            for row in self.relation_rows(k, &index) {
                if echelon.rank() == monomials.len() {
                    break;
                }
                echelon.insert_i64(&row);
            }
            let basis: Vec<u32> = (0..monomials.len() as u32).filter(|&c| !echelon.is_pivot(c)).collect();
            let basis_pos = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            Piece { monomials, index, echelon, basis, basis_pos }
        })
    }

    /// Rank of the graded piece in degree `k`, for `k` up to one past the top.
    pub(crate) fn rank_in_degree(&self, k: usize) -> usize {
        if k >= self.pieces.len() {
            return 0;
        }
        self.piece(k).basis.len()
    }

    /// Ranks `h_0, …, h_{n-3}`.
    pub fn hilbert_function(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|k| self.piece(k).basis.len()).collect()
    }

    pub fn basis(&self, k: usize) -> Result<Vec<Monomial>, ChowError> {
        self.check_degree(k)?;
        let p = self.piece(k);
        Ok(p.basis.iter().map(|&c| p.monomials[c as usize].clone()).collect())
    }

    pub fn graded_basis(&self) -> GradedBasis {
        GradedBasis { degrees: (0..=self.top_degree()).map(|k| self.basis(k).expect("degree in range")).collect() }
    }

    /// Coordinates of every nested monomial of degree `k` (rows) in the basis
    /// (columns).
    pub fn reduction_matrix(&self, k: usize) -> Result<ExactMatrix, ChowError> {
        self.check_degree(k)?;
        let p = self.piece(k);
        let mut out = ExactMatrix::zeros(p.monomials.len(), p.basis.len());
        for (i, m) in p.monomials.iter().enumerate() {
            for (j, x) in self.reduce_monomial(k, m).coords.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    }

    fn reduce_vector(&self, k: usize, v: &BTreeMap<u32, BigRational>) -> ChowClass {
        let p = self.piece(k);
        let mut coords = vec![BigRational::zero(); p.basis.len()];
        for (c, x) in p.echelon.reduce(v) {
            coords[p.basis_pos[&c]] = x;
        }
        ChowClass { degree: k, coords }
    }

    fn reduce_monomial(&self, k: usize, m: &Monomial) -> ChowClass {
        let p = self.piece(k);
        let mut v = BTreeMap::new();
        if let Some(&c) = p.index.get(m) {
            v.insert(c, BigRational::one());
        }
        self.reduce_vector(k, &v)
    }

    /// Reduces a homogeneous polynomial to coordinates in the basis.
    pub fn reduce(&self, poly: &Polynomial) -> Result<ChowClass, ChowError> {
        let k = poly.degree()?;
        self.check_degree(k)?;
        Ok(self.reduce_unchecked(k, poly))
    }

    /// Like [`reduce`](Self::reduce) but allows degree `n - 2`, where every
    /// class should vanish.
    pub(crate) fn reduce_unchecked(&self, k: usize, poly: &Polynomial) -> ChowClass {
        if k >= self.pieces.len() {
            return ChowClass { degree: k, coords: Vec::new() };
        }
        let p = self.piece(k);
        let v: BTreeMap<u32, BigRational> =
            poly.terms().iter().filter_map(|(m, c)| p.index.get(m).map(|&i| (i, c.clone()))).collect();
        self.reduce_vector(k, &v)
    }

    pub fn unit(&self) -> ChowClass {
        self.reduce_monomial(0, &Monomial::one())
    }

    pub fn generator_class(&self, g: usize) -> ChowClass {
        self.reduce_monomial(1, &Monomial::generator(g))
    }

    /// Whether a degree-`k` polynomial lies in the ideal.
    pub fn is_zero(&self, poly: &Polynomial) -> Result<bool, ChowError> {
        let k = poly.degree()?;
        Ok(self.reduce_unchecked(k, poly).is_zero())
    }

    /// The polynomial `Σ c_i b_i` over the basis monomials.
    pub fn lift(&self, a: &ChowClass) -> Polynomial {
        let p = self.piece(a.degree);
        let mut out = Polynomial::zero();
        for (&c, x) in p.basis.iter().zip(&a.coords) {
            if !x.is_zero() {
                out.add_term(p.monomials[c as usize].clone(), x.clone());
            }
        }
        out
    }

    pub fn multiply(&self, a: &ChowClass, b: &ChowClass) -> Result<ChowClass, ChowError> {
        let degree = a.degree + b.degree;
        if degree > self.top_degree() {
            return Err(ChowError::DegreeOverflow { degree, max: self.top_degree() });
        }
        Ok(self.reduce_unchecked(degree, &self.lift(a).mul(&self.lift(b))))
    }

    /// Rank of the pairing `A^k × A^{n-3-k} → A^{n-3}`.
    pub fn pairing_rank(&self, k: usize) -> Result<usize, ChowError> {
        self.check_degree(k)?;
        let top = self.top_degree();
        let left = self.basis(k)?;
        let right = self.basis(top - k)?;
        let mut m = ExactMatrix::zeros(left.len(), right.len());
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                let c = self.reduce_monomial(top, &a.times(b));
                if let Some(x) = c.coords.into_iter().next() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m.rank())
    }

    /// Whether the degree-`k` piece is a free abelian group, i.e. every
    /// invariant factor of the integral relation matrix is 1.
    pub fn torsion_check(&self, k: usize) -> Result<bool, ChowError> {
        self.check_degree(k)?;
        let p = self.piece(k);
        let rows: Vec<Vec<(u32, i64)>> = self.relation_rows(k, &p.index).collect();
        Ok(sparse_invariant_factors(&rows).iter().all(One::is_one))
    }

    /// Positive rational `s` such that top-degree classes of integral
    /// polynomials are exactly the multiples of `s` times the basis
    /// monomial, with the sign making the lexicographically first
    /// squarefree nested monomial of top degree positive.
    pub fn top_scale(&self) -> &BigRational {
        self.top_scale.get_or_init(|| {
            let top = self.top_degree();
            let values: Vec<BigRational> = self
                .enumerate(top)
                .iter()
                .map(|m| self.reduce_monomial(top, m).coords.into_iter().next().unwrap_or_else(BigRational::zero))
                .collect();
            let mut scale = rational_gcd(&values);
            let first = self
                .enumerate(top)
                .iter()
                .position(Monomial::is_squarefree)
                .map(|i| values[i].clone())
                .unwrap_or_else(BigRational::one);
            if first.is_negative() {
                scale = -scale;
            }
            scale
        })
    }

    /// Integral degree of a top-degree class.
    pub fn integral_degree(&self, a: &ChowClass) -> Result<BigRational, ChowError> {
        if a.degree != self.top_degree() {
            return Err(ChowError::DegreeOutOfRange { degree: a.degree, max: self.top_degree() });
        }
        let x = a.coords.first().cloned().unwrap_or_else(BigRational::zero);
        Ok(x / self.top_scale())
    }

    /// Integral degree of a monomial of top degree.
    pub fn monomial_degree(&self, m: &Monomial) -> Result<BigRational, ChowError> {
        self.check_degree(m.degree())?;
        let c = self.reduce_monomial(m.degree(), m);
        self.integral_degree(&c)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.degree() == 0 {
            return "1".to_string();
        }
        let gens = self.generators();
        m.powers()
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    format!("D^{}", gens[g as usize])
                } else {
                    format!("(D^{})^{e}", gens[g as usize])
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn format_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let body = self.format_monomial(m);
            if a.is_one() {
                out.push_str(&body);
            } else if m.degree() == 0 {
                out.push_str(&a.to_string());
            } else {
                out.push_str(&format!("{a}*{body}"));
            }
        }
        out
    }

    pub fn format_class(&self, a: &ChowClass) -> String {
        self.format_polynomial(&self.lift(a))
    }

    pub fn class_to_json(&self, a: &ChowClass) -> Value {
        let basis = self.basis(a.degree).unwrap_or_default();
        let gens = self.generators();
        let basis: Vec<Value> =
            basis.iter().map(|m| json!(m.factors().iter().map(|&g| gens[g as usize]).collect::<Vec<_>>())).collect();
        json!({
            "degree": a.degree,
            "basis": basis,
            "coords": a.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Nonnegative generator of the subgroup of `Q` spanned by `values`.
fn rational_gcd(values: &[BigRational]) -> BigRational {
    let lcm = values.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let g = values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&(x.numer() * (&lcm / x.denom()))));
    BigRational::new(g, lcm)
}
