use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::graph_matroid::FlatLabel;
use crate::linalg::ExactMatrix;
use crate::weights::HeavyLightProfile;

use super::ring::{ChowRing, Monomial, Polynomial};
use super::{heavy_light_presentation, keel_presentation, ChowError};

/// The generator map `D^S ↦ D^S` from one ring into another, with the
/// checks that make it an injective graded ring map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    pub generator_map: Vec<(FlatLabel, FlatLabel)>,
    /// Target generators outside the image.
    pub missed: Vec<FlatLabel>,
    pub relations_checked: usize,
    pub source_hilbert: Vec<usize>,
    /// Rank of the images of each degree's basis.
    pub image_ranks: Vec<usize>,
    /// Rank of the images of all nested monomials of each degree.
    pub subring_ranks: Vec<usize>,
}

impl PullbackReport {
    pub fn is_injective(&self) -> bool {
        self.image_ranks == self.source_hilbert && self.subring_ranks == self.source_hilbert
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generator_map": self.generator_map.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "missed": self.missed,
            "relations_checked": self.relations_checked,
            "source_hilbert": self.source_hilbert,
            "image_ranks": self.image_ranks,
            "subring_ranks": self.subring_ranks,
            "injective": self.is_injective(),
        })
    }
}

fn generator_map(source: &ChowRing, target: &ChowRing) -> Result<Vec<u32>, ChowError> {
    source
        .generators()
        .iter()
        .map(|g| {
            target
                .generators()
                .iter()
                .position(|t| t.set() == g.set())
                .map(|i| i as u32)
                .ok_or_else(|| ChowError::RelationNotPreserved(format!("D^{g} has no image")))
        })
        .collect()
}

fn image(map: &[u32], m: &Monomial) -> Monomial {
    Monomial::new(m.factors().iter().map(|&g| map[g as usize]).collect())
}

/// First defining relation of `source` whose image is nonzero in `target`.
fn first_failure(source: &ChowRing, target: &ChowRing, map: &[u32]) -> Result<(Option<String>, usize), ChowError> {
    let pres = source.presentation();
    let mut checked = 0;
    for &(a, b) in pres.sr_pairs() {
        checked += 1;
        let m = Monomial::new(vec![map[a], map[b]]);
        if !target.is_zero(&Polynomial::monomial(m, BigRational::one()))? {
            let (s, t) = (pres.generators()[a], pres.generators()[b]);
            return Ok((Some(format!("D^{s}*D^{t}")), checked));
        }
    }
    for rel in pres.linear_relations() {
        checked += 1;
        let mut p = Polynomial::zero();
        for (g, &c) in rel.iter().enumerate() {
            if c != 0 {
                p.add_term(Monomial::generator(map[g] as usize), BigRational::from_integer(c.into()));
            }
        }
        if !target.is_zero(&p)? {
            return Ok((Some(pres.format_relation(rel)), checked));
        }
    }
    Ok((None, checked))
}

fn rank_of_images<'a>(target: &ChowRing, k: usize, monomials: impl Iterator<Item = &'a Monomial>, map: &[u32]) -> usize {
    let rows: Vec<Vec<BigRational>> = monomials
        .map(|m| {
            let p = Polynomial::monomial(image(map, m), BigRational::one());
            target.reduce_unchecked(k, &p).coords().to_vec()
        })
        .collect();
    let width = target.rank_in_degree(k);
    let mut mat = ExactMatrix::zeros(rows.len(), width);
    for (i, r) in rows.into_iter().enumerate() {
        for (j, x) in r.into_iter().enumerate() {
            mat.set(i, j, x);
        }
    }
    mat.rank()
}

/// Checks that sending each generator of `source` to the generator of
/// `target` with the same label defines an injective graded ring map.
///
/// Fails with `RelationNotPreserved` when some defining relation of the
/// source does not vanish in the target.
pub fn pullback_into(source: &ChowRing, target: &ChowRing) -> Result<PullbackReport, ChowError> {
    let map = generator_map(source, target)?;
    let (failure, relations_checked) = first_failure(source, target, &map)?;
    if let Some(f) = failure {
        return Err(ChowError::RelationNotPreserved(f));
    }
    let mut image_ranks = Vec::new();
    let mut subring_ranks = Vec::new();
    for k in 0..=source.top_degree() {
        let basis = source.basis(k)?;
        image_ranks.push(rank_of_images(target, k, basis.iter(), &map));
        let all = source.nested_monomials(k)?;
        subring_ranks.push(rank_of_images(target, k, all.iter(), &map));
    }
    let hit: Vec<bool> = {
        let mut v = vec![false; target.generators().len()];
        for &g in &map {
            v[g as usize] = true;
        }
        v
    };
    Ok(PullbackReport {
        generator_map: source.generators().iter().zip(&map).map(|(&a, &b)| (a, target.generators()[b as usize])).collect(),
        missed: target.generators().iter().zip(&hit).filter(|(_, &h)| !h).map(|(&g, _)| g).collect(),
        relations_checked,
        source_hilbert: source.hilbert_function(),
        image_ranks,
        subring_ranks,
    })
}

/// The pullback from the heavy/light space to `M̄_{0,n}`.
pub fn pullback(p: &HeavyLightProfile) -> Result<PullbackReport, ChowError> {
    let source = ChowRing::new(heavy_light_presentation(p)?);
    let target = ChowRing::new(keel_presentation(p.n())?.to_presentation());
    pullback_into(&source, &target)
}

/// Comparison of the two presentations of `M̄_{0,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub n: usize,
    pub keel_hilbert: Vec<usize>,
    pub flats_hilbert: Vec<usize>,
    /// Every relation of the flats presentation vanishes in Keel's ring.
    pub forward: bool,
    /// Every relation of Keel's presentation vanishes in the flats ring.
    pub backward: bool,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.keel_hilbert == self.flats_hilbert && self.forward && self.backward
    }
}

/// Builds Keel's ring and the flats ring for `(1^n)` independently and
/// compares them through the identity on labels.
pub fn keel_iso_check(n: usize) -> Result<IsoReport, ChowError> {
    let keel = ChowRing::new(keel_presentation(n)?.to_presentation());
    let flats = ChowRing::new(heavy_light_presentation(&HeavyLightProfile::canonical(n, n)?)?);
    let direction = |a: &ChowRing, b: &ChowRing| -> Result<bool, ChowError> {
        match generator_map(a, b) {
            Ok(map) => Ok(first_failure(a, b, &map)?.0.is_none()),
            Err(_) => Ok(false),
        }
    };
    Ok(IsoReport {
        n,
        keel_hilbert: keel.hilbert_function(),
        flats_hilbert: flats.hilbert_function(),
        forward: direction(&flats, &keel)?,
        backward: direction(&keel, &flats)?,
    })
}
