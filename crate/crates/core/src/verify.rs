//! The invariant suite behind `hassett verify`.
//!
//! Each check is exact; pseudo-random inputs come from fixed seeds, so a
//! report is identical from run to run.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chow::{
    all_pair_relations, dual_graph, heavy_light_presentation, keel_iso_check, keel_presentation, pullback_into,
    ChowClass, ChowRing, DualGraph, Monomial, Polynomial,
};
use crate::fan::{
    build_fan, compare_supports, projection_check, simpliciality_check, unimodularity_check, Cone, Fan,
};
use crate::graph_matroid::{
    all_flats_by_closure, closure, flat_edges, matroid_rank, one_connected_flats, reduced_weight_graph, EdgeSet,
    ReducedWeightGraph,
};
use crate::linalg::ExactMatrix;
use crate::weights::{canonical_form, classify, HeavyLightProfile};
use crate::Error;

const SEED: u64 = 0x5eed_2024;

/// How far the suite goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Sweeps `n <= 5`.
    Fast,
    /// Sweeps `n <= 7`.
    Full,
}

impl Level {
    pub fn max_points(self) -> usize {
        match self {
            Level::Fast => 5,
            Level::Full => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub instance: String,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| json!({
                "instance": c.instance,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<22} {:<28} {}", c.instance, c.name, c.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

struct Recorder<'a> {
    instance: String,
    report: &'a mut Report,
}

impl Recorder<'_> {
    fn check(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.report.checks.push(Check { instance: self.instance.clone(), name, passed, detail: detail.into() });
    }
}

/// Every canonical profile with `4 <= n <= level.max_points()`.
pub fn verify_sweep(level: Level) -> Result<Report, Error> {
    let mut report = Report::default();
    for n in 4..=level.max_points() {
        for p in HeavyLightProfile::all_with_points(n) {
            verify_into(&p, level, &mut report)?;
        }
    }
    Ok(report)
}

/// All checks that apply to one profile.
pub fn verify_instance(p: &HeavyLightProfile, level: Level) -> Result<Report, Error> {
    let mut report = Report::default();
    verify_into(p, level, &mut report)?;
    Ok(report)
}

fn verify_into(p: &HeavyLightProfile, level: Level, report: &mut Report) -> Result<(), Error> {
    let instance = canonical_form(p)?.to_string();
    let mut rec = Recorder { instance, report };
    let n = p.n();
    let exhaustive = n <= level.max_points();

    weights_checks(p, &mut rec)?;
    let g = reduced_weight_graph(p)?;
    matroid_checks(&g, &mut rec)?;

    let fan = build_fan(p)?;
    fan_checks(p, &fan, exhaustive, &mut rec)?;

    let pres = heavy_light_presentation(p)?;
    let ring = ChowRing::new(pres);
    presentation_checks(p, &fan, &ring, &mut rec)?;
    ring_checks(&ring, exhaustive, &mut rec)?;
    pullback_checks(p, &ring, &mut rec)?;
    Ok(())
}

fn weights_checks(p: &HeavyLightProfile, rec: &mut Recorder) -> Result<(), Error> {
    let w = canonical_form(p)?;
    let back = classify(&w)?;
    rec.check(
        "weights.round_trip",
        back.m() == p.m() && back.n() == p.n() && back.is_canonical_order(),
        format!("m={} n={}", back.m(), back.n()),
    );
    let light_total: BigRational = w.entries()[p.m()..].iter().cloned().sum();
    rec.check("weights.light_total", light_total < BigRational::one(), format!("light sum {light_total}"));
    Ok(())
}

fn random_subset(rng: &mut ChaCha8Rng, g: &ReducedWeightGraph) -> EdgeSet {
    g.edges().iter().copied().filter(|_| rng.gen_bool(0.4)).collect()
}

fn matroid_checks(g: &ReducedWeightGraph, rec: &mut Recorder) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    for _ in 0..60 {
        let a = random_subset(&mut rng, g);
        let b = random_subset(&mut rng, g);
        let union: EdgeSet = a.union(&b).copied().collect();
        let inter: EdgeSet = a.intersection(&b).copied().collect();
        let ra = matroid_rank(g, &a)?;
        let rb = matroid_rank(g, &b)?;
        let cl = closure(g, &a)?;
        ok &= ra <= a.len();
        ok &= matroid_rank(g, &union)? >= ra.max(rb);
        ok &= matroid_rank(g, &union)? + matroid_rank(g, &inter)? <= ra + rb;
        ok &= cl.is_superset(&a) && closure(g, &cl)? == cl && matroid_rank(g, &cl)? == ra;
    }
    rec.check("matroid.axioms", ok, "rank bounded, monotone, submodular; closure extensive, idempotent");

    let labels = one_connected_flats(g);
    let labels_ok = labels.iter().all(|&l| {
        let e = flat_edges(g, l);
        closure(g, &e).is_ok_and(|c| c == e) && matroid_rank(g, &e).is_ok_and(|r| r == l.rank())
    });
    rec.check("matroid.labels_are_flats", labels_ok, format!("{} labels", labels.len()));

    if g.edges().len() <= 16 {
        let flats = all_flats_by_closure(g);
        let connected: Vec<_> = flats
            .iter()
            .filter(|f| f.is_connected() && f.components()[0] != g.vertices())
            .map(|f| f.components()[0])
            .collect();
        let mut expected: Vec<_> = labels.iter().map(|l| l.set()).collect();
        expected.sort();
        let mut got = connected.clone();
        got.sort();
        rec.check(
            "matroid.flats_by_closure",
            got == expected,
            format!("{} flats, {} connected proper", flats.len(), connected.len()),
        );
    }
    Ok(())
}

fn fan_checks(p: &HeavyLightProfile, fan: &Fan, exhaustive: bool, rec: &mut Recorder) -> Result<(), Error> {
    let n = p.n();
    let f = fan.f_vector();
    rec.check("fan.dimension", fan.max_dim() == n - 3, format!("f-vector {f:?}"));
    rec.check("fan.rays_are_labels", f[0] == fan.labels().len(), format!("{} rays", f[0]));
    let faces_ok = fan.all_cones().all(|c| {
        (0..c.dim()).all(|skip| {
            let face = Cone(c.0.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect());
            face.dim() == 0 || fan.cones(face.dim()).binary_search(&face).is_ok()
        })
    });
    rec.check("fan.closed_under_faces", faces_ok, "");
    let pure = (1..fan.max_dim()).all(|d| {
        fan.cones(d).iter().all(|c| fan.cones(d + 1).iter().any(|u| c.0.iter().all(|i| u.0.contains(i))))
    });
    rec.check("fan.pure", pure, "");
    rec.check("fan.simplicial", simpliciality_check(fan), "");
    rec.check("fan.unimodular", unimodularity_check(fan), "");
    let primitive = fan.rays().iter().all(|r| r.0.iter().fold(0i64, |a, &x| num_integer::gcd(a, x)) == 1);
    rec.check("fan.primitive_rays", primitive, "");

    if n <= 7 {
        let pr = projection_check(p)?;
        rec.check(
            "fan.projection",
            pr.holds(),
            format!("{} crushed, {} cones checked", pr.crushed.len(), pr.cones_checked),
        );
    }
    if exhaustive && n <= 6 {
        let cmp = compare_supports(p, 200, SEED)?;
        rec.check(
            "fan.support_equality",
            cmp.disagreements.is_empty(),
            format!("{} points, {} inside", cmp.points, cmp.inside),
        );
    }
    Ok(())
}

fn presentation_checks(p: &HeavyLightProfile, fan: &Fan, ring: &ChowRing, rec: &mut Recorder) -> Result<(), Error> {
    let pres = ring.presentation();
    rec.check("presentation.generators", pres.generators() == fan.labels(), format!("{}", pres.generators().len()));
    let count = pres.generators().len();
    let mut coherent = true;
    let mut sr = pres.sr_pairs().iter().copied().peekable();
    for a in 0..count {
        for b in a + 1..count {
            let is_sr = sr.peek() == Some(&(a, b));
            if is_sr {
                sr.next();
            }
            coherent &= is_sr != fan.spans_cone(a, b);
        }
    }
    rec.check("presentation.sr_is_non_cones", coherent, format!("{} pairs", pres.sr_pairs().len()));

    let pairs = fan.coordinates().pairs().len();
    let basis_rank = ExactMatrix::from_i64_rows(pres.linear_relations()).rank();
    let full = all_pair_relations(p)?;
    let full_rank = ExactMatrix::from_i64_rows(&full).rank();
    let stacked: Vec<Vec<i64>> = pres.linear_relations().iter().chain(&full).cloned().collect();
    let stacked_rank = ExactMatrix::from_i64_rows(&stacked).rank();
    rec.check(
        "presentation.relation_rank",
        basis_rank == pairs - 1 && full_rank == basis_rank && stacked_rank == basis_rank,
        format!("rank {basis_rank}, P-1 = {}", pairs - 1),
    );
    let entries_ok = pres.linear_relations().iter().all(|r| r.iter().all(|c| (-1..=1).contains(c)));
    rec.check("presentation.relation_entries", entries_ok, "");
    Ok(())
}

fn ring_checks(ring: &ChowRing, exhaustive: bool, rec: &mut Recorder) -> Result<(), Error> {
    let top = ring.top_degree();
    let h = ring.hilbert_function();
    let symmetric = (0..=top).all(|k| h[k] == h[top - k]) && h[0] == 1 && h[top] == 1;
    rec.check("ring.hilbert_symmetry", symmetric, format!("{h:?}"));
    rec.check("ring.vanishes_above_top", ring.rank_in_degree(top + 1) == 0, "");
    let pairs = ring.presentation().linear_relations().len();
    rec.check(
        "ring.h1",
        h.get(1).is_some_and(|&h1| h1 == ring.generators().len() - pairs),
        format!("{} generators, {} relations", ring.generators().len(), pairs),
    );

    let mut pairing_ok = true;
    for k in 0..=top {
        pairing_ok &= ring.pairing_rank(k)? == h[k].min(h[top - k]);
    }
    rec.check("ring.pairing_full_rank", pairing_ok, "");

    if ring.presentation().n() <= 7 {
        let mut free = true;
        for k in 0..=top {
            free &= ring.torsion_check(k)?;
        }
        rec.check("ring.torsion_free", free, "");
    }

    if exhaustive {
        let scale = ring.top_scale().clone();
        let cones = ring.nested_monomials(top)?.into_iter().filter(Monomial::is_squarefree);
        let mut count = 0;
        let mut ok = true;
        for m in cones {
            count += 1;
            ok &= ring.monomial_degree(&m)? == BigRational::one();
        }
        rec.check("ring.point_class", ok, format!("{count} maximal cones, scale {scale}"));
    }

    ring_law_checks(ring, rec)?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut ideal_ok = true;
    for _ in 0..40 {
        let k = rng.gen_range(1..=top);
        let lower = ring.nested_monomials(k - 1)?;
        let mu = &lower[rng.gen_range(0..lower.len())];
        let rels = ring.presentation().linear_relations();
        let rel = &rels[rng.gen_range(0..rels.len())];
        let mut p = Polynomial::zero();
        for (g, &c) in rel.iter().enumerate() {
            if c != 0 {
                p.add_term(mu.times(&Monomial::generator(g)), BigRational::from_integer(c.into()));
            }
        }
        ideal_ok &= ring.reduce(&p)?.is_zero();
    }
    rec.check("ring.ideal_reduces_to_zero", ideal_ok, "");
    Ok(())
}

fn random_class(ring: &ChowRing, rng: &mut ChaCha8Rng, k: usize) -> Result<ChowClass, Error> {
    let mut p = Polynomial::zero();
    let basis = ring.basis(k)?;
    for m in basis {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            p.add_term(m, BigRational::from_integer(c.into()));
        }
    }
    if p.is_zero() {
        return Ok(ChowClass::zero_in(ring, k));
    }
    Ok(ring.reduce(&p)?)
}

fn ring_law_checks(ring: &ChowRing, rec: &mut Recorder) -> Result<(), Error> {
    let top = ring.top_degree();
    let gens: Vec<ChowClass> = (0..ring.generators().len()).map(|g| ring.generator_class(g)).collect();
    let unit = ring.unit();

    let mut commutative = true;
    if top >= 2 {
        for a in &gens {
            for b in &gens {
                commutative &= ring.multiply(a, b)? == ring.multiply(b, a)?;
            }
        }
    }
    let mut unital = true;
    for a in &gens {
        unital &= ring.multiply(a, &unit)? == *a;
    }
    rec.check("ring.commutative_unital", commutative && unital, "");

    // Associativity needs three factors that fit under the top degree; for
    // top degree below 3 one factor is a degree-0 or the triple is skipped.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut associative = true;
    let mut triples = 0;
    if top >= 3 && gens.len() <= 12 {
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    triples += 1;
                    let left = ring.multiply(&ring.multiply(a, b)?, c)?;
                    let right = ring.multiply(a, &ring.multiply(b, c)?)?;
                    associative &= left == right;
                }
            }
        }
    } else {
        for _ in 0..60 {
            let i = rng.gen_range(0..=top);
            let j = rng.gen_range(0..=top - i);
            let k = rng.gen_range(0..=top - i - j);
            let (a, b, c) = (random_class(ring, &mut rng, i)?, random_class(ring, &mut rng, j)?, random_class(ring, &mut rng, k)?);
            triples += 1;
            let left = ring.multiply(&ring.multiply(&a, &b)?, &c)?;
            let right = ring.multiply(&a, &ring.multiply(&b, &c)?)?;
            associative &= left == right;
        }
    }
    rec.check("ring.associative", associative, format!("{triples} triples"));

    let mut distributive = true;
    for _ in 0..40 {
        let i = rng.gen_range(0..=top);
        let j = rng.gen_range(0..=top - i);
        let a = random_class(ring, &mut rng, i)?;
        let b = random_class(ring, &mut rng, j)?;
        let c = random_class(ring, &mut rng, j)?;
        let left = ring.multiply(&a, &b.add(&c))?;
        let right = ring.multiply(&a, &b)?.add(&ring.multiply(&a, &c)?);
        distributive &= left == right;
    }
    rec.check("ring.distributive", distributive, "40 samples");
    Ok(())
}

fn pullback_checks(p: &HeavyLightProfile, ring: &ChowRing, rec: &mut Recorder) -> Result<(), Error> {
    let n = p.n();
    let w = canonical_form(p)?;
    let graphs: Vec<DualGraph> = ring.generators().iter().map(|&l| dual_graph(l, n)).collect();
    let stable = graphs.iter().all(|d| d.is_stable(&w));
    let symmetric = graphs
        .iter()
        .all(|d| DualGraph::from_split(d.legs_b(), n) == *d && d.legs_a().union(d.legs_b()).len() == n);
    rec.check("dual_graph.stable", stable && symmetric, format!("{} divisors", graphs.len()));

    if n > 7 {
        return Ok(());
    }
    let keel = ChowRing::new(keel_presentation(n)?.to_presentation());
    match pullback_into(ring, &keel) {
        Ok(r) => {
            rec.check("pullback.relations", true, format!("{} relations", r.relations_checked));
            rec.check(
                "pullback.injective",
                r.is_injective(),
                format!("image ranks {:?}, subring ranks {:?}", r.image_ranks, r.subring_ranks),
            );
            let crushed_ok = r.missed.iter().all(|l| l.set().iter().all(|i| i > p.m()));
            rec.check("pullback.missed_all_light", crushed_ok, format!("{} missed", r.missed.len()));
        }
        Err(e) => rec.check("pullback.relations", false, e.to_string()),
    }
    if p.m() == n && n <= 7 {
        let iso = keel_iso_check(n)?;
        rec.check("keel.iso", iso.holds(), format!("{:?} vs {:?}", iso.keel_hilbert, iso.flats_hilbert));
    }
    Ok(())
}
