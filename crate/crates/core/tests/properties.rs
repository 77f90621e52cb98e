use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use hassett_chow::chow::{heavy_light_presentation, ChowClass, ChowRing, Monomial, Polynomial};
use hassett_chow::fan::{
    build_fan, build_fan_with, compare_supports, is_nested, projection_check, unimodularity_check,
};
use hassett_chow::graph_matroid::{
    all_flats_by_closure, closure, flat_edges, matroid_rank, one_connected_flats, reduced_weight_graph, Edge, EdgeSet,
    FlatLabel, ReducedWeightGraph,
};
use hassett_chow::linalg::ExactMatrix;
use hassett_chow::weights::{canonical_form, classify, parse_weights, HeavyLightProfile, WeightVector};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn profile_strategy(max_n: usize) -> impl Strategy<Value = HeavyLightProfile> {
    (4..=max_n).prop_flat_map(|n| (2..=n).prop_map(move |m| HeavyLightProfile::canonical(m, n).unwrap()))
}

/// A heavy/light vector with arbitrary rational entries, shuffled. Returns
/// the weights and the positions (1-based) that must come out heavy.
fn weights_strategy() -> impl Strategy<Value = (WeightVector, Vec<usize>)> {
    (4usize..=8)
        .prop_flat_map(|n| (Just(n), 2..=n))
        .prop_flat_map(|(n, m)| {
            let heavy = prop::collection::vec(41i64..=100, m);
            let light = prop::collection::vec((n as i64 + 1)..=40, n - m);
            let order = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (Just(n), heavy, light, order)
        })
        .prop_map(|(n, heavy, light, order)| {
            let mut tagged: Vec<(BigRational, bool)> = heavy.iter().map(|&c| (q(c - 1, c), true)).collect();
            // a single light point is heavy: every partner is heavy
            let lone = light.len() == 1;
            tagged.extend(light.iter().map(|&c| (q(1, c), lone)));
            let mut entries = vec![BigRational::zero(); n];
            let mut heavy_positions = Vec::new();
            for (slot, (w, h)) in order.iter().zip(tagged) {
                entries[*slot] = w;
                if h {
                    heavy_positions.push(slot + 1);
                }
            }
            heavy_positions.sort_unstable();
            (WeightVector::new(entries).unwrap(), heavy_positions)
        })
}

fn edge_subset(g: &ReducedWeightGraph, mask: u64) -> EdgeSet {
    g.edges().iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| *e).collect()
}

/// Spanning-forest rank, computed independently with a naive union-find.
fn forest_rank(e: &EdgeSet) -> usize {
    let mut parent: Vec<usize> = (0..64).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut rank = 0;
    for x in e {
        let (a, b) = (find(&mut parent, x.0), find(&mut parent, x.1));
        if a != b {
            parent[a] = b;
            rank += 1;
        }
    }
    rank
}

fn ring(p: &HeavyLightProfile) -> ChowRing {
    ChowRing::new(heavy_light_presentation(p).unwrap())
}

fn random_class(ring: &ChowRing, degree: usize, seed: &[i64]) -> ChowClass {
    let basis = ring.basis(degree).unwrap();
    let mut class = ChowClass::zero_in(ring, degree);
    for (i, m) in basis.iter().enumerate() {
        let term = Polynomial::monomial(m.clone(), BigRational::from_integer(seed[i % seed.len()].into()));
        if !term.is_zero() {
            class = class.add(&ring.reduce(&term).unwrap());
        }
    }
    class
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn classify_finds_heavy_points_in_any_order((w, heavy) in weights_strategy()) {
        let p = classify(&w).unwrap();
        prop_assert_eq!(p.heavy(), &heavy[..]);
        let mut all: Vec<usize> = p.heavy().iter().chain(p.light()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=w.len()).collect::<Vec<_>>());
    }

    #[test]
    fn canonical_form_round_trips((w, _) in weights_strategy()) {
        let p = classify(&w).unwrap();
        let c = canonical_form(&p).unwrap();
        let back = classify(&c).unwrap();
        prop_assert_eq!(back.m(), p.m());
        prop_assert_eq!(back.n(), p.n());
        prop_assert!(back.is_canonical_order());
        if let Some(eps) = p.epsilon() {
            prop_assert!(eps * BigRational::from_integer(p.light().len().into()) < BigRational::one());
        }
    }

    #[test]
    fn weights_print_and_parse((w, _) in weights_strategy()) {
        prop_assert_eq!(parse_weights(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn rank_is_forest_rank_and_submodular(p in profile_strategy(7), a in any::<u64>(), b in any::<u64>()) {
        let g = reduced_weight_graph(&p).unwrap();
        let (a, b) = (edge_subset(&g, a), edge_subset(&g, b));
        let r = |e: &EdgeSet| matroid_rank(&g, e).unwrap();
        prop_assert_eq!(r(&a), forest_rank(&a));
        prop_assert!(r(&a) <= a.len());
        let union: EdgeSet = a.union(&b).copied().collect();
        let meet: EdgeSet = a.intersection(&b).copied().collect();
        prop_assert!(r(&union) + r(&meet) <= r(&a) + r(&b));
    }

    #[test]
    fn closure_axioms(p in profile_strategy(7), a in any::<u64>(), b in any::<u64>()) {
        let g = reduced_weight_graph(&p).unwrap();
        let a = edge_subset(&g, a);
        let b: EdgeSet = a.union(&edge_subset(&g, b)).copied().collect();
        let ca = closure(&g, &a).unwrap();
        prop_assert!(a.is_subset(&ca));
        prop_assert!(ca.is_subset(&closure(&g, &b).unwrap()));
        prop_assert_eq!(closure(&g, &ca).unwrap(), ca.clone());
        prop_assert_eq!(forest_rank(&ca), forest_rank(&a));
        for e in g.edges() {
            if !ca.contains(e) {
                let mut bigger = ca.clone();
                bigger.insert(*e);
                prop_assert_eq!(forest_rank(&bigger), forest_rank(&a) + 1);
            }
        }
    }

    #[test]
    fn other_eliminated_pair_gives_the_same_fan(p in profile_strategy(6), pick in any::<prop::sample::Index>()) {
        let g = reduced_weight_graph(&p).unwrap();
        let e = *pick.get(g.edges());
        let f = build_fan_with(&p, e).unwrap();
        let d = build_fan(&p).unwrap();
        prop_assert_eq!(f.f_vector(), d.f_vector());
        prop_assert!(unimodularity_check(&f));
        prop_assert_eq!(f.labels(), d.labels());
    }

    #[test]
    fn ring_laws_on_random_classes(p in profile_strategy(6), seed in prop::collection::vec(-3i64..=3, 1..8), d in 0usize..=3) {
        let r = ring(&p);
        let top = r.top_degree();
        let (da, db) = (d.min(top), (top - d.min(top)).min(1));
        let dc = top - da - db;
        let a = random_class(&r, da, &seed);
        let b = random_class(&r, db, &seed[1..].iter().chain(&seed[..1]).copied().collect::<Vec<_>>());
        let c = random_class(&r, dc, &[1, -2, 1]);
        prop_assert_eq!(r.multiply(&a, &b).unwrap(), r.multiply(&b, &a).unwrap());
        let left = r.multiply(&r.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = r.multiply(&a, &r.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let a2 = random_class(&r, da, &[2, 0, -1]);
        let lhs = r.multiply(&a.add(&a2), &b).unwrap();
        let rhs = r.multiply(&a, &b).unwrap().add(&r.multiply(&a2, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(r.multiply(&r.unit(), &a).unwrap(), a);
    }

    #[test]
    fn ideal_elements_reduce_to_zero(p in profile_strategy(6), g in any::<prop::sample::Index>(), rel in any::<prop::sample::Index>()) {
        let r = ring(&p);
        let pres = r.presentation();
        let rel = rel.get(pres.linear_relations());
        let mut poly = Polynomial::zero();
        for (i, &c) in rel.iter().enumerate() {
            if c != 0 {
                poly.add_term(Monomial::generator(i), BigRational::from_integer(c.into()));
            }
        }
        prop_assert!(r.is_zero(&poly).unwrap());
        if r.top_degree() >= 2 {
            let times = Polynomial::monomial(Monomial::generator(g.index(pres.generators().len())), BigRational::one());
            prop_assert!(r.is_zero(&poly.mul(&times)).unwrap());
        }
    }

    #[test]
    fn rank_equals_transpose_rank(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..7)) {
        let m = ExactMatrix::from_i64_rows(&rows);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_ignores_row_scaling_and_order(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..7),
        scale in prop::collection::vec((1i64..=5, 1i64..=5, any::<bool>()), 7),
        perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let m = ExactMatrix::from_i64_rows(&rows);
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < rows.len()).collect();
        let scaled: Vec<Vec<BigRational>> = order
            .iter()
            .map(|&i| {
                let (p, d, neg) = scale[i];
                let s = if neg { -q(p, d) } else { q(p, d) };
                rows[i].iter().map(|&x| BigRational::from_integer(x.into()) * &s).collect()
            })
            .collect();
        prop_assert_eq!(ExactMatrix::from_rows(&scaled).rank(), m.rank());
    }

    #[test]
    fn smith_product_is_determinant(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 4)) {
        let det = leibniz(&rows);
        prop_assume!(det != 0);
        let m = ExactMatrix::from_i64_rows(&rows);
        let factors = m.smith_normal_form().unwrap();
        prop_assert_eq!(factors.len(), 4);
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let product: BigInt = factors.iter().product();
        prop_assert_eq!(product.abs(), BigInt::from(det.abs()));
        prop_assert_eq!(m.determinant(), BigRational::from_integer(det.into()));
    }
}

fn leibniz(rows: &[Vec<i64>]) -> i64 {
    let n = rows.len();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term: i64 = (0..n).map(|i| rows[i][p[i]]).product();
        total += if inversions % 2 == 0 { term } else { -term };
    });
    total
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

fn profiles_up_to(n: usize) -> Vec<HeavyLightProfile> {
    (4..=n).flat_map(HeavyLightProfile::all_with_points).collect()
}

#[test]
fn flats_match_closure_enumeration() {
    for p in profiles_up_to(6) {
        let g = reduced_weight_graph(&p).unwrap();
        let labels: BTreeSet<_> = one_connected_flats(&g).iter().map(|l| l.set()).collect();
        let from_closure: BTreeSet<_> = all_flats_by_closure(&g)
            .into_iter()
            .filter(|f| f.is_connected() && f.rank() >= 1 && f.components()[0] != g.vertices())
            .map(|f| f.components()[0])
            .collect();
        assert_eq!(labels, from_closure, "{}", p.describe());
        for l in one_connected_flats(&g) {
            let e = flat_edges(&g, l);
            assert_eq!(matroid_rank(&g, &e).unwrap(), l.len() - 1);
            assert_eq!(closure(&g, &e).unwrap(), e);
            assert_eq!(forest_rank(&e), l.rank());
        }
    }
}

#[test]
fn faces_of_cones_are_cones() {
    for p in profiles_up_to(6) {
        let f = build_fan(&p).unwrap();
        assert_eq!(f.max_dim(), p.n() - 3);
        for d in 1..=f.max_dim() {
            let lower: BTreeSet<_> = f.cones(d - 1).iter().cloned().collect();
            for c in f.cones(d) {
                let labels: Vec<FlatLabel> = f.cone_labels(c);
                assert!(is_nested(&labels));
                for skip in 0..c.dim() {
                    let mut face = c.clone();
                    face.0.remove(skip);
                    assert!(lower.contains(&face), "{} {c:?}", p.describe());
                }
            }
        }
        assert_eq!(f.f_vector()[0], one_connected_flats(f.graph()).len());
        assert!(unimodularity_check(&f));
    }
}

#[test]
fn subdivisions_share_support() {
    for p in profiles_up_to(6) {
        let cmp = compare_supports(&p, 200, 7).unwrap();
        assert!(cmp.disagreements.is_empty(), "{}: {:?}", p.describe(), cmp.disagreements);
        assert!(cmp.inside > 0);
    }
}

#[test]
fn projection_to_every_profile() {
    for p in profiles_up_to(6) {
        let rep = projection_check(&p).unwrap();
        assert!(rep.holds(), "{}: {rep:?}", p.describe());
    }
}

#[test]
fn duality_pairing_and_torsion() {
    for p in profiles_up_to(6) {
        let r = ring(&p);
        let h = r.hilbert_function();
        let top = r.top_degree();
        assert_eq!(h.len(), top + 1);
        assert_eq!((h[0], h[top]), (1, 1));
        for k in 0..=top {
            assert_eq!(h[k], h[top - k], "{}", p.describe());
            assert_eq!(r.pairing_rank(k).unwrap(), h[k].min(h[top - k]));
            assert!(r.torsion_check(k).unwrap(), "{} degree {k}", p.describe());
        }
        let pres = r.presentation();
        let rows: Vec<Vec<i64>> = pres.linear_relations().to_vec();
        let p_count = r.generators().iter().filter(|g| g.len() == 2).count();
        assert_eq!(ExactMatrix::from_i64_rows(&rows).rank(), p_count - 1);
        assert_eq!(h[1], r.generators().len() - (p_count - 1));
    }
}

#[test]
fn edge_type_orders_endpoints() {
    assert_eq!(Edge::new(5, 2), Edge(2, 5));
}
