use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::fan::nested_pair;
use crate::graph_matroid::{one_connected_flats, reduced_weight_graph, Edge, FlatLabel, ReducedWeightGraph};
use crate::weights::{canonical_form, HeavyLightProfile};

use super::ChowError;

/// A presentation of a graded ring generated in degree 1: the polynomial
/// ring on divisor classes `D^S`, modulo the squarefree quadratic monomials
/// in `sr_pairs` and the linear forms in `linear_relations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub(crate) weights: String,
    pub(crate) n: usize,
    pub(crate) generators: Vec<FlatLabel>,
    pub(crate) sr_pairs: Vec<(usize, usize)>,
    pub(crate) linear_relations: Vec<Vec<i64>>,
}

impl Presentation {
    /// Canonical weight string, e.g. `1,1,1/4,1/4,1/4`.
    pub fn weights(&self) -> &str {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[FlatLabel] {
        &self.generators
    }

    pub fn generator_index(&self, label: FlatLabel) -> Option<usize> {
        self.generators.iter().position(|g| *g == label)
    }

    /// Index pairs `(a, b)`, `a < b`, with `D^a D^b = 0`.
    pub fn sr_pairs(&self) -> &[(usize, usize)] {
        &self.sr_pairs
    }

    /// Integer vectors over the generators, each mapping to 0 in degree 1.
    pub fn linear_relations(&self) -> &[Vec<i64>] {
        &self.linear_relations
    }

    /// Top degree `n - 3`.
    pub fn grading_dimension(&self) -> usize {
        self.n - 3
    }

    pub fn to_json(&self, hilbert: Option<&[usize]>) -> Value {
        let sr: Vec<Value> =
            self.sr_pairs.iter().map(|&(a, b)| json!([self.generators[a], self.generators[b]])).collect();
        let rels: Vec<Value> = self
            .linear_relations
            .iter()
            .map(|r| {
                let mut coeffs = Map::new();
                for (g, &c) in self.generators.iter().zip(r) {
                    if c != 0 {
                        coeffs.insert(format!("{:?}", g.to_vec()).replace(' ', ""), json!(c));
                    }
                }
                json!({ "coeffs": coeffs })
            })
            .collect();
        let mut out = Map::new();
        out.insert("weights".into(), json!(self.weights));
        out.insert("generators".into(), json!(self.generators));
        out.insert("sr_pairs".into(), Value::Array(sr));
        out.insert("linear_relations".into(), Value::Array(rels));
        if let Some(h) = hilbert {
            out.insert("hilbert".into(), json!(h));
        }
        Value::Object(out)
    }

    /// Relation in the `D^{2,3} + D^{2,3,5} = D^{2,4} + D^{2,4,5}` style.
    pub fn format_relation(&self, rel: &[i64]) -> String {
        let side = |positive: bool| -> String {
            let terms: Vec<String> = self
                .generators
                .iter()
                .zip(rel)
                .filter(|(_, &c)| if positive { c > 0 } else { c < 0 })
                .map(|(g, &c)| {
                    let a = c.abs();
                    if a == 1 {
                        format!("D^{g}")
                    } else {
                        format!("{a} D^{g}")
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        format!("{} = {}", side(true), side(false))
    }
}

/// Flips the sign so the first nonzero entry is positive.
pub(crate) fn orient(mut row: Vec<i64>) -> Vec<i64> {
    if row.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        for c in &mut row {
            *c = -*c;
        }
    }
    row
}

/// The relation attached to two rank-one flats `{i,j}`, `{k,l}`:
/// `Σ_{S ⊇ ij, S ⊉ kl} D^S - Σ_{S ⊇ kl, S ⊉ ij} D^S`.
fn pair_relation(generators: &[FlatLabel], ij: Edge, kl: Edge) -> Vec<i64> {
    generators
        .iter()
        .map(|s| {
            let s = s.set();
            i64::from(ij.vertices().is_subset(s)) - i64::from(kl.vertices().is_subset(s))
        })
        .collect()
}

fn dedup_nonzero(rows: impl IntoIterator<Item = Vec<i64>>) -> Vec<Vec<i64>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        if r.iter().any(|&c| c != 0) && seen.insert(r.clone()) {
            out.push(r);
        }
    }
    out
}

fn graph_for(p: &HeavyLightProfile) -> Result<ReducedWeightGraph, ChowError> {
    Ok(reduced_weight_graph(p)?)
}

/// The presentation of `A*(M̄_{0,w})` by 1-connected flats: generators
/// `D^S`, the pairs `S, T` that are neither comparable nor disjoint, and one
/// linear relation per basis vector of `B_{2,3}`.
pub fn heavy_light_presentation(p: &HeavyLightProfile) -> Result<Presentation, ChowError> {
    let g = graph_for(p)?;
    let generators = one_connected_flats(&g);
    let eliminated = crate::fan::DEFAULT_ELIMINATED;
    let relations = g
        .edges()
        .iter()
        .filter(|e| **e != eliminated)
        .map(|&ij| orient(pair_relation(&generators, ij, eliminated)));
    Ok(Presentation {
        weights: canonical_form(p)?.to_string(),
        n: p.n(),
        sr_pairs: non_nested_pairs(&generators),
        linear_relations: dedup_nonzero(relations),
        generators,
    })
}

/// Linear relations for every ordered pair of rank-one flats, not only
/// those against the eliminated pair. Spans the same lattice as the
/// presentation's relations.
pub fn all_pair_relations(p: &HeavyLightProfile) -> Result<Vec<Vec<i64>>, ChowError> {
    let g = graph_for(p)?;
    let generators = one_connected_flats(&g);
    let pairs = g.edges();
    let rows = pairs
        .iter()
        .flat_map(|&a| pairs.iter().map(move |&b| (a, b)))
        .map(|(a, b)| orient(pair_relation(&generators, a, b)));
    Ok(dedup_nonzero(rows))
}

fn non_nested_pairs(generators: &[FlatLabel]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..generators.len() {
        for b in a + 1..generators.len() {
            if !nested_pair(generators[a].set(), generators[b].set()) {
                out.push((a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(p: &Presentation) -> Vec<Vec<usize>> {
        p.generators().iter().map(|g| g.to_vec()).collect()
    }

    #[test]
    fn losev_manin_presentation() {
        let pres = heavy_light_presentation(&HeavyLightProfile::canonical(2, 5).unwrap()).unwrap();
        assert_eq!(
            labels(&pres),
            vec![vec![2, 3], vec![2, 4], vec![2, 5], vec![2, 3, 4], vec![2, 3, 5], vec![2, 4, 5]]
        );
        assert_eq!(pres.sr_pairs().len(), 9);
        assert_eq!(pres.linear_relations().len(), 2);
        assert_eq!(pres.format_relation(&pres.linear_relations()[0]), "D^{2,3} + D^{2,3,5} = D^{2,4} + D^{2,4,5}");
        assert_eq!(pres.format_relation(&pres.linear_relations()[1]), "D^{2,3} + D^{2,3,4} = D^{2,5} + D^{2,4,5}");
        assert_eq!(pres.grading_dimension(), 2);
        assert_eq!(pres.weights(), "1,1,1/4,1/4,1/4");
    }

    #[test]
    fn two_light_presentation() {
        let pres = heavy_light_presentation(&HeavyLightProfile::canonical(2, 4).unwrap()).unwrap();
        assert_eq!(labels(&pres), vec![vec![2, 3], vec![2, 4]]);
        assert_eq!(pres.sr_pairs(), &[(0, 1)]);
        assert_eq!(pres.linear_relations(), &[vec![1, -1]]);
    }

    #[test]
    fn all_heavy_generator_count() {
        let pres = heavy_light_presentation(&HeavyLightProfile::canonical(5, 5).unwrap()).unwrap();
        assert_eq!(pres.generators().len(), 10);
    }

    #[test]
    fn relation_entries_are_signs() {
        let pres = heavy_light_presentation(&HeavyLightProfile::canonical(3, 6).unwrap()).unwrap();
        for r in pres.linear_relations() {
            assert!(r.iter().all(|c| (-1..=1).contains(c)));
            assert!(r.iter().any(|&c| c != 0));
        }
    }

    #[test]
    fn json_schema() {
        let pres = heavy_light_presentation(&HeavyLightProfile::canonical(2, 5).unwrap()).unwrap();
        let v = pres.to_json(Some(&[1, 4, 1]));
        assert_eq!(v["weights"], "1,1,1/4,1/4,1/4");
        assert_eq!(v["generators"][5], json!([2, 4, 5]));
        assert_eq!(v["sr_pairs"][0], json!([[2, 3], [2, 4]]));
        let first = v["linear_relations"][0]["coeffs"].as_object().unwrap();
        let keys: Vec<&String> = first.keys().collect();
        assert_eq!(keys, vec!["[2,3]", "[2,4]", "[2,3,5]", "[2,4,5]"]);
        assert_eq!(first["[2,4,5]"], json!(-1));
        assert_eq!(v["hilbert"], json!([1, 4, 1]));
    }
}
