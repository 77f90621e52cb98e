//! The reduced Bergman fan `Σ_w` of `M(w)` with its nested-sets
//! subdivision, the chain-of-flats subdivision of the same support, and the
//! coordinate projection from `Σ_n`.
//!
//! Coordinates: one basis vector `v_{i,j}` per rank-one flat `{i,j}` (an
//! edge of `G(w)`), modulo `Σ v_{i,j} = 0`. A distinguished pair is
//! eliminated by substituting `v_{k,l} = -Σ_{others}`, so a ray lives in
//! `Z^(P-1)` where `P` is the number of edges.

use std::collections::HashMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graph_matroid::{one_connected_flats, reduced_weight_graph, Edge, Flat, FlatLabel, MatroidError, ReducedWeightGraph};
use crate::linalg::ExactMatrix;
use crate::subset::VertexSet;
use crate::weights::HeavyLightProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("point has {got} coordinates, the fan lives in dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not a ray label of the fan of M̄_0,n")]
    InvalidSourceLabel(VertexSet),
    #[error("{0} is not a rank-one flat of M(w)")]
    InvalidPair(Edge),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// The pair eliminated unless the caller asks otherwise. Vertex 2 is
/// always heavy, so `{2,3}` is a rank-one flat of every `M(w)`.
pub const DEFAULT_ELIMINATED: Edge = Edge(2, 3);

/// Integer coordinates of a ray in the lineality quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct RayVector(pub Vec<i64>);

impl RayVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn make_primitive(mut self) -> Self {
        let g = self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g > 1 {
            for x in &mut self.0 {
                *x /= g;
            }
        }
        self
    }
}

/// Coordinate system of the lineality quotient for one graph and one
/// eliminated pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates {
    pairs: Vec<Edge>,
    eliminated: Edge,
}

impl Coordinates {
    pub fn new(g: &ReducedWeightGraph, eliminated: Edge) -> Result<Self, FanError> {
        if !g.has_edge(eliminated) {
            return Err(FanError::InvalidPair(eliminated));
        }
        Ok(Coordinates { pairs: g.edges().to_vec(), eliminated })
    }

    /// All rank-one flats, including the eliminated one.
    pub fn pairs(&self) -> &[Edge] {
        &self.pairs
    }

    pub fn eliminated(&self) -> Edge {
        self.eliminated
    }

    /// Pairs indexing the coordinates, in order.
    pub fn basis(&self) -> impl Iterator<Item = Edge> + '_ {
        self.pairs.iter().copied().filter(move |p| *p != self.eliminated)
    }

    pub fn dim(&self) -> usize {
        self.pairs.len() - 1
    }

    /// Coordinates of `Σ_{p ∈ edges} v_p` for an arbitrary edge predicate.
    pub fn vector_of_edges(&self, contains: impl Fn(Edge) -> bool) -> RayVector {
        let shift = i64::from(contains(self.eliminated));
        RayVector(self.basis().map(|p| i64::from(contains(p)) - shift).collect()).make_primitive()
    }
}

/// `v_{F_S}` in the basis obtained by eliminating `eliminated`.
pub fn ray_coordinates(
    g: &ReducedWeightGraph,
    label: FlatLabel,
    eliminated: Edge,
) -> Result<RayVector, FanError> {
    let coords = Coordinates::new(g, eliminated)?;
    Ok(label_ray(&coords, label.set()))
}

fn label_ray(coords: &Coordinates, s: VertexSet) -> RayVector {
    coords.vector_of_edges(|e| s.contains(e.0) && s.contains(e.1))
}

/// Pairwise condition: any two members are comparable or disjoint.
pub fn is_nested(flats: &[FlatLabel]) -> bool {
    flats.iter().enumerate().all(|(i, a)| flats[i + 1..].iter().all(|b| nested_pair(a.set(), b.set())))
}

pub(crate) fn nested_pair(a: VertexSet, b: VertexSet) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b)
}

/// A cone of `Σ_w`: indices into [`Fan::labels`], increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(pub Vec<usize>);

impl Cone {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Anything that can answer support-membership queries: a simplicial
/// complex of cones in a common lattice.
pub trait ConeComplex {
    fn ambient_dim(&self) -> usize;
    /// Ray generators of each maximal cone.
    fn maximal_cone_rays(&self) -> Vec<Vec<&RayVector>>;
}

/// `Σ_w`: the nested-sets subdivision with respect to the 1-connected flats.
#[derive(Debug, Clone)]
pub struct Fan {
    graph: ReducedWeightGraph,
    coords: Coordinates,
    labels: Vec<FlatLabel>,
    rays: Vec<RayVector>,
    /// `cones[d]` holds the `d`-dimensional cones; `cones[0]` is the apex.
    cones: Vec<Vec<Cone>>,
}

impl Fan {
    pub fn graph(&self) -> &ReducedWeightGraph {
        &self.graph
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coords
    }

    pub fn labels(&self) -> &[FlatLabel] {
        &self.labels
    }

    pub fn rays(&self) -> &[RayVector] {
        &self.rays
    }

    pub fn ray_of(&self, label: FlatLabel) -> Option<&RayVector> {
        self.index_of(label).map(|i| &self.rays[i])
    }

    pub fn index_of(&self, label: FlatLabel) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn cones(&self, dim: usize) -> &[Cone] {
        self.cones.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.iter().skip(1).flatten()
    }

    pub fn max_dim(&self) -> usize {
        self.cones.len() - 1
    }

    /// Number of cones of each dimension `1..=max_dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.cones.iter().skip(1).map(Vec::len).collect()
    }

    pub fn cone_labels(&self, cone: &Cone) -> Vec<FlatLabel> {
        cone.0.iter().map(|&i| self.labels[i]).collect()
    }

    /// Ray matrix of a cone, one ray per row.
    pub fn ray_matrix(&self, cone: &Cone) -> ExactMatrix {
        let rows: Vec<Vec<i64>> = cone.0.iter().map(|&i| self.rays[i].0.clone()).collect();
        if rows.is_empty() {
            return ExactMatrix::zeros(0, self.coords.dim());
        }
        ExactMatrix::from_i64_rows(&rows)
    }

    /// Whether the two rays span a two-dimensional cone.
    pub fn spans_cone(&self, a: usize, b: usize) -> bool {
        let key = Cone(vec![a.min(b), a.max(b)]);
        a != b && self.cones(2).binary_search(&key).is_ok()
    }

    pub fn to_json(&self) -> Value {
        let rays: Vec<Value> = self
            .labels
            .iter()
            .zip(&self.rays)
            .map(|(l, r)| json!({ "flat": l, "coords": r }))
            .collect();
        let mut cones = Map::new();
        for (d, list) in self.cones.iter().enumerate().skip(1) {
            let items: Vec<Value> = list.iter().map(|c| json!(self.cone_labels(c))).collect();
            cones.insert(d.to_string(), Value::Array(items));
        }
        json!({ "rays": rays, "cones": cones, "f_vector": self.f_vector() })
    }
}

impl ConeComplex for Fan {
    fn ambient_dim(&self) -> usize {
        self.coords.dim()
    }

    fn maximal_cone_rays(&self) -> Vec<Vec<&RayVector>> {
        maximal_faces(&self.cones).into_iter().map(|c| c.0.iter().map(|&i| &self.rays[i]).collect()).collect()
    }
}

/// Cones not contained in a larger cone.
fn maximal_faces(cones: &[Vec<Cone>]) -> Vec<&Cone> {
    let mut out = Vec::new();
    for (d, list) in cones.iter().enumerate().skip(1) {
        for c in list {
            let covered = cones.get(d + 1).is_some_and(|up| up.iter().any(|u| c.0.iter().all(|i| u.0.contains(i))));
            if !covered {
                out.push(c);
            }
        }
    }
    out
}

pub fn build_fan(p: &HeavyLightProfile) -> Result<Fan, FanError> {
    build_fan_with(p, DEFAULT_ELIMINATED)
}

/// Builds `Σ_w` with an explicit eliminated pair.
pub fn build_fan_with(p: &HeavyLightProfile, eliminated: Edge) -> Result<Fan, FanError> {
    let graph = reduced_weight_graph(p)?;
    let coords = Coordinates::new(&graph, eliminated)?;
    let labels = one_connected_flats(&graph);
    let rays = labels.iter().map(|l| label_ray(&coords, l.set())).collect();
    let max_dim = p.n() - 3;
    let sets: Vec<VertexSet> = labels.iter().map(|l| l.set()).collect();
    let cones = nested_cones(&sets, max_dim);
    Ok(Fan { graph, coords, labels, rays, cones })
}

/// Depth-first enumeration of nested index sets, grouped by size.
pub(crate) fn nested_cones(sets: &[VertexSet], max_dim: usize) -> Vec<Vec<Cone>> {
    let compatible = |a: usize, b: usize| nested_pair(sets[a], sets[b]);
    cliques(sets.len(), max_dim, compatible)
}

/// All cliques of size `<= max_size` of a compatibility graph, grouped by
/// size, each list in lexicographic order.
pub(crate) fn cliques(count: usize, max_size: usize, compatible: impl Fn(usize, usize) -> bool) -> Vec<Vec<Cone>> {
    let adj: Vec<Vec<bool>> = (0..count).map(|a| (0..count).map(|b| a != b && compatible(a, b)).collect()).collect();
    let mut out: Vec<Vec<Cone>> = vec![Vec::new(); max_size + 1];
    out[0].push(Cone(Vec::new()));
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        adj: &[Vec<bool>],
        start: usize,
        max_size: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<Cone>>,
    ) {
        if stack.len() == max_size {
            return;
        }
        for j in start..adj.len() {
            if stack.iter().all(|&i| adj[i][j]) {
                stack.push(j);
                out[stack.len()].push(Cone(stack.clone()));
                extend(adj, j + 1, max_size, stack, out);
                stack.pop();
            }
        }
    }
    extend(&adj, 0, max_size, &mut stack, &mut out);
    for list in &mut out {
        list.sort();
    }
    while out.len() > 1 && out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    out
}

/// Every cone is unimodular: its rays extend to a lattice basis, i.e. the
/// ray matrix has full rank and all invariant factors equal to 1.
pub fn unimodularity_check(f: &Fan) -> bool {
    f.all_cones().all(|c| cone_is_unimodular(f, c))
}

pub fn cone_is_unimodular(f: &Fan, c: &Cone) -> bool {
    let factors = f.ray_matrix(c).smith_normal_form().expect("ray matrices are integral");
    factors.len() == c.dim() && factors.iter().all(|d| *d == 1.into())
}

/// Every cone is simplicial: its rays are linearly independent.
pub fn simpliciality_check(f: &Fan) -> bool {
    f.all_cones().all(|c| f.ray_matrix(c).rank() == c.dim())
}

/// Exact membership of `point` in the support of `f`.
pub fn support_membership(f: &impl ConeComplex, point: &[BigRational]) -> Result<bool, FanError> {
    if point.len() != f.ambient_dim() {
        return Err(FanError::DimensionMismatch { expected: f.ambient_dim(), got: point.len() });
    }
    if point.iter().all(num_traits::Zero::is_zero) {
        return Ok(true);
    }
    let dim = f.ambient_dim();
    Ok(f.maximal_cone_rays().iter().any(|rays| {
        let cols: Vec<Vec<BigRational>> = rays.iter().map(|r| r.to_rational()).collect();
        ExactMatrix::from_columns(&cols, dim).solve_nonnegative(point).is_some()
    }))
}

/// The chain-of-flats subdivision of the same Bergman support.
#[derive(Debug, Clone)]
pub struct ChainOfFlatsFan {
    coords: Coordinates,
    /// Proper nonempty flats, by rank then components.
    flats: Vec<Flat>,
    rays: Vec<RayVector>,
    /// Maximal chains `F_1 ⊊ ... ⊊ F_{r-1}` as indices into `flats`.
    chains: Vec<Vec<usize>>,
}

impl ChainOfFlatsFan {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn rays(&self) -> &[RayVector] {
        &self.rays
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coords
    }

    /// Every face of every maximal chain, deduplicated and in order.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut faces = std::collections::BTreeSet::new();
        for chain in &self.chains {
            for mask in 1u32..1 << chain.len() {
                let face: Vec<usize> =
                    chain.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, f)| *f).collect();
                faces.insert(face);
            }
        }
        faces.into_iter().collect()
    }
}

impl ConeComplex for ChainOfFlatsFan {
    fn ambient_dim(&self) -> usize {
        self.coords.dim()
    }

    fn maximal_cone_rays(&self) -> Vec<Vec<&RayVector>> {
        self.chains.iter().map(|c| c.iter().map(|&i| &self.rays[i]).collect()).collect()
    }
}

/// Ray of an arbitrary flat: the positive sum of the rank-one coordinates
/// of its edges. The chain-of-flats rays `-Σ e_j` are negated so both
/// subdivisions share one sign convention.
pub fn flat_ray(coords: &Coordinates, flat: &Flat) -> RayVector {
    coords.vector_of_edges(|e| flat.components().iter().any(|c| c.contains(e.0) && c.contains(e.1)))
}

pub fn chain_of_flats_cones(p: &HeavyLightProfile) -> Result<ChainOfFlatsFan, FanError> {
    chain_of_flats_cones_with(p, DEFAULT_ELIMINATED)
}

pub fn chain_of_flats_cones_with(p: &HeavyLightProfile, eliminated: Edge) -> Result<ChainOfFlatsFan, FanError> {
    let g = reduced_weight_graph(p)?;
    let coords = Coordinates::new(&g, eliminated)?;
    let top_rank = g.vertices().len() - 1;
    let mut index: HashMap<Flat, usize> = HashMap::new();
    let mut flats = Vec::new();
    let mut chains = Vec::new();
    let mut covers_cache: HashMap<Flat, Vec<Flat>> = HashMap::new();
    let mut stack = vec![(Flat::empty(), Vec::<usize>::new())];
    while let Some((flat, chain)) = stack.pop() {
        if flat.rank() + 1 == top_rank {
            chains.push(chain);
            continue;
        }
        let covers = covers_cache.entry(flat.clone()).or_insert_with(|| flat.covers(&g)).clone();
        for next in covers.into_iter().rev() {
            let id = *index.entry(next.clone()).or_insert_with(|| {
                flats.push(next.clone());
                flats.len() - 1
            });
            let mut c = chain.clone();
            c.push(id);
            stack.push((next, c));
        }
    }
    // canonical numbering: by rank, then components
    let mut order: Vec<usize> = (0..flats.len()).collect();
    order.sort_by(|&a, &b| flats[a].rank().cmp(&flats[b].rank()).then_with(|| flats[a].cmp(&flats[b])));
    let mut renumber = vec![0; flats.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let flats: Vec<Flat> = order.iter().map(|&i| flats[i].clone()).collect();
    let mut chains: Vec<Vec<usize>> =
        chains.into_iter().map(|c| c.into_iter().map(|i| renumber[i]).collect()).collect();
    chains.sort();
    let rays = flats.iter().map(|f| flat_ray(&coords, f)).collect();
    Ok(ChainOfFlatsFan { coords, flats, rays, chains })
}

/// Image of a source ray under `pr_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Zero,
    Ray(RayVector),
}

/// Coordinate projection `pr_w` from the quotient lattice of `Σ_n` to that
/// of `Σ_w`: forget the coordinates `v_{i,j}` with both `i,j` light. Both
/// sides eliminate `{2,3}`.
pub fn project_coordinates(source: &RayVector, target: &HeavyLightProfile) -> Result<RayVector, FanError> {
    let n = target.n();
    let full = reduced_weight_graph(&HeavyLightProfile::canonical(n, n).map_err(MatroidError::from)?)?;
    let src = Coordinates::new(&full, DEFAULT_ELIMINATED)?;
    if source.0.len() != src.dim() {
        return Err(FanError::DimensionMismatch { expected: src.dim(), got: source.0.len() });
    }
    let m = target.m();
    Ok(RayVector(
        src.basis()
            .zip(&source.0)
            .filter(|(p, _)| p.0 <= m)
            .map(|(_, &x)| x)
            .collect(),
    ))
}

/// `pr_w` applied to the ray of the `Σ_n` label `s`.
pub fn project_pr_w(source: VertexSet, target: &HeavyLightProfile) -> Result<Projection, FanError> {
    let n = target.n();
    let full = reduced_weight_graph(&HeavyLightProfile::canonical(n, n).map_err(MatroidError::from)?)?;
    let label = FlatLabel::new(&full, source).ok_or(FanError::InvalidSourceLabel(source))?;
    let coords = Coordinates::new(&full, DEFAULT_ELIMINATED)?;
    let image = project_coordinates(&label_ray(&coords, label.set()), target)?;
    Ok(if image.is_zero() { Projection::Zero } else { Projection::Ray(image) })
}

/// Outcome of comparing `pr_w` on `Σ_n` against `Σ_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    /// Source labels whose ray maps to 0.
    pub crushed: Vec<VertexSet>,
    /// The crushed labels are exactly the all-light ones.
    pub kills_exactly_light: bool,
    /// Each surviving ray lands on the ray of the same label in `Σ_w`.
    pub rays_match: bool,
    /// Surviving rays have pairwise distinct images.
    pub injective: bool,
    /// Every cone of `Σ_n` lands inside a cone of `Σ_w`.
    pub cones_into_cones: bool,
    pub cones_checked: usize,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.kills_exactly_light && self.rays_match && self.injective && self.cones_into_cones
    }
}

/// Checks `pr_w : Σ_n → Σ_w` ray by ray and cone by cone.
///
/// A cone maps into a cone when the surviving labels are nested in `Σ_w`
/// and the image of the cone's barycenter solves nonnegatively against
/// the corresponding rays.
pub fn projection_check(p: &HeavyLightProfile) -> Result<ProjectionReport, FanError> {
    let n = p.n();
    let source = build_fan(&HeavyLightProfile::canonical(n, n).map_err(MatroidError::from)?)?;
    let target = build_fan(p)?;
    let heavy = target.graph().heavy_vertices();
    let images: Vec<RayVector> =
        source.rays().iter().map(|r| project_coordinates(r, p)).collect::<Result<_, _>>()?;
    let crushed: Vec<VertexSet> =
        source.labels().iter().zip(&images).filter(|(_, v)| v.is_zero()).map(|(l, _)| l.set()).collect();
    let kills_exactly_light = source.labels().iter().zip(&images).all(|(l, v)| v.is_zero() == l.set().is_disjoint(heavy));
    let mut target_index = vec![None; images.len()];
    let mut rays_match = true;
    for (i, (l, v)) in source.labels().iter().zip(&images).enumerate() {
        if v.is_zero() {
            continue;
        }
        match FlatLabel::new(target.graph(), l.set()).and_then(|t| target.index_of(t)) {
            Some(t) if target.rays()[t] == *v => target_index[i] = Some(t),
            _ => rays_match = false,
        }
    }
    let mut seen = std::collections::HashSet::new();
    let injective = images.iter().filter(|v| !v.is_zero()).all(|v| seen.insert(v.clone()));

    let mut cones_into_cones = rays_match;
    let mut cones_checked = 0;
    let dim = target.coordinates().dim();
    for cone in source.all_cones() {
        if !cones_into_cones {
            break;
        }
        cones_checked += 1;
        let mut image_point = vec![BigRational::from_integer(0.into()); dim];
        for &i in &cone.0 {
            for (x, y) in image_point.iter_mut().zip(images[i].to_rational()) {
                *x += y;
            }
        }
        let mut kept: Vec<usize> = cone.0.iter().filter_map(|&i| target_index[i]).collect();
        kept.sort_unstable();
        kept.dedup();
        let labels: Vec<FlatLabel> = kept.iter().map(|&t| target.labels()[t]).collect();
        if !is_nested(&labels) {
            cones_into_cones = false;
            break;
        }
        let cols: Vec<Vec<BigRational>> = kept.iter().map(|&t| target.rays()[t].to_rational()).collect();
        let inside = if cols.is_empty() {
            image_point.iter().all(num_traits::Zero::is_zero)
        } else {
            ExactMatrix::from_columns(&cols, dim).solve_nonnegative(&image_point).is_some()
        };
        cones_into_cones = inside;
    }
    Ok(ProjectionReport { crushed, kills_exactly_light, rays_match, injective, cones_into_cones, cones_checked })
}

/// Outcome of testing the two subdivisions on the same points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportComparison {
    pub points: usize,
    /// Points in the support of both.
    pub inside: usize,
    pub disagreements: Vec<Vec<BigRational>>,
}

/// Membership in the nested-sets fan versus the chain-of-flats fan.
///
/// Test points are every ray and every cone barycenter of both fans, plus
/// `random_points` seeded points: a quarter uniform in a box, a quarter
/// positive combinations of a random maximal cone of each fan, and a
/// quarter such combinations nudged in one coordinate.
pub fn compare_supports(
    p: &HeavyLightProfile,
    random_points: usize,
    seed: u64,
) -> Result<SupportComparison, FanError> {
    use rand::{Rng, SeedableRng};

    let nested = build_fan(p)?;
    let chains = chain_of_flats_cones(p)?;
    let dim = nested.coordinates().dim();
    let sum = |rays: &[&RayVector]| -> Vec<BigRational> {
        let mut out = vec![BigRational::from_integer(0.into()); dim];
        for r in rays {
            for (x, y) in out.iter_mut().zip(r.to_rational()) {
                *x += y;
            }
        }
        out
    };
    let mut points: Vec<Vec<BigRational>> = Vec::new();
    for c in nested.all_cones() {
        let rays: Vec<&RayVector> = c.0.iter().map(|&i| &nested.rays()[i]).collect();
        points.push(sum(&rays));
    }
    for c in chains.all_cones() {
        let rays: Vec<&RayVector> = c.iter().map(|&i| &chains.rays()[i]).collect();
        points.push(sum(&rays));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let maximal = [nested.maximal_cone_rays(), chains.maximal_cone_rays()];
    let frac = |rng: &mut rand_chacha::ChaCha8Rng, lo: i64, hi: i64| {
        BigRational::new(rng.gen_range(lo..=hi).into(), rng.gen_range(1..=4i64).into())
    };
    for i in 0..random_points {
        let point = match i % 4 {
            0 => (0..dim).map(|_| frac(&mut rng, -6, 6)).collect(),
            kind => {
                let cones = &maximal[i / 4 % 2];
                let rays = &cones[rng.gen_range(0..cones.len())];
                let mut pt = vec![BigRational::from_integer(0.into()); dim];
                for r in rays {
                    let c = frac(&mut rng, 1, 6);
                    for (x, y) in pt.iter_mut().zip(r.to_rational()) {
                        *x += &c * y;
                    }
                }
                if kind == 3 && dim > 0 {
                    let j = rng.gen_range(0..dim);
                    pt[j] += frac(&mut rng, -2, 2);
                }
                pt
            }
        };
        points.push(point);
    }

    let mut out = SupportComparison { points: points.len(), inside: 0, disagreements: Vec::new() };
    for pt in points {
        let a = support_membership(&nested, &pt)?;
        let b = support_membership(&chains, &pt)?;
        if a != b {
            out.disagreements.push(pt);
        } else if a {
            out.inside += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(m: usize, n: usize) -> HeavyLightProfile {
        HeavyLightProfile::canonical(m, n).unwrap()
    }

    fn label(f: &Fan, s: &[usize]) -> FlatLabel {
        FlatLabel::new(f.graph(), s.iter().copied().collect()).unwrap()
    }

    #[test]
    fn ray_coordinates_in_plane_fan() {
        let f = build_fan_with(&profile(2, 5), Edge(2, 5)).unwrap();
        assert_eq!(f.coordinates().basis().collect::<Vec<_>>(), vec![Edge(2, 3), Edge(2, 4)]);
        assert_eq!(f.ray_of(label(&f, &[2, 3])).unwrap().0, vec![1, 0]);
        assert_eq!(f.ray_of(label(&f, &[2, 3, 5])).unwrap().0, vec![0, -1]);
        assert_eq!(f.ray_of(label(&f, &[2, 3, 4])).unwrap().0, vec![1, 1]);
        assert_eq!(f.ray_of(label(&f, &[2, 5])).unwrap().0, vec![-1, -1]);
    }

    #[test]
    fn eliminating_a_non_pair_fails() {
        let g = reduced_weight_graph(&profile(2, 5)).unwrap();
        let l = FlatLabel::new(&g, [2, 3].into_iter().collect()).unwrap();
        assert_eq!(ray_coordinates(&g, l, Edge(3, 4)), Err(FanError::InvalidPair(Edge(3, 4))));
    }

    #[test]
    fn nestedness_examples() {
        let g5 = reduced_weight_graph(&profile(2, 5)).unwrap();
        let l = |g: &ReducedWeightGraph, s: &[usize]| FlatLabel::new(g, s.iter().copied().collect()).unwrap();
        assert!(is_nested(&[l(&g5, &[2, 3]), l(&g5, &[2, 3, 5])]));
        assert!(!is_nested(&[l(&g5, &[2, 3]), l(&g5, &[2, 4])]));
        let g6 = reduced_weight_graph(&profile(4, 6)).unwrap();
        assert!(is_nested(&[l(&g6, &[2, 3]), l(&g6, &[4, 5, 6])]));
        assert!(is_nested(&[]));
    }

    #[test]
    fn losev_manin_fan() {
        let f = build_fan(&profile(2, 5)).unwrap();
        assert_eq!(f.f_vector(), vec![6, 6]);
        assert_eq!(f.max_dim(), 2);
        assert!(unimodularity_check(&f));
        assert!(simpliciality_check(&f));
    }

    #[test]
    fn small_fans() {
        let f = build_fan(&profile(2, 4)).unwrap();
        assert_eq!(f.f_vector(), vec![2]);
        let f = build_fan(&profile(5, 5)).unwrap();
        assert_eq!(f.f_vector(), vec![10, 15]);
        assert!(unimodularity_check(&f));
        assert!(unimodularity_check(&build_fan(&profile(2, 6)).unwrap()));
    }

    #[test]
    fn fan_json_shape() {
        let f = build_fan(&profile(2, 5)).unwrap();
        let v = f.to_json();
        assert_eq!(v["f_vector"], json!([6, 6]));
        assert_eq!(v["rays"][0]["flat"], json!([2, 3]));
        assert_eq!(v["cones"]["2"].as_array().unwrap().len(), 6);
        assert_eq!(v["cones"]["2"][0], json!([[2, 3], [2, 3, 4]]));
    }

    #[test]
    fn chain_counts() {
        assert_eq!(chain_of_flats_cones(&profile(2, 5)).unwrap().chains().len(), 6);
        assert_eq!(chain_of_flats_cones(&profile(2, 4)).unwrap().chains().len(), 2);
        // maximal chains in the partition lattice of a 4-set
        assert_eq!(chain_of_flats_cones(&profile(5, 5)).unwrap().chains().len(), 18);
        let c = chain_of_flats_cones(&profile(6, 6)).unwrap();
        assert!(c.flats().iter().any(|f| !f.is_connected()));
        assert!(chain_of_flats_cones(&profile(4, 4)).unwrap().flats().iter().all(Flat::is_connected));
    }

    #[test]
    fn membership_examples() {
        let f = build_fan(&profile(2, 5)).unwrap();
        let r23 = f.ray_of(label(&f, &[2, 3])).unwrap().to_rational();
        assert!(support_membership(&f, &r23).unwrap());
        let r234 = f.ray_of(label(&f, &[2, 3, 4])).unwrap();
        let neg: Vec<BigRational> = r234.to_rational().into_iter().map(|x| -x).collect();
        assert!(support_membership(&f, &neg).unwrap());
        assert_eq!(&RayVector(neg.iter().map(|x| x.to_integer().try_into().unwrap()).collect()), f.ray_of(label(&f, &[2, 5])).unwrap());
        let q = |a: i64, b: i64| vec![BigRational::from_integer(a.into()), BigRational::from_integer(b.into())];
        assert!(matches!(support_membership(&f, &q(1, 0)[..1]), Err(FanError::DimensionMismatch { .. })));
    }

    #[test]
    fn projection_examples() {
        let w = profile(2, 5);
        assert_eq!(project_pr_w([3, 4].into_iter().collect(), &w).unwrap(), Projection::Zero);
        let target = build_fan(&w).unwrap();
        let got = project_pr_w([2, 3].into_iter().collect(), &w).unwrap();
        assert_eq!(got, Projection::Ray(target.ray_of(label(&target, &[2, 3])).unwrap().clone()));
        assert!(matches!(
            project_pr_w(VertexSet::range(2, 5), &w),
            Err(FanError::InvalidSourceLabel(_))
        ));
        assert!(project_pr_w([2].into_iter().collect(), &w).is_err());
    }
}
