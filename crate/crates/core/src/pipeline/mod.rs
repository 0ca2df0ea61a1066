//! Generalized unraveling and the main construction.
//!
//! [`main_construct`] replaces every seed vertex by a cycle and every seed
//! edge by two cross edges. Each vertex of the result sits on a *track*
//! (one role and index, all seed vertices of one side); identifying tracks
//! gives the quotient `H`, which embeds in the wall, and the wall's layouts
//! pull back to layouts of `G'`.

mod embed;
mod pullback;
mod sampling;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MonotoneDecomposition, OrderedBipartiteGraph, SimpleGraph};
use crate::rational::{self, int, Rational};
use crate::report::ValidationReport;
use crate::wall::Coord;

pub use embed::{closed_form_embedding, embed_h_in_wall, search_embedding, verify_embedding, SEARCH_BUDGET};
pub use pullback::{layout_2queue, layout_3monotone, layout_4track, verify_layouts, LayoutChecks};
pub use sampling::{aligned_minimum, sample_expansion, sample_expansion_graph, SamplingReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    V,
    Nu,
    VPrime,
    NuPrime,
    W,
    Omega,
    WPrime,
    OmegaPrime,
}

impl Role {
    /// Short name used in vertex ids.
    pub fn name(self) -> &'static str {
        match self {
            Role::V => "v",
            Role::Nu => "nu",
            Role::VPrime => "v'",
            Role::NuPrime => "nu'",
            Role::W => "w",
            Role::Omega => "om",
            Role::WPrime => "w'",
            Role::OmegaPrime => "om'",
        }
    }

    /// Prefix of the track name.
    pub fn track_name(self) -> &'static str {
        match self {
            Role::V => "A",
            Role::Nu => "L",
            Role::VPrime => "A'",
            Role::NuPrime => "L'",
            Role::W => "B",
            Role::Omega => "O",
            Role::WPrime => "B'",
            Role::OmegaPrime => "O'",
        }
    }

    /// Whether vertices of this role lie in class X.
    pub fn in_x(self) -> bool {
        matches!(self, Role::V | Role::NuPrime | Role::WPrime | Role::Omega)
    }
}

/// All seed vertices of one side carrying one role and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Track {
    pub role: Role,
    pub index: i64,
}

impl Track {
    fn new(role: Role, index: i64) -> Self {
        Self { role, index }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.role.track_name(), self.index)
    }
}

/// Tracks of the cycle of an A-vertex, in cycle order:
/// `ν0, v1, ν1, ..., vk, νk, ν'k, v'k, ..., v'1, ν'0`.
pub fn a_cycle_tracks(k: usize) -> Vec<Track> {
    let k = k as i64;
    let mut out = vec![Track::new(Role::Nu, 0)];
    for i in 1..=k {
        out.push(Track::new(Role::V, i));
        out.push(Track::new(Role::Nu, i));
    }
    for i in (1..=k).rev() {
        out.push(Track::new(Role::NuPrime, i));
        out.push(Track::new(Role::VPrime, i));
    }
    out.push(Track::new(Role::NuPrime, 0));
    out
}

/// Tracks of the cycle of a B-vertex, in cycle order:
/// `w-1, ω-1, ..., ω(k+1), w(k+2), w'(k+2), ω'(k+1), ..., ω'-1, w'-1`.
pub fn b_cycle_tracks(k: usize) -> Vec<Track> {
    let k = k as i64;
    let mut out = Vec::new();
    for i in -1..=k + 1 {
        out.push(Track::new(Role::W, i));
        out.push(Track::new(Role::Omega, i));
    }
    out.push(Track::new(Role::W, k + 2));
    out.push(Track::new(Role::WPrime, k + 2));
    for i in (-1..=k + 1).rev() {
        out.push(Track::new(Role::OmegaPrime, i));
        out.push(Track::new(Role::WPrime, i));
    }
    out
}

/// Every track: the A-cycle tracks, then the B-cycle tracks. The position
/// in this list is the vertex index in `H`.
pub fn all_tracks(k: usize) -> Vec<Track> {
    let mut out = a_cycle_tracks(k);
    out.extend(b_cycle_tracks(k));
    out
}

/// `H` with every possible edge: both cycles plus `A_i B_i` and `A'_i B'_i`
/// for `i` in `1..=k`. The quotient of a construction is a subgraph.
pub fn full_quotient(k: usize) -> SimpleGraph {
    let tracks = all_tracks(k);
    let pos: HashMap<Track, usize> = tracks.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let (la, lb) = (4 * k + 2, 4 * k + 14);
    let mut edges: Vec<(usize, usize)> = (0..la).map(|i| (i, (i + 1) % la)).collect();
    edges.extend((0..lb).map(|i| (la + i, la + (i + 1) % lb)));
    for i in 1..=k as i64 {
        edges.push((pos[&Track::new(Role::V, i)], pos[&Track::new(Role::W, i)]));
        edges.push((pos[&Track::new(Role::VPrime, i)], pos[&Track::new(Role::WPrime, i)]));
    }
    SimpleGraph::new(tracks.iter().map(Track::to_string).collect(), edges).expect("track names are unique")
}

/// `(k + kΔ(1+ε)/ε)^-1`.
pub fn gen_epsilon(epsilon: Rational, k: usize, delta: usize) -> Result<Rational> {
    if epsilon <= int(0) || k < 2 || delta < 1 {
        return Err(Error::input(format!(
            "need ε > 0, k ≥ 2 and Δ ≥ 1, got ε = {}, k = {k}, Δ = {delta}",
            rational::format(&epsilon)
        )));
    }
    let (k, delta) = (int(k as i64), int(delta as i64));
    Ok((k + k * delta * (int(1) + epsilon) / epsilon).recip())
}

/// Whether `(2k+7)/(2k+1) ≤ 1 + ε/4`.
pub fn cycle_ratio_holds(k: usize, epsilon: Rational) -> bool {
    let k = k as i64;
    rational::rat(2 * k + 7, 2 * k + 1) <= int(1) + epsilon / int(4)
}

/// Vertex cycles of a generalized unraveling. `cycles[v]` lists the
/// vertices of `C_v` (indices of `G'` flattened as in
/// [`OrderedBipartiteGraph::to_simple`]) in cycle order, for every seed
/// vertex `v` (A first, then B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSystem {
    pub cycles: Vec<Vec<usize>>,
    pub kv: Vec<usize>,
}

impl CycleSystem {
    /// In-class parts of every cycle, as side indices of `G'`: the X part
    /// when `x` is true, the Y part otherwise.
    pub fn class_parts(&self, len_x: usize, x: bool) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|&&v| (v < len_x) == x)
                    .map(|&v| if x { v } else { v - len_x })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenViolation {
    /// A vertex of `G'` lies on two cycles.
    Overlap { vertex: String, first: String, second: String },
    Uncovered { vertex: String },
    /// Consecutive cycle vertices that are not adjacent, or a repeated
    /// vertex.
    BrokenCycle { owner: String, position: usize },
    Length { owner: String, length: usize, kv: usize },
    KvRange { owner: String, kv: usize, lower: usize, upper: String },
    /// Seed edge `vw` with no cross edge of the named kind: `XY` means
    /// `x ∈ C_v ∩ X`, `y ∈ C_w ∩ Y`; `YX` the reverse.
    MissingWitness { edge: (String, String), witness: &'static str },
}

/// Checks the four hypotheses of the generalized unraveling for `G'` with
/// classes X (side A) and Y (side B), using `base_k` as the base cycle
/// parameter.
pub fn check_gen_conditions(
    g: &OrderedBipartiteGraph,
    gprime: &OrderedBipartiteGraph,
    cs: &CycleSystem,
    epsilon: Rational,
    base_k: usize,
) -> Result<ValidationReport<GenViolation>> {
    let n = g.len_a();
    if n != g.len_b() || n < 3 {
        return Err(Error::Precondition(format!("need |A| = |B| ≥ 3, got {} and {}", n, g.len_b())));
    }
    if base_k < 2 {
        return Err(Error::Precondition(format!("k = {base_k} is below 2")));
    }
    if cs.cycles.len() != 2 * n || cs.kv.len() != 2 * n {
        return Err(Error::input("cycle system needs one cycle per seed vertex"));
    }
    let seed = g.to_simple();
    let flat = gprime.to_simple();
    let mut report = ValidationReport::new();
    macro_rules! push {
        ($v:expr) => {
            if !report.push($v) {
                return Ok(report);
            }
        };
    }

    let mut owner = vec![usize::MAX; flat.vertex_count()];
    for (o, cycle) in cs.cycles.iter().enumerate() {
        for &x in cycle {
            if owner[x] != usize::MAX && owner[x] != o {
                push!(GenViolation::Overlap {
                    vertex: flat.id(x).to_string(),
                    first: seed.id(owner[x]).to_string(),
                    second: seed.id(o).to_string(),
                });
            } else {
                owner[x] = o;
            }
        }
    }
    for (x, &o) in owner.iter().enumerate() {
        if o == usize::MAX {
            push!(GenViolation::Uncovered { vertex: flat.id(x).to_string() });
        }
    }

    let upper = (int(1) + epsilon / int(4)) * int(base_k as i64);
    for (o, cycle) in cs.cycles.iter().enumerate() {
        let name = seed.id(o).to_string();
        let len = cycle.len();
        let mut seen = std::collections::HashSet::new();
        for (i, &x) in cycle.iter().enumerate() {
            let y = cycle[(i + 1) % len];
            if len < 4 || !seen.insert(x) || flat.edge_index(x, y).is_none() {
                push!(GenViolation::BrokenCycle { owner: name.clone(), position: i });
                break;
            }
        }
        let kv = cs.kv[o];
        if len != 2 * kv {
            push!(GenViolation::Length { owner: name.clone(), length: len, kv });
        }
        if kv < base_k || int(kv as i64) > upper {
            push!(GenViolation::KvRange { owner: name, kv, lower: base_k, upper: rational::format(&upper) });
        }
    }

    // Pairs (owner of the X end, owner of the Y end) over all edges.
    let mut witnesses = std::collections::HashSet::new();
    for &(x, y) in flat.edges() {
        if owner[x] != usize::MAX && owner[y] != usize::MAX {
            witnesses.insert((owner[x], owner[y]));
        }
    }
    let n_a = g.len_a();
    for &(a, b) in g.edges() {
        let (v, w) = (a, n_a + b);
        let xy = witnesses.contains(&(v, w));
        let yx = witnesses.contains(&(w, v));
        let edge = (seed.id(v).to_string(), seed.id(w).to_string());
        if !xy {
            push!(GenViolation::MissingWitness { edge: edge.clone(), witness: "XY" });
        }
        if !yx {
            push!(GenViolation::MissingWitness { edge, witness: "YX" });
        }
    }
    Ok(report)
}

/// A vertex of `G'`: seed vertex plus track.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineVertex {
    pub orig: usize,
    pub track: Track,
}

/// Output of [`main_construct`].
#[derive(Debug, Clone)]
pub struct PipelineGraph {
    pub seed: OrderedBipartiteGraph,
    /// The seed's decomposition, padded to exactly `k` matchings.
    pub decomposition: MonotoneDecomposition,
    pub k: usize,
    pub epsilon: Rational,
    /// `G'` with class X as side A and class Y as side B.
    pub gprime: OrderedBipartiteGraph,
    /// Indexed like `gprime.to_simple()`.
    pub vertices: Vec<PipelineVertex>,
    pub cycles: CycleSystem,
    pub tracks: Vec<Track>,
    /// Members of each track, in seed order.
    pub track_members: Vec<Vec<usize>>,
    pub track_of: Vec<usize>,
    /// Hypothesis check with base parameter `2k+1`; `None` when `n < 3`.
    pub conditions: Option<ValidationReport<GenViolation>>,
    /// Wall coordinate of every track, once embedded.
    pub embedding: Option<Vec<Coord>>,
}

impl PipelineGraph {
    pub fn n(&self) -> usize {
        self.seed.len_a()
    }

    /// Coordinates of every track, or a state error before embedding.
    pub fn coords(&self) -> Result<&[Coord]> {
        self.embedding
            .as_deref()
            .ok_or_else(|| Error::State("H has not been embedded in the wall".into()))
    }

    /// Embeds `H` and checks the embedding against this graph's quotient.
    pub fn embed(&mut self) -> Result<()> {
        let coords = embed_h_in_wall(self.k)?;
        let h = quotient_h(self)?;
        verify_embedding(&h.graph, &coords)?;
        self.embedding = Some(coords);
        Ok(())
    }
}

/// Builds `G'` from a two-sided seed with a decomposition into at most `k`
/// monotone matchings; matching `i` (0-based) feeds the cross edges at
/// index `i + 1`.
pub fn main_construct(d: &MonotoneDecomposition, k: usize, epsilon: Rational) -> Result<PipelineGraph> {
    let g = &d.graph;
    let n = g.len_a();
    if n != g.len_b() || n == 0 {
        return Err(Error::input(format!("seed needs |A| = |B| ≥ 1, got {} and {}", n, g.len_b())));
    }
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k} is below 2")));
    }
    if epsilon <= int(0) || int(k as i64) * epsilon < int(3) {
        return Err(Error::Precondition(format!(
            "need k ≥ 3/ε, got k = {k} and ε = {}",
            rational::format(&epsilon)
        )));
    }
    d.ensure_valid()?;
    let mut d = d.clone();
    if d.len() > k {
        d = d.compacted();
    }
    if d.len() > k {
        return Err(Error::input(format!("decomposition has {} matchings, more than k = {k}", d.len())));
    }
    let d = d.padded(k);

    let tracks = all_tracks(k);
    let track_pos: HashMap<Track, usize> = tracks.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let seed = g.to_simple();
    let a_cycle = a_cycle_tracks(k);
    let b_cycle = b_cycle_tracks(k);

    // Vertices per class, in seed order then cycle order.
    let mut members: Vec<Vec<PipelineVertex>> = Vec::with_capacity(2 * n);
    for o in 0..2 * n {
        let cycle = if o < n { &a_cycle } else { &b_cycle };
        members.push(cycle.iter().map(|&track| PipelineVertex { orig: o, track }).collect());
    }
    let xs: Vec<PipelineVertex> = members.iter().flatten().copied().filter(|p| p.track.role.in_x()).collect();
    let ys: Vec<PipelineVertex> = members.iter().flatten().copied().filter(|p| !p.track.role.in_x()).collect();
    let len_x = xs.len();
    let mut index: HashMap<(usize, Track), usize> = HashMap::new();
    for (i, p) in xs.iter().chain(ys.iter()).enumerate() {
        index.insert((p.orig, p.track), i);
    }
    let vertices: Vec<PipelineVertex> = xs.iter().chain(ys.iter()).copied().collect();
    let id = |p: &PipelineVertex| format!("{}.{}{}", seed.id(p.orig), p.track.role.name(), p.track.index);

    let cycles: Vec<Vec<usize>> = members
        .iter()
        .map(|m| m.iter().map(|p| index[&(p.orig, p.track)]).collect())
        .collect();
    let mut edges = Vec::new();
    let mut add = |u: usize, v: usize| {
        let (x, y) = if u < len_x { (u, v) } else { (v, u) };
        debug_assert!(x < len_x && y >= len_x);
        edges.push((x, y - len_x));
    };
    for cycle in &cycles {
        for i in 0..cycle.len() {
            add(cycle[i], cycle[(i + 1) % cycle.len()]);
        }
    }
    for (m, _) in d.matchings.iter().enumerate() {
        let i = m as i64 + 1;
        for (a, b) in d.matching_edges(m) {
            let w = n + b;
            add(index[&(a, Track::new(Role::V, i))], index[&(w, Track::new(Role::W, i))]);
            add(index[&(a, Track::new(Role::VPrime, i))], index[&(w, Track::new(Role::WPrime, i))]);
        }
    }
    let gprime = OrderedBipartiteGraph::new(
        xs.iter().map(id).collect(),
        ys.iter().map(id).collect(),
        edges,
    )?;

    let mut track_members = vec![Vec::new(); tracks.len()];
    let mut track_of = vec![0; vertices.len()];
    for (v, p) in vertices.iter().enumerate() {
        let t = track_pos[&p.track];
        track_members[t].push(v);
        track_of[v] = t;
    }
    for list in &mut track_members {
        list.sort_by_key(|&v| vertices[v].orig);
    }

    let kv = cycles.iter().map(|c| c.len() / 2).collect();
    let cycles = CycleSystem { cycles, kv };
    let conditions = if n >= 3 {
        Some(check_gen_conditions(g, &gprime, &cycles, epsilon, 2 * k + 1)?)
    } else {
        None
    };
    Ok(PipelineGraph {
        seed: g.clone(),
        decomposition: d,
        k,
        epsilon,
        gprime,
        vertices,
        cycles,
        tracks,
        track_members,
        track_of,
        conditions,
        embedding: None,
    })
}

/// `H` with the number of `G'` edges behind each of its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: SimpleGraph,
    pub multiplicity: Vec<usize>,
}

/// Identifies every track of `G'` into one vertex. An edge inside a track
/// is an invariant violation.
pub fn quotient_h(p: &PipelineGraph) -> Result<QuotientGraph> {
    let flat = p.gprime.to_simple();
    let mut counts: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for &(u, v) in flat.edges() {
        let (tu, tv) = (p.track_of[u], p.track_of[v]);
        if tu == tv {
            return Err(Error::Invariant(format!(
                "edge {}-{} lies inside track {}",
                flat.id(u),
                flat.id(v),
                p.tracks[tu]
            )));
        }
        *counts.entry((tu.min(tv), tu.max(tv))).or_default() += 1;
    }
    let graph = SimpleGraph::new(p.tracks.iter().map(Track::to_string).collect(), counts.keys().copied())?;
    let multiplicity = graph.edges().iter().map(|e| counts[e]).collect();
    Ok(QuotientGraph { graph, multiplicity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::decompose_monotone_greedy;
    use crate::rational::rat;

    /// Two-sided 3-regular seed on 3 + 3 vertices: a 3-cycle of shifts.
    fn seed3() -> MonotoneDecomposition {
        let edges = (0..3).flat_map(|a| [(a, a), (a, (a + 1) % 3)]);
        let g = OrderedBipartiteGraph::with_sizes(3, 3, edges).unwrap();
        decompose_monotone_greedy(&g)
    }

    #[test]
    fn gen_epsilon_values() {
        assert_eq!(gen_epsilon(int(1), 3, 6).unwrap(), rat(1, 39));
        assert_eq!(gen_epsilon(int(1), 2, 2).unwrap(), rat(1, 10));
        assert!(gen_epsilon(int(1), 3, 3).unwrap() > gen_epsilon(int(1), 3, 4).unwrap());
        assert!(gen_epsilon(int(1), 3, 3).unwrap() > gen_epsilon(int(1), 4, 3).unwrap());
        assert!(gen_epsilon(int(0), 3, 3).is_err());
        assert!(gen_epsilon(int(1), 1, 3).is_err());
    }

    #[test]
    fn cycle_lengths_and_counts() {
        assert_eq!(a_cycle_tracks(3).len(), 14);
        assert_eq!(b_cycle_tracks(3).len(), 26);
        assert_eq!(all_tracks(3).len(), 40);
        let h = full_quotient(3);
        assert_eq!(h.vertex_count(), 40);
        assert!(h.max_degree() <= 3);
    }

    #[test]
    fn construction_counts() {
        let d = seed3();
        let p = main_construct(&d, 3, int(1)).unwrap();
        assert_eq!(p.gprime.vertex_count(), 40 * 3);
        assert_eq!(p.gprime.len_a(), p.gprime.len_b());
        assert_eq!(p.cycles.kv[0], 7);
        assert_eq!(p.cycles.kv[3], 13);
        assert!(p.gprime.max_degree() <= 3);
        let h = quotient_h(&p).unwrap();
        assert_eq!(h.graph.vertex_count(), 40);
        assert!(h.graph.max_degree() <= 3);
    }

    #[test]
    fn preconditions() {
        let d = seed3();
        assert!(matches!(main_construct(&d, 2, int(1)), Err(Error::Precondition(_))));
        assert!(matches!(main_construct(&d, 3, rat(1, 2)), Err(Error::Precondition(_))));
        let wide = decompose_monotone_greedy(
            &OrderedBipartiteGraph::with_sizes(3, 3, (0..3).flat_map(|a| (0..3).map(move |b| (a, b)))).unwrap(),
        );
        assert_eq!(wide.len(), 5);
        assert!(matches!(main_construct(&wide, 3, int(1)), Err(Error::Input(_))));
    }

    #[test]
    fn only_the_cycle_parameter_range_fails() {
        let p = main_construct(&seed3(), 3, int(1)).unwrap();
        let report = p.conditions.unwrap();
        assert_eq!(report.len(), 3);
        assert!(report
            .violations()
            .iter()
            .all(|v| matches!(v, GenViolation::KvRange { kv: 13, .. })));
        let relaxed = check_gen_conditions(&p.seed, &p.gprime, &p.cycles, int(1), 2).unwrap();
        let bad: Vec<_> = relaxed.violations().iter().filter(|v| !matches!(v, GenViolation::KvRange { .. })).collect();
        assert!(bad.is_empty());
    }

    #[test]
    fn dropped_cross_edge_is_named() {
        let p = main_construct(&seed3(), 3, int(1)).unwrap();
        let x = p.gprime.side_a().iter().position(|id| id == "b0.w'1").unwrap();
        let y = p.gprime.side_b().iter().position(|id| id == "a0.v'1").unwrap();
        assert!(p.gprime.contains_edge((x, y)));
        let edges = p.gprime.edges().iter().copied().filter(|&e| e != (x, y));
        let damaged = OrderedBipartiteGraph::new(p.gprime.side_a().to_vec(), p.gprime.side_b().to_vec(), edges).unwrap();
        let report = check_gen_conditions(&p.seed, &damaged, &p.cycles, int(1), 7).unwrap();
        let missing = GenViolation::MissingWitness { edge: ("a0".into(), "b0".into()), witness: "YX" };
        assert!(report.violations().contains(&missing));
        assert!(!report.violations().iter().any(|v| matches!(v, GenViolation::MissingWitness { witness: "XY", .. })));
    }

    #[test]
    fn shortened_parameter_is_a_range_violation() {
        let p = main_construct(&seed3(), 3, int(1)).unwrap();
        let mut cs = p.cycles.clone();
        cs.kv[0] = 1;
        let report = check_gen_conditions(&p.seed, &p.gprime, &cs, int(1), 2).unwrap();
        assert!(report.violations().iter().any(|v| matches!(v, GenViolation::KvRange { kv: 1, .. })));
    }

    #[test]
    fn single_vertex_seed_matches_quotient() {
        let g = OrderedBipartiteGraph::with_sizes(1, 1, [(0, 0)]).unwrap();
        let d = decompose_monotone_greedy(&g);
        let p = main_construct(&d, 3, int(1)).unwrap();
        assert!(p.conditions.is_none());
        let h = quotient_h(&p).unwrap();
        assert_eq!(h.graph.vertex_count(), p.gprime.vertex_count());
        assert_eq!(h.graph.edge_count(), p.gprime.edge_count());
        assert!(h.multiplicity.iter().all(|&m| m == 1));
    }

    #[test]
    fn ratio_claim_needs_large_k() {
        assert!(!cycle_ratio_holds(3, int(1)));
        assert!(!cycle_ratio_holds(6, int(1)));
        assert!(cycle_ratio_holds(12, int(1)));
    }
}
