//! Graph representations, the crossing predicate and monotone decompositions.
//!
//! Vertices are dense indices. In an [`OrderedBipartiteGraph`] each side is
//! ordered by index, so two edges `(i, j)` and `(k, l)` cross exactly when
//! `i < k && l < j` (or symmetrically). A monotone matching is a matching
//! with no crossing pair; a graph is `d`-monotone when its edges split into
//! `d` such matchings.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Largest edge count [`decompose_monotone_exact`] accepts by default.
pub const DEFAULT_EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Edge of a bipartite graph as `(a-index, b-index)`.
pub type BiEdge = (usize, usize);

fn check_unique_ids<'a>(ids: impl IntoIterator<Item = &'a String>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::input(format!("duplicate vertex id {id:?}")));
        }
    }
    Ok(())
}

/// Simple undirected graph with string ids and a canonical edge list.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted and deduplicated, so an
/// edge index is stable for a given edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_unique_ids(&ids)?;
        let n = ids.len();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self { ids, edges: list })
    }

    /// Graph on `n` vertices named `"0"`, `"1"`, ...
    pub fn with_vertex_count(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.ids.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

/// Bipartite graph with ordered sides and optional edge colouring.
///
/// The order of each side is index order. Edges are sorted
/// lexicographically and deduplicated; `colors`, when present, is parallel
/// to the edge list and 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedBipartiteGraph {
    side_a: Vec<String>,
    side_b: Vec<String>,
    edges: Vec<BiEdge>,
    colors: Option<Vec<u32>>,
}

impl OrderedBipartiteGraph {
    pub fn new(
        side_a: Vec<String>,
        side_b: Vec<String>,
        edges: impl IntoIterator<Item = BiEdge>,
    ) -> Result<Self> {
        let edges: Vec<BiEdge> = edges.into_iter().collect();
        Self::build(side_a, side_b, edges, None)
    }

    /// Builds a coloured graph; `colors[i]` is the colour of `edges[i]`.
    /// Re-inserting an edge with the same colour is a no-op.
    pub fn with_colors(
        side_a: Vec<String>,
        side_b: Vec<String>,
        edges: Vec<BiEdge>,
        colors: Vec<u32>,
    ) -> Result<Self> {
        if edges.len() != colors.len() {
            return Err(Error::input(format!(
                "{} edges but {} colours",
                edges.len(),
                colors.len()
            )));
        }
        Self::build(side_a, side_b, edges, Some(colors))
    }

    /// Graph with sides named `a0.. a{n-1}` and `b0.. b{m-1}`.
    pub fn with_sizes(n: usize, m: usize, edges: impl IntoIterator<Item = BiEdge>) -> Result<Self> {
        Self::new(default_ids('a', n), default_ids('b', m), edges)
    }

    fn build(
        side_a: Vec<String>,
        side_b: Vec<String>,
        edges: Vec<BiEdge>,
        colors: Option<Vec<u32>>,
    ) -> Result<Self> {
        check_unique_ids(side_a.iter().chain(side_b.iter()))?;
        let (n, m) = (side_a.len(), side_b.len());
        for &(a, b) in &edges {
            if a >= n || b >= m {
                return Err(Error::input(format!(
                    "edge ({a},{b}) out of range for sides of size {n} and {m}"
                )));
            }
        }
        match colors {
            None => {
                let mut edges = edges;
                edges.sort_unstable();
                edges.dedup();
                Ok(Self { side_a, side_b, edges, colors: None })
            }
            Some(colors) => {
                if let Some(pos) = colors.iter().position(|&c| c == 0) {
                    return Err(Error::input(format!("edge {:?} has colour 0; colours are 1-based", edges[pos])));
                }
                let mut pairs: Vec<(BiEdge, u32)> = edges.into_iter().zip(colors).collect();
                pairs.sort_unstable();
                pairs.dedup();
                for w in pairs.windows(2) {
                    if w[0].0 == w[1].0 {
                        return Err(Error::input(format!(
                            "edge {:?} given colours {} and {}",
                            w[0].0, w[0].1, w[1].1
                        )));
                    }
                }
                let (edges, colors) = pairs.into_iter().unzip();
                Ok(Self { side_a, side_b, edges, colors: Some(colors) })
            }
        }
    }

    pub fn side_a(&self) -> &[String] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[String] {
        &self.side_b
    }

    pub fn side(&self, side: Side) -> &[String] {
        match side {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }

    pub fn len_a(&self) -> usize {
        self.side_a.len()
    }

    pub fn len_b(&self) -> usize {
        self.side_b.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    pub fn edges(&self) -> &[BiEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }

    pub fn edge_index(&self, edge: BiEdge) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    pub fn contains_edge(&self, edge: BiEdge) -> bool {
        self.edge_index(edge).is_some()
    }

    /// Same graph with the colouring dropped.
    pub fn uncolored(&self) -> Self {
        Self { colors: None, ..self.clone() }
    }

    /// Neighbour lists of one side, each sorted.
    pub fn neighbours(&self, side: Side) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.side(side).len()];
        for &(a, b) in &self.edges {
            match side {
                Side::A => adj[a].push(b),
                Side::B => adj[b].push(a),
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn max_degree(&self) -> usize {
        let da = self.neighbours(Side::A).iter().map(Vec::len).max().unwrap_or(0);
        let db = self.neighbours(Side::B).iter().map(Vec::len).max().unwrap_or(0);
        da.max(db)
    }

    /// Flattens to a [`SimpleGraph`]: side A keeps indices `0..n`, side B
    /// becomes `n..n+m`. Edge indices are preserved.
    pub fn to_simple(&self) -> SimpleGraph {
        let n = self.side_a.len();
        SimpleGraph {
            ids: self.side_a.iter().chain(self.side_b.iter()).cloned().collect(),
            edges: self.edges.iter().map(|&(a, b)| (a, n + b)).collect(),
        }
    }
}

pub(crate) fn default_ids(prefix: char, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Crossing test on raw index pairs.
pub fn edges_cross(e1: BiEdge, e2: BiEdge) -> bool {
    let ((i, j), (k, l)) = (e1, e2);
    (i < k && l < j) || (k < i && j < l)
}

/// Whether two edges of `g` cross with respect to the side orders.
pub fn crosses(e1: BiEdge, e2: BiEdge, g: &OrderedBipartiteGraph) -> Result<bool> {
    for e in [e1, e2] {
        if !g.contains_edge(e) {
            return Err(Error::input(format!("edge {e:?} is not in the graph")));
        }
    }
    Ok(edges_cross(e1, e2))
}

/// Two edges can share a monotone matching iff they are strictly increasing
/// in both coordinates relative to each other.
pub(crate) fn compatible(e1: BiEdge, e2: BiEdge) -> bool {
    (e1.0 < e2.0 && e1.1 < e2.1) || (e1.0 > e2.0 && e1.1 > e2.1)
}

/// Partition of the edges of a bipartite graph into matchings, each given as
/// a list of edge indices into `graph.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneDecomposition {
    pub graph: OrderedBipartiteGraph,
    pub matchings: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonotoneViolation {
    UnknownEdge { matching: usize, edge_index: usize },
    Uncovered { edge: BiEdge },
    Duplicated { edge: BiEdge, first: usize, second: usize },
    SharedEndpoint { matching: usize, first: BiEdge, second: BiEdge },
    Crossing { matching: usize, first: BiEdge, second: BiEdge },
}

impl MonotoneDecomposition {
    pub fn new(graph: OrderedBipartiteGraph, matchings: Vec<Vec<usize>>) -> Self {
        Self { graph, matchings }
    }

    /// Reads matchings from the graph's edge colours: colour `c` goes to
    /// matching `c - 1`. `count` fixes the number of matchings (colours above
    /// it are an error); `None` uses the largest colour.
    pub fn from_colors(graph: &OrderedBipartiteGraph, count: Option<usize>) -> Result<Self> {
        let colors = graph
            .colors()
            .ok_or_else(|| Error::input("graph has no edge colouring"))?;
        let max = colors.iter().copied().max().unwrap_or(0) as usize;
        let count = count.unwrap_or(max);
        if max > count {
            return Err(Error::input(format!("colour {max} exceeds {count} matchings")));
        }
        let mut matchings = vec![Vec::new(); count];
        for (i, &c) in colors.iter().enumerate() {
            matchings[c as usize - 1].push(i);
        }
        Ok(Self { graph: graph.uncolored(), matchings })
    }

    /// The graph with edge colours set from the matchings (1-based).
    pub fn to_colored_graph(&self) -> Result<OrderedBipartiteGraph> {
        let mut colors = vec![0u32; self.graph.edge_count()];
        for (m, matching) in self.matchings.iter().enumerate() {
            for &e in matching {
                if e >= colors.len() || colors[e] != 0 {
                    return Err(Error::input(format!("edge index {e} missing or repeated")));
                }
                colors[e] = m as u32 + 1;
            }
        }
        if colors.contains(&0) {
            return Err(Error::input("decomposition does not cover every edge"));
        }
        OrderedBipartiteGraph::with_colors(
            self.graph.side_a.clone(),
            self.graph.side_b.clone(),
            self.graph.edges.clone(),
            colors,
        )
    }

    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Number of non-empty matchings.
    pub fn used(&self) -> usize {
        self.matchings.iter().filter(|m| !m.is_empty()).count()
    }

    /// Appends empty matchings until there are `count`.
    pub fn padded(mut self, count: usize) -> Self {
        while self.matchings.len() < count {
            self.matchings.push(Vec::new());
        }
        self
    }

    /// Drops empty matchings.
    pub fn compacted(mut self) -> Self {
        self.matchings.retain(|m| !m.is_empty());
        self
    }

    pub fn matching_edges(&self, m: usize) -> impl Iterator<Item = BiEdge> + '_ {
        self.matchings[m].iter().map(|&e| self.graph.edges[e])
    }

    /// Input error naming the first violation, if any.
    pub fn ensure_valid(&self) -> Result<()> {
        match validate_monotone(self).first() {
            None => Ok(()),
            Some(v) => Err(Error::input(format!("invalid monotone decomposition: {v:?}"))),
        }
    }
}

/// Checks partition, matching and non-crossing conditions. Violations are
/// listed in scan order: coverage first, then each matching's pairs in
/// lexicographic order.
pub fn validate_monotone(d: &MonotoneDecomposition) -> ValidationReport<MonotoneViolation> {
    let mut report = ValidationReport::new();
    let edges = d.graph.edges();
    let mut owner: Vec<Option<usize>> = vec![None; edges.len()];
    for (m, matching) in d.matchings.iter().enumerate() {
        for &e in matching {
            if e >= edges.len() {
                if !report.push(MonotoneViolation::UnknownEdge { matching: m, edge_index: e }) {
                    return report;
                }
                continue;
            }
            match owner[e] {
                Some(first) => {
                    if !report.push(MonotoneViolation::Duplicated { edge: edges[e], first, second: m }) {
                        return report;
                    }
                }
                None => owner[e] = Some(m),
            }
        }
    }
    for (e, o) in owner.iter().enumerate() {
        if o.is_none() && !report.push(MonotoneViolation::Uncovered { edge: edges[e] }) {
            return report;
        }
    }
    for (m, matching) in d.matchings.iter().enumerate() {
        let mut members: Vec<BiEdge> = matching
            .iter()
            .filter(|&&e| e < edges.len())
            .map(|&e| edges[e])
            .collect();
        members.sort_unstable();
        members.dedup();
        for (x, &first) in members.iter().enumerate() {
            for &second in &members[x + 1..] {
                let violation = if first.0 == second.0 || first.1 == second.1 {
                    Some(MonotoneViolation::SharedEndpoint { matching: m, first, second })
                } else if edges_cross(first, second) {
                    Some(MonotoneViolation::Crossing { matching: m, first, second })
                } else {
                    None
                };
                if let Some(v) = violation {
                    if !report.push(v) {
                        return report;
                    }
                }
            }
        }
    }
    report
}

/// First-fit decomposition: edges in lexicographic order, each into the
/// first matching that admits it.
pub fn decompose_monotone_greedy(g: &OrderedBipartiteGraph) -> MonotoneDecomposition {
    let edges = g.edges();
    let mut matchings: Vec<Vec<usize>> = Vec::new();
    for (e, &edge) in edges.iter().enumerate() {
        let slot = matchings
            .iter()
            .position(|m| m.iter().all(|&f| compatible(edges[f], edge)));
        match slot {
            Some(i) => matchings[i].push(e),
            None => matchings.push(vec![e]),
        }
    }
    MonotoneDecomposition::new(g.uncolored(), matchings)
}

/// Minimum monotone decomposition by branch-and-bound.
///
/// Edges are assigned in lexicographic order to an existing matching or to
/// a fresh one; a branch is cut once it cannot beat the incumbent (seeded by
/// the greedy solution). Fails with a capacity error above `limit` edges.
pub fn decompose_monotone_exact(g: &OrderedBipartiteGraph, limit: usize) -> Result<MonotoneDecomposition> {
    let edges = g.edges();
    if edges.len() > limit {
        return Err(Error::Capacity { what: "edge count", actual: edges.len(), limit });
    }
    let greedy = decompose_monotone_greedy(g);
    let lower = g.max_degree();
    if greedy.len() <= lower {
        return Ok(greedy);
    }

    struct Search<'a> {
        edges: &'a [BiEdge],
        lower: usize,
        best: Vec<Vec<usize>>,
        current: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn run(&mut self, e: usize) -> bool {
            if self.current.len() >= self.best.len() {
                return false;
            }
            if e == self.edges.len() {
                self.best = self.current.clone();
                return self.best.len() <= self.lower;
            }
            let edge = self.edges[e];
            for i in 0..self.current.len() {
                if self.current[i].iter().all(|&f| compatible(self.edges[f], edge)) {
                    self.current[i].push(e);
                    let done = self.run(e + 1);
                    self.current[i].pop();
                    if done {
                        return true;
                    }
                }
            }
            if self.current.len() + 1 < self.best.len() {
                self.current.push(vec![e]);
                let done = self.run(e + 1);
                self.current.pop();
                if done {
                    return true;
                }
            }
            false
        }
    }

    let mut search = Search { edges, lower, best: greedy.matchings, current: Vec::new() };
    search.run(0);
    Ok(MonotoneDecomposition::new(g.uncolored(), search.best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> OrderedBipartiteGraph {
        let edges = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        OrderedBipartiteGraph::with_sizes(n, n, edges).unwrap()
    }

    #[test]
    fn crossing_examples() {
        let g = k(2);
        assert!(crosses((0, 1), (1, 0), &g).unwrap());
        assert!(!crosses((0, 0), (1, 1), &g).unwrap());
        assert!(!crosses((0, 1), (0, 1), &g).unwrap());
    }

    #[test]
    fn crossing_rejects_unknown_edge() {
        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0)]).unwrap();
        assert!(matches!(crosses((0, 0), (1, 1), &g), Err(Error::Input(_))));
    }

    #[test]
    fn validate_examples() {
        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert!(validate_monotone(&MonotoneDecomposition::new(g, vec![vec![0, 1]])).is_valid());

        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 1), (1, 0)]).unwrap();
        let r = validate_monotone(&MonotoneDecomposition::new(g, vec![vec![0, 1]]));
        assert_eq!(
            r.violations(),
            &[MonotoneViolation::Crossing { matching: 0, first: (0, 1), second: (1, 0) }]
        );

        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (0, 1)]).unwrap();
        let r = validate_monotone(&MonotoneDecomposition::new(g, vec![vec![0, 1]]));
        assert!(matches!(r.first(), Some(MonotoneViolation::SharedEndpoint { .. })));
    }

    #[test]
    fn validate_reports_coverage_problems() {
        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (1, 1)]).unwrap();
        let r = validate_monotone(&MonotoneDecomposition::new(g, vec![vec![0, 0], vec![7]]));
        assert_eq!(
            r.violations(),
            &[
                MonotoneViolation::Duplicated { edge: (0, 0), first: 0, second: 0 },
                MonotoneViolation::UnknownEdge { matching: 1, edge_index: 7 },
                MonotoneViolation::Uncovered { edge: (1, 1) },
            ]
        );
    }

    #[test]
    fn greedy_examples() {
        let empty = OrderedBipartiteGraph::with_sizes(3, 3, []).unwrap();
        assert_eq!(decompose_monotone_greedy(&empty).len(), 0);
        let perfect = OrderedBipartiteGraph::with_sizes(4, 4, (0..4).map(|i| (i, i))).unwrap();
        assert_eq!(decompose_monotone_greedy(&perfect).len(), 1);
        assert_eq!(decompose_monotone_greedy(&k(2)).len(), 3);
    }

    #[test]
    fn exact_guard() {
        assert!(matches!(
            decompose_monotone_exact(&k(5), DEFAULT_EXACT_LIMIT),
            Err(Error::Capacity { actual: 25, limit: 20, .. })
        ));
        let one = OrderedBipartiteGraph::with_sizes(1, 1, [(0, 0)]).unwrap();
        assert_eq!(decompose_monotone_exact(&one, DEFAULT_EXACT_LIMIT).unwrap().len(), 1);
    }

    #[test]
    fn duplicate_insertion_is_idempotent() {
        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(1, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 0)]);
        let c = OrderedBipartiteGraph::with_colors(
            default_ids('a', 1),
            default_ids('b', 1),
            vec![(0, 0), (0, 0)],
            vec![1, 2],
        );
        assert!(c.is_err());
    }

    #[test]
    fn ids_must_be_unique_across_sides() {
        let r = OrderedBipartiteGraph::new(vec!["x".into()], vec!["x".into()], []);
        assert!(r.is_err());
    }

    #[test]
    fn colour_roundtrip() {
        let d = decompose_monotone_greedy(&k(3));
        let colored = d.to_colored_graph().unwrap();
        let back = MonotoneDecomposition::from_colors(&colored, None).unwrap();
        assert_eq!(back, d);
    }
}
