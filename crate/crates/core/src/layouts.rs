//! Book, queue and track layouts.
//!
//! The validators here are the brute-force pairwise scans; nothing else in
//! the crate decides whether a layout is valid.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MonotoneDecomposition, SimpleGraph};
use crate::report::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutMode {
    Book,
    Queue,
}

impl fmt::Display for LayoutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutMode::Book => f.write_str("book"),
            LayoutMode::Queue => f.write_str("queue"),
        }
    }
}

/// A vertex order plus a partition of the edges into pages (book mode) or
/// queues (queue mode). `parts` hold edge indices into `graph.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearLayout {
    pub graph: SimpleGraph,
    pub order: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub mode: LayoutMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LayoutViolation {
    /// `order` is not a permutation of the vertices.
    BadOrder { vertex: usize },
    UnknownEdge { part: usize, edge_index: usize },
    Uncovered { edge: (usize, usize) },
    Duplicated { edge: (usize, usize), first: usize, second: usize },
    /// Two edges of one page cross (`a < c < b < d`).
    Crossing { part: usize, first: (usize, usize), second: (usize, usize) },
    /// Two edges of one queue nest (`a < c < d < b`).
    Nesting { part: usize, first: (usize, usize), second: (usize, usize) },
}

impl LinearLayout {
    pub fn new(graph: SimpleGraph, order: Vec<usize>, parts: Vec<Vec<usize>>, mode: LayoutMode) -> Self {
        Self { graph, order, parts, mode }
    }

    /// Position of each vertex in `order`; `None` if `order` is not a
    /// permutation.
    pub fn positions(&self) -> Option<Vec<usize>> {
        permutation_positions(&self.order, self.graph.vertex_count()).ok()
    }

    /// Part index of each edge, when the parts form a partition.
    pub fn part_of_edges(&self) -> Option<Vec<usize>> {
        let mut owner = vec![usize::MAX; self.graph.edge_count()];
        for (p, part) in self.parts.iter().enumerate() {
            for &e in part {
                if e >= owner.len() || owner[e] != usize::MAX {
                    return None;
                }
                owner[e] = p;
            }
        }
        owner.iter().all(|&o| o != usize::MAX).then_some(owner)
    }
}

/// Positions of a permutation, or the first offending vertex.
fn permutation_positions(order: &[usize], n: usize) -> std::result::Result<Vec<usize>, usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(v);
        }
        pos[v] = i;
    }
    match pos.iter().position(|&p| p == usize::MAX) {
        Some(v) => Err(v),
        None => Ok(pos),
    }
}

/// Brute-force layout check: every same-part edge pair is compared.
pub fn validate_layout(layout: &LinearLayout) -> ValidationReport<LayoutViolation> {
    let mut report = ValidationReport::new();
    let g = &layout.graph;
    let pos = match permutation_positions(&layout.order, g.vertex_count()) {
        Ok(pos) => pos,
        Err(vertex) => {
            report.push(LayoutViolation::BadOrder { vertex });
            return report;
        }
    };

    let mut owner = vec![usize::MAX; g.edge_count()];
    for (p, part) in layout.parts.iter().enumerate() {
        for &e in part {
            if e >= owner.len() {
                if !report.push(LayoutViolation::UnknownEdge { part: p, edge_index: e }) {
                    return report;
                }
            } else if owner[e] != usize::MAX {
                if !report.push(LayoutViolation::Duplicated { edge: g.edge(e), first: owner[e], second: p }) {
                    return report;
                }
            } else {
                owner[e] = p;
            }
        }
    }
    for (e, &o) in owner.iter().enumerate() {
        if o == usize::MAX && !report.push(LayoutViolation::Uncovered { edge: g.edge(e) }) {
            return report;
        }
    }

    for (p, part) in layout.parts.iter().enumerate() {
        let mut members: Vec<usize> = part.iter().copied().filter(|&e| e < g.edge_count()).collect();
        members.sort_unstable();
        members.dedup();
        let spans: Vec<(usize, usize)> = members
            .iter()
            .map(|&e| {
                let (u, v) = g.edge(e);
                (pos[u].min(pos[v]), pos[u].max(pos[v]))
            })
            .collect();
        for x in 0..members.len() {
            for y in x + 1..members.len() {
                let (first, second) = (g.edge(members[x]), g.edge(members[y]));
                let violation = match layout.mode {
                    LayoutMode::Book if spans_cross(spans[x], spans[y]) => {
                        Some(LayoutViolation::Crossing { part: p, first, second })
                    }
                    LayoutMode::Queue if spans_nest(spans[x], spans[y]) => {
                        Some(LayoutViolation::Nesting { part: p, first, second })
                    }
                    _ => None,
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

fn spans_cross((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

fn spans_nest((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && d < b) || (c < a && b < d)
}

/// Valid book layout whose pages are all matchings.
pub fn validate_pushdown(layout: &LinearLayout) -> Result<bool> {
    if layout.mode != LayoutMode::Book {
        return Err(Error::input("pushdown check needs a book layout"));
    }
    if !validate_layout(layout).is_valid() {
        return Ok(false);
    }
    let g = &layout.graph;
    for part in &layout.parts {
        let mut used = vec![false; g.vertex_count()];
        for &e in part {
            let (u, v) = g.edge(e);
            if used[u] || used[v] {
                return Ok(false);
            }
            used[u] = true;
            used[v] = true;
        }
    }
    Ok(true)
}

/// Vertices `p` with two same-queue edges `pq`, `pr` where `q` and `r` lie
/// on the same side of `p`, as `(p, q, r)` with `q` before `r`.
pub fn strict_queue_conflicts(layout: &LinearLayout) -> Result<Vec<(usize, usize, usize)>> {
    if layout.mode != LayoutMode::Queue {
        return Err(Error::input("strict queue check needs a queue layout"));
    }
    let pos = layout
        .positions()
        .ok_or_else(|| Error::input("order is not a permutation"))?;
    let owner = layout
        .part_of_edges()
        .ok_or_else(|| Error::input("parts do not partition the edges"))?;
    let g = &layout.graph;
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((v, owner[e]));
        incident[v].push((u, owner[e]));
    }
    let mut conflicts = Vec::new();
    for p in layout.order.iter().copied() {
        let mut nbrs = incident[p].clone();
        nbrs.sort_by_key(|&(q, _)| pos[q]);
        for (x, &(q, pq)) in nbrs.iter().enumerate() {
            for &(r, pr) in &nbrs[x + 1..] {
                let same_side = (pos[q] > pos[p]) == (pos[r] > pos[p]);
                if same_side && pq == pr {
                    conflicts.push((p, q, r));
                }
            }
        }
    }
    Ok(conflicts)
}

/// Valid queue layout where same-side edge pairs at a vertex use distinct
/// queues.
pub fn validate_strict_queue(layout: &LinearLayout) -> Result<bool> {
    if layout.mode != LayoutMode::Queue {
        return Err(Error::input("strict queue check needs a queue layout"));
    }
    if !validate_layout(layout).is_valid() {
        return Ok(false);
    }
    Ok(strict_queue_conflicts(layout)?.is_empty())
}

/// Ordered tracks; each track lists vertex indices in track order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackLayout {
    pub tracks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrackViolation {
    UnknownVertex { track: usize, vertex: usize },
    Repeated { vertex: usize, first: usize, second: usize },
    /// Edge with both ends on one track.
    NotIndependent { track: usize, edge: (usize, usize) },
    /// Edges `vw`, `xy` between tracks `lower < upper` with `v ≺ x` and
    /// `y ≺ w`, each written lower-track end first.
    Crossing { lower: usize, upper: usize, first: (usize, usize), second: (usize, usize) },
}

/// `(track, position)` of each vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackSlot {
    pub track: usize,
    pub position: usize,
}

impl TrackLayout {
    pub fn new(tracks: Vec<Vec<usize>>) -> Self {
        Self { tracks }
    }

    /// Slot of every vertex; `None` entries for uncovered vertices.
    pub fn assignment(&self, n: usize) -> Vec<Option<TrackSlot>> {
        let mut slots = vec![None; n];
        for (t, track) in self.tracks.iter().enumerate() {
            for (i, &v) in track.iter().enumerate() {
                if v < n && slots[v].is_none() {
                    slots[v] = Some(TrackSlot { track: t, position: i });
                }
            }
        }
        slots
    }

    fn full_assignment(&self, g: &SimpleGraph) -> Result<Vec<TrackSlot>> {
        self.assignment(g.vertex_count())
            .into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or_else(|| Error::input(format!("vertex {} is on no track", g.id(v)))))
            .collect()
    }
}

/// Brute-force track layout check.
pub fn validate_track(layout: &TrackLayout, g: &SimpleGraph) -> Result<ValidationReport<TrackViolation>> {
    let slots = layout.full_assignment(g)?;
    let mut report = ValidationReport::new();
    let mut seen = vec![usize::MAX; g.vertex_count()];
    for (t, track) in layout.tracks.iter().enumerate() {
        for &v in track {
            if v >= g.vertex_count() {
                if !report.push(TrackViolation::UnknownVertex { track: t, vertex: v }) {
                    return Ok(report);
                }
            } else if seen[v] != usize::MAX {
                if !report.push(TrackViolation::Repeated { vertex: v, first: seen[v], second: t }) {
                    return Ok(report);
                }
            } else {
                seen[v] = t;
            }
        }
    }

    // Orient each edge lower track first and bucket by track pair.
    let mut buckets: std::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>> = Default::default();
    for &(u, v) in g.edges() {
        let (su, sv) = (slots[u], slots[v]);
        if su.track == sv.track {
            if !report.push(TrackViolation::NotIndependent { track: su.track, edge: (u, v) }) {
                return Ok(report);
            }
            continue;
        }
        let (x, y) = if su.track < sv.track { (u, v) } else { (v, u) };
        buckets.entry((slots[x].track, slots[y].track)).or_default().push((x, y));
    }
    for ((lower, upper), edges) in buckets {
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let ((v, w), (x, y)) = (edges[i], edges[j]);
                let (pv, pw, px, py) = (slots[v].position, slots[w].position, slots[x].position, slots[y].position);
                if (pv < px && py < pw) || (px < pv && pw < py) {
                    let c = TrackViolation::Crossing { lower, upper, first: edges[i], second: edges[j] };
                    if !report.push(c) {
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Whether every vertex has its neighbours on pairwise distinct tracks.
pub fn neighbours_on_distinct_tracks(layout: &TrackLayout, g: &SimpleGraph) -> Result<bool> {
    let slots = layout.full_assignment(g)?;
    for nbrs in g.adjacency() {
        let mut tracks: Vec<usize> = nbrs.iter().map(|&q| slots[q].track).collect();
        tracks.sort_unstable();
        if tracks.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the edges between every pair of tracks form a monotone matching
/// (no shared endpoints, no crossing).
pub fn track_pairs_are_monotone_matchings(layout: &TrackLayout, g: &SimpleGraph) -> Result<bool> {
    if !validate_track(layout, g)?.is_valid() {
        return Ok(false);
    }
    let slots = layout.full_assignment(g)?;
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in g.edges() {
        if !seen.insert((u, slots[v].track)) || !seen.insert((v, slots[u].track)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Book layout `v_1..v_n, w_m..w_1` with one page per matching.
pub fn monotone_to_book(d: &MonotoneDecomposition) -> Result<LinearLayout> {
    d.ensure_valid()?;
    let (n, m) = (d.graph.len_a(), d.graph.len_b());
    let order = (0..n).chain((n..n + m).rev()).collect();
    Ok(LinearLayout::new(d.graph.to_simple(), order, d.matchings.clone(), LayoutMode::Book))
}

/// Queue layout `v_1..v_n, w_1..w_m` with one queue per matching.
pub fn monotone_to_queue(d: &MonotoneDecomposition) -> Result<LinearLayout> {
    d.ensure_valid()?;
    let (n, m) = (d.graph.len_a(), d.graph.len_b());
    let order = (0..n + m).collect();
    Ok(LinearLayout::new(d.graph.to_simple(), order, d.matchings.clone(), LayoutMode::Queue))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{decompose_monotone_exact, OrderedBipartiteGraph};

    fn path4(edges: &[(usize, usize)], mode: LayoutMode) -> LinearLayout {
        let g = SimpleGraph::with_vertex_count(4, edges.iter().copied()).unwrap();
        let parts = vec![(0..g.edge_count()).collect()];
        LinearLayout::new(g, vec![0, 1, 2, 3], parts, mode)
    }

    #[test]
    fn book_crossing_is_reported() {
        let r = validate_layout(&path4(&[(0, 2), (1, 3)], LayoutMode::Book));
        assert_eq!(
            r.violations(),
            &[LayoutViolation::Crossing { part: 0, first: (0, 2), second: (1, 3) }]
        );
    }

    #[test]
    fn queue_nesting_is_reported() {
        let r = validate_layout(&path4(&[(0, 3), (1, 2)], LayoutMode::Queue));
        assert_eq!(
            r.violations(),
            &[LayoutViolation::Nesting { part: 0, first: (0, 3), second: (1, 2) }]
        );
    }

    #[test]
    fn queue_allows_crossing() {
        assert!(validate_layout(&path4(&[(0, 2), (1, 3)], LayoutMode::Queue)).is_valid());
    }

    #[test]
    fn structural_violations() {
        let mut l = path4(&[(0, 1), (2, 3)], LayoutMode::Book);
        l.order = vec![0, 1, 1, 3];
        assert!(matches!(validate_layout(&l).first(), Some(LayoutViolation::BadOrder { .. })));
        let mut l = path4(&[(0, 1), (2, 3)], LayoutMode::Book);
        l.parts = vec![vec![0]];
        assert_eq!(validate_layout(&l).violations(), &[LayoutViolation::Uncovered { edge: (2, 3) }]);
    }

    #[test]
    fn pushdown_examples() {
        assert!(validate_pushdown(&path4(&[(0, 1), (2, 3)], LayoutMode::Book)).unwrap());
        assert!(!validate_pushdown(&path4(&[(0, 1), (0, 2)], LayoutMode::Book)).unwrap());
        assert!(validate_pushdown(&path4(&[(0, 1)], LayoutMode::Queue)).is_err());
    }

    #[test]
    fn strict_queue_examples() {
        let g = SimpleGraph::with_vertex_count(3, [(0, 1), (1, 2)]).unwrap();
        let path = LinearLayout::new(g, vec![0, 1, 2], vec![vec![0, 1]], LayoutMode::Queue);
        assert!(validate_strict_queue(&path).unwrap());

        let g = SimpleGraph::with_vertex_count(3, [(0, 1), (0, 2)]).unwrap();
        let star = LinearLayout::new(g, vec![0, 1, 2], vec![vec![0, 1]], LayoutMode::Queue);
        assert!(!validate_strict_queue(&star).unwrap());
        assert_eq!(strict_queue_conflicts(&star).unwrap(), vec![(0, 1, 2)]);
        let split = LinearLayout { parts: vec![vec![0], vec![1]], ..star };
        assert!(validate_strict_queue(&split).unwrap());
    }

    #[test]
    fn track_examples() {
        let g = SimpleGraph::with_vertex_count(4, [(0, 2), (1, 3)]).unwrap();
        let ok = TrackLayout::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(validate_track(&ok, &g).unwrap().is_valid());
        let g = SimpleGraph::with_vertex_count(4, [(0, 3), (1, 2)]).unwrap();
        let r = validate_track(&ok, &g).unwrap();
        assert_eq!(
            r.violations(),
            &[TrackViolation::Crossing { lower: 0, upper: 1, first: (0, 3), second: (1, 2) }]
        );
        let partial = TrackLayout::new(vec![vec![0, 1], vec![2]]);
        assert!(matches!(validate_track(&partial, &g), Err(Error::Input(_))));
        let dependent = TrackLayout::new(vec![vec![0, 3], vec![1, 2]]);
        assert!(matches!(
            validate_track(&dependent, &g).unwrap().first(),
            Some(TrackViolation::NotIndependent { .. })
        ));
    }

    #[test]
    fn conversions() {
        let one = OrderedBipartiteGraph::with_sizes(3, 3, [(0, 0), (1, 2)]).unwrap();
        let d = MonotoneDecomposition::new(one, vec![vec![0, 1]]);
        let book = monotone_to_book(&d).unwrap();
        assert_eq!(book.order, vec![0, 1, 2, 5, 4, 3]);
        assert!(validate_pushdown(&book).unwrap());
        let queue = monotone_to_queue(&d).unwrap();
        assert!(validate_layout(&queue).is_valid());

        let empty = OrderedBipartiteGraph::with_sizes(0, 0, []).unwrap();
        let d = MonotoneDecomposition::new(empty, vec![]);
        let book = monotone_to_book(&d).unwrap();
        assert!(book.order.is_empty() && book.parts.is_empty());

        let k22 = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let d = decompose_monotone_exact(&k22, 20).unwrap();
        let q = monotone_to_queue(&d).unwrap();
        assert_eq!(q.parts.len(), 3);
        assert!(validate_layout(&q).is_valid());
    }

    #[test]
    fn conversion_rejects_invalid_decomposition() {
        let g = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 1), (1, 0)]).unwrap();
        let d = MonotoneDecomposition::new(g, vec![vec![0, 1]]);
        assert!(matches!(monotone_to_book(&d), Err(Error::Input(_))));
        assert!(matches!(monotone_to_queue(&d), Err(Error::Input(_))));
    }
}
