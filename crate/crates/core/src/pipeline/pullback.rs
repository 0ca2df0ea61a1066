//! Wall layouts pulled back to `G'` through the track embedding.

use std::cmp::Ordering;

use serde::Serialize;

use super::PipelineGraph;
use crate::error::Result;
use crate::graph::{validate_monotone, MonotoneDecomposition, OrderedBipartiteGraph};
use crate::layouts::{
    monotone_to_book, neighbours_on_distinct_tracks, track_pairs_are_monotone_matchings, validate_layout,
    validate_pushdown, validate_strict_queue, validate_track, LayoutMode, LinearLayout, TrackLayout,
};
use crate::wall::{column_order, diagonal_order, edge_colour, is_even, track_of, Coord};

/// Sorts `G'` vertices by the wall order of their track, then seed order.
fn sorted(p: &PipelineGraph, coords: &[Coord], vs: impl Iterator<Item = usize>, order: fn(Coord, Coord) -> Ordering) -> Vec<usize> {
    let mut vs: Vec<usize> = vs.collect();
    vs.sort_by(|&u, &v| {
        order(coords[p.track_of[u]], coords[p.track_of[v]]).then(p.vertices[u].orig.cmp(&p.vertices[v].orig))
    });
    vs
}

/// Three monotone matchings: X and Y are each ordered by the diagonal
/// order of their tracks, and every edge takes the red/blue/green colour of
/// its wall edge.
pub fn layout_3monotone(p: &PipelineGraph) -> Result<MonotoneDecomposition> {
    let coords = p.coords()?;
    let len_x = p.gprime.len_a();
    let flat = p.gprime.to_simple();
    let xs = sorted(p, coords, 0..len_x, diagonal_order);
    let ys = sorted(p, coords, len_x..flat.vertex_count(), diagonal_order);
    let mut rank = vec![0; flat.vertex_count()];
    for (i, &v) in xs.iter().chain(ys.iter()).enumerate() {
        rank[v] = if i < xs.len() { i } else { i - xs.len() };
    }
    let mut edges = Vec::with_capacity(flat.edge_count());
    let mut colours = Vec::with_capacity(flat.edge_count());
    for &(x, y) in flat.edges() {
        let (cx, cy) = (coords[p.track_of[x]], coords[p.track_of[y]]);
        debug_assert!(is_even(cx) && !is_even(cy));
        edges.push((rank[x], rank[y]));
        colours.push(edge_colour(cx, cy).expect("H edges are wall edges"));
    }
    let g = OrderedBipartiteGraph::with_colors(
        xs.iter().map(|&v| flat.id(v).to_string()).collect(),
        ys.iter().map(|&v| flat.id(v).to_string()).collect(),
        edges,
        colours,
    )?;
    MonotoneDecomposition::from_colors(&g, Some(3))
}

/// Two queues: all vertices by the diagonal order of their tracks;
/// horizontal wall edges in queue 0, vertical ones in queue 1.
pub fn layout_2queue(p: &PipelineGraph) -> Result<LinearLayout> {
    let coords = p.coords()?;
    let flat = p.gprime.to_simple();
    let order = sorted(p, coords, 0..flat.vertex_count(), diagonal_order);
    let mut parts = vec![Vec::new(), Vec::new()];
    for (e, &(u, v)) in flat.edges().iter().enumerate() {
        let vertical = coords[p.track_of[u]].0 == coords[p.track_of[v]].0;
        parts[usize::from(vertical)].push(e);
    }
    Ok(LinearLayout::new(flat, order, parts, LayoutMode::Queue))
}

/// Four tracks by `(x + 2y) mod 4` of the wall coordinate, each in column
/// order.
pub fn layout_4track(p: &PipelineGraph) -> Result<TrackLayout> {
    let coords = p.coords()?;
    let n = p.vertices.len();
    let mut tracks = vec![Vec::new(); 4];
    for v in sorted(p, coords, 0..n, column_order) {
        tracks[track_of(coords[p.track_of[v]])].push(v);
    }
    Ok(TrackLayout::new(tracks))
}

/// Outcome of re-validating the three layouts directly on `G'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutChecks {
    pub max_degree: usize,
    pub monotone_matchings: usize,
    pub monotone_valid: bool,
    pub pushdown_valid: bool,
    pub queue_valid: bool,
    pub queue_strict: bool,
    pub track_valid: bool,
    pub distinct_neighbour_tracks: bool,
    pub track_pairs_monotone: bool,
}

impl LayoutChecks {
    pub fn all_valid(&self) -> bool {
        self.max_degree <= 3
            && self.monotone_matchings <= 3
            && self.monotone_valid
            && self.pushdown_valid
            && self.queue_valid
            && self.queue_strict
            && self.track_valid
            && self.distinct_neighbour_tracks
            && self.track_pairs_monotone
    }
}

pub fn verify_layouts(p: &PipelineGraph) -> Result<LayoutChecks> {
    let monotone = layout_3monotone(p)?;
    let queue = layout_2queue(p)?;
    let tracks = layout_4track(p)?;
    let flat = p.gprime.to_simple();
    let monotone_valid = validate_monotone(&monotone).is_valid();
    let pushdown_valid = monotone_valid && validate_pushdown(&monotone_to_book(&monotone)?)?;
    Ok(LayoutChecks {
        max_degree: flat.max_degree(),
        monotone_matchings: monotone.used(),
        monotone_valid,
        pushdown_valid,
        queue_valid: validate_layout(&queue).is_valid(),
        queue_strict: validate_strict_queue(&queue)?,
        track_valid: validate_track(&tracks, &flat)?.is_valid(),
        distinct_neighbour_tracks: neighbours_on_distinct_tracks(&tracks, &flat)?,
        track_pairs_monotone: track_pairs_are_monotone_matchings(&tracks, &flat)?,
    })
}

#[cfg(test)]
mod tests {
    use super::super::main_construct;
    use super::*;
    use crate::error::Error;
    use crate::graph::decompose_monotone_greedy;
    use crate::rational::int;

    fn construct(n: usize) -> PipelineGraph {
        let edges = (0..n).flat_map(|a| [(a, a), (a, (a + 1) % n)]);
        let g = OrderedBipartiteGraph::with_sizes(n, n, edges).unwrap();
        main_construct(&decompose_monotone_greedy(&g), 3, int(1)).unwrap()
    }

    #[test]
    fn layouts_need_an_embedding() {
        let p = construct(3);
        assert!(matches!(layout_2queue(&p), Err(Error::State(_))));
    }

    #[test]
    fn pulled_back_layouts_validate() {
        let mut p = construct(4);
        p.embed().unwrap();
        let checks = verify_layouts(&p).unwrap();
        assert!(checks.all_valid(), "{checks:?}");
        assert_eq!(checks.max_degree, 3);
    }
}
