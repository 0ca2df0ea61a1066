//! Finite patches of the wall.
//!
//! The wall has a vertex at every integer point, every horizontal edge
//! `(x,y)(x+1,y)`, and the vertical edge `(x,y)(x,y+1)` whenever `x+y` is
//! even. A vertex is *even* when `x+y` is even; every edge has exactly one
//! even end.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{MonotoneDecomposition, OrderedBipartiteGraph, SimpleGraph};
use crate::layouts::{LayoutMode, LinearLayout, TrackLayout};

pub type Coord = (i64, i64);

pub const RED: u32 = 1;
pub const BLUE: u32 = 2;
pub const GREEN: u32 = 3;

pub fn is_even(p: Coord) -> bool {
    (p.0 + p.1).rem_euclid(2) == 0
}

/// Diagonal order: by `x+y`, then by `x`.
pub fn diagonal_order(p: Coord, q: Coord) -> Ordering {
    (p.0 + p.1, p.0).cmp(&(q.0 + q.1, q.0))
}

/// Column order: by `x`, then by `y`.
pub fn column_order(p: Coord, q: Coord) -> Ordering {
    p.cmp(&q)
}

/// Whether `p` and `q` are adjacent in the infinite wall.
pub fn wall_adjacent(p: Coord, q: Coord) -> bool {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    match (dx.abs(), dy.abs()) {
        (1, 0) => true,
        (0, 1) => is_even(if dy == 1 { p } else { q }),
        _ => false,
    }
}

/// Red, blue or green, seen from the even end; `None` for non-edges.
pub fn edge_colour(p: Coord, q: Coord) -> Option<u32> {
    if !wall_adjacent(p, q) {
        return None;
    }
    let (even, odd) = if is_even(p) { (p, q) } else { (q, p) };
    Some(if odd.0 == even.0 + 1 {
        RED
    } else if odd.0 == even.0 - 1 {
        BLUE
    } else {
        GREEN
    })
}

/// Track of the 4-track layout: `(x + 2y) mod 4`.
pub fn track_of(p: Coord) -> usize {
    (p.0 + 2 * p.1).rem_euclid(4) as usize
}

/// The box `[x0, x1] × [y0, y1]`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallPatch {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl WallPatch {
    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Result<Self> {
        if x1 < x0 || y1 < y0 {
            return Err(Error::input(format!("empty patch [{x0},{x1}]x[{y0},{y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// The `w × h` patch with its corner at the origin.
    pub fn sized(w: usize, h: usize) -> Result<Self> {
        if w == 0 || h == 0 {
            return Err(Error::input("patch sides must be positive"));
        }
        Self::new(0, w as i64 - 1, 0, h as i64 - 1)
    }

    /// Smallest patch containing every point.
    pub fn bounding(points: impl IntoIterator<Item = Coord>) -> Result<Self> {
        let mut it = points.into_iter();
        let first = it.next().ok_or_else(|| Error::input("no points"))?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.0, first.0, first.1, first.1);
        for (x, y) in it {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        Self::new(x0, x1, y0, y1)
    }

    fn height(&self) -> usize {
        (self.y1 - self.y0 + 1) as usize
    }

    pub fn contains(&self, p: Coord) -> bool {
        (self.x0..=self.x1).contains(&p.0) && (self.y0..=self.y1).contains(&p.1)
    }

    pub fn vertex_count(&self) -> usize {
        (self.x1 - self.x0 + 1) as usize * self.height()
    }

    /// Vertices in column order; the position is the vertex index.
    pub fn vertices(&self) -> Vec<Coord> {
        (self.x0..=self.x1)
            .flat_map(|x| (self.y0..=self.y1).map(move |y| (x, y)))
            .collect()
    }

    pub fn index(&self, p: Coord) -> Option<usize> {
        self.contains(p)
            .then(|| (p.0 - self.x0) as usize * self.height() + (p.1 - self.y0) as usize)
    }

    /// Edges with both ends in the box, each as `(p, q)` with `p` before
    /// `q` in column order.
    pub fn edges(&self) -> Vec<(Coord, Coord)> {
        let mut out = Vec::new();
        for p in self.vertices() {
            for q in [(p.0 + 1, p.1), (p.0, p.1 + 1)] {
                if self.contains(q) && wall_adjacent(p, q) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn id(p: Coord) -> String {
        format!("{},{}", p.0, p.1)
    }

    pub fn graph(&self) -> SimpleGraph {
        let ids = self.vertices().into_iter().map(Self::id).collect();
        let edges = self.edges().into_iter().map(|(p, q)| {
            (self.index(p).expect("in patch"), self.index(q).expect("in patch"))
        });
        SimpleGraph::new(ids, edges).expect("wall patches are simple")
    }
}

fn sorted_by(mut points: Vec<Coord>, order: fn(Coord, Coord) -> Ordering) -> Vec<Coord> {
    points.sort_by(|&p, &q| order(p, q));
    points
}

/// Three monotone matchings: A is the even vertices and B the odd ones,
/// both in diagonal order; colours are red, blue and green.
pub fn wall_monotone_layout(w: &WallPatch) -> MonotoneDecomposition {
    let vertices = w.vertices();
    let evens = sorted_by(vertices.iter().copied().filter(|&p| is_even(p)).collect(), diagonal_order);
    let odds = sorted_by(vertices.iter().copied().filter(|&p| !is_even(p)).collect(), diagonal_order);
    let pos = |list: &[Coord], p: Coord| list.binary_search_by(|&q| diagonal_order(q, p)).expect("listed");
    let mut edges = Vec::new();
    let mut colours = Vec::new();
    for (p, q) in w.edges() {
        let (even, odd) = if is_even(p) { (p, q) } else { (q, p) };
        edges.push((pos(&evens, even), pos(&odds, odd)));
        colours.push(edge_colour(p, q).expect("wall edge"));
    }
    let g = OrderedBipartiteGraph::with_colors(
        evens.into_iter().map(WallPatch::id).collect(),
        odds.into_iter().map(WallPatch::id).collect(),
        edges,
        colours,
    )
    .expect("wall colouring is consistent");
    MonotoneDecomposition::from_colors(&g, Some(3)).expect("colours are in 1..=3")
}

/// All vertices in diagonal order; horizontal edges in queue 0, vertical
/// edges in queue 1.
pub fn wall_queue_layout(w: &WallPatch) -> LinearLayout {
    let g = w.graph();
    let order = sorted_by(w.vertices(), diagonal_order)
        .into_iter()
        .map(|p| w.index(p).expect("in patch"))
        .collect();
    let vertices = w.vertices();
    let mut parts = vec![Vec::new(), Vec::new()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let vertical = vertices[u].0 == vertices[v].0;
        parts[usize::from(vertical)].push(e);
    }
    LinearLayout::new(g, order, parts, LayoutMode::Queue)
}

/// Four tracks by `(x + 2y) mod 4`, each in column order.
pub fn wall_track_layout(w: &WallPatch) -> TrackLayout {
    let mut tracks = vec![Vec::new(); 4];
    for p in w.vertices() {
        tracks[track_of(p)].push(w.index(p).expect("in patch"));
    }
    TrackLayout::new(tracks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_monotone;
    use crate::layouts::{neighbours_on_distinct_tracks, validate_layout, validate_strict_queue, validate_track};

    #[test]
    fn orders() {
        assert_eq!(diagonal_order((0, 0), (1, 0)), Ordering::Less);
        assert_eq!(diagonal_order((0, 2), (2, 0)), Ordering::Less);
        assert_eq!(diagonal_order((3, 4), (3, 4)), Ordering::Equal);
        assert_eq!(column_order((0, 5), (1, 0)), Ordering::Less);
    }

    #[test]
    fn adjacency_covers_negative_coordinates() {
        assert!(wall_adjacent((-1, -1), (-1, 0)));
        assert!(!wall_adjacent((-1, 0), (-1, 1)));
        assert!(wall_adjacent((-3, 7), (-2, 7)));
        assert_eq!(edge_colour((0, 0), (-1, 0)), Some(BLUE));
        assert_eq!(edge_colour((1, 0), (0, 0)), Some(RED));
        assert_eq!(edge_colour((0, 1), (0, 0)), Some(GREEN));
    }

    #[test]
    fn track_examples() {
        assert_eq!(track_of((1, 1)), 3);
        assert_eq!(track_of((0, 0)), 0);
        assert_eq!(track_of((-1, 0)), 3);
    }

    #[test]
    fn single_edge_patch() {
        let w = WallPatch::new(0, 1, 0, 0).unwrap();
        let d = wall_monotone_layout(&w);
        assert_eq!(d.used(), 1);
        assert!(validate_monotone(&d).is_valid());
        let q = wall_queue_layout(&w);
        assert_eq!(q.parts.iter().filter(|p| !p.is_empty()).count(), 1);
        assert!(validate_strict_queue(&q).unwrap());
    }

    #[test]
    fn six_by_six() {
        let w = WallPatch::sized(6, 6).unwrap();
        let g = w.graph();
        assert!(g.max_degree() <= 3);
        let d = wall_monotone_layout(&w);
        assert_eq!(d.len(), 3);
        assert!(validate_monotone(&d).is_valid());
        assert!(validate_strict_queue(&wall_queue_layout(&w)).unwrap());
        let t = wall_track_layout(&w);
        assert!(validate_track(&t, &g).unwrap().is_valid());
        assert!(neighbours_on_distinct_tracks(&t, &g).unwrap());
    }

    #[test]
    fn one_queue_has_no_nesting() {
        let w = WallPatch::new(-3, 4, -2, 5).unwrap();
        let mut q = wall_queue_layout(&w);
        q.parts = vec![q.parts.concat()];
        assert!(validate_layout(&q).is_valid());
    }

    #[test]
    fn indices_follow_column_order() {
        let w = WallPatch::new(-1, 1, 2, 3).unwrap();
        let vs = w.vertices();
        for (i, &p) in vs.iter().enumerate() {
            assert_eq!(w.index(p), Some(i));
        }
        assert_eq!(w.index((2, 2)), None);
        assert!(WallPatch::new(1, 0, 0, 0).is_err());
    }
}
