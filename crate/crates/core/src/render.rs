//! SVG output: arc diagrams, and the two-lobe drawing of a 2-queue layout
//! with an exact crossing certificate.
//!
//! In the two-lobe drawing the vertex at position `i` (1-based) sits at
//! `(i, 0)`. An edge between positions `a < b` turns at `t = -(a + b)`,
//! shifted right by `1/7` for queue 2: a semicircle above the axis runs
//! from `(a, 0)` to `(t, 0)` and a semicircle below it from `(t, 0)` to
//! `(b, 0)`. Each lobe is a polyline whose vertices are rounded to a grid of
//! `2^-40`, and crossings are counted exactly on those polylines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::layouts::{validate_layout, LayoutMode, LinearLayout};

const SCALE_BITS: u32 = 40;
const SCALE: f64 = (1u64 << SCALE_BITS) as f64;
/// Lateral shift of queue-2 turning points, in sevenths.
const SHIFT_SEVENTHS: i64 = 1;
/// Segments per lobe: `BASE_SEGMENTS + 14 r` for radius `r`.
const BASE_SEGMENTS: i64 = 128;
/// Segment ranges at or below this size are compared pairwise.
const LEAF: usize = 8;

type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Crossing {
    pub first: usize,
    pub second: usize,
    pub count: u32,
}

/// Certified thickness-2 drawing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Drawing {
    /// Per edge, the polyline in grid units (`2^-40`).
    #[serde(skip)]
    pub polylines: Vec<Vec<Point>>,
    /// Per vertex, its position `i` (so it is drawn at `(i, 0)`).
    pub vertex_positions: Vec<i64>,
    /// Queue (0 or 1) of each edge.
    pub queue_of: Vec<usize>,
    /// Nonzero entries of the symmetric crossing matrix, `first < second`.
    pub crossings: Vec<Crossing>,
    /// Segment multiplier used (1 normally, 2 for the stability check).
    pub refinement: u32,
    #[serde(skip)]
    pub svg: String,
}

impl Drawing {
    pub fn crossing_count(&self, e: usize, f: usize) -> u32 {
        let (first, second) = (e.min(f), e.max(f));
        self.crossings
            .iter()
            .find(|c| c.first == first && c.second == second)
            .map_or(0, |c| c.count)
    }

    pub fn total_crossings(&self) -> u32 {
        self.crossings.iter().map(|c| c.count).sum()
    }
}

/// One semicircular lobe: from `(p, 0)` to `(q, 0)` over centre
/// `((p+q)/2, 0)`, above the axis when `up`. Abscissae are in sevenths.
fn lobe(p7: i64, q7: i64, up: bool, refinement: u32) -> Vec<Point> {
    let r14 = (p7 - q7).abs(); // radius in fourteenths
    let segments = (BASE_SEGMENTS + r14) as usize * refinement as usize;
    let cx = (p7 + q7) as f64 / 14.0;
    let r = r14 as f64 / 14.0;
    let sign = if up { 1.0 } else { -1.0 };
    let start = if p7 > q7 { 0.0 } else { std::f64::consts::PI };
    let dir = if p7 > q7 { 1.0 } else { -1.0 };
    let grid = |v: f64| (v * SCALE).round() as i64;
    let mut pts = Vec::with_capacity(segments + 1);
    pts.push((p7 * (1 << SCALE_BITS) / 7, 0));
    for i in 1..segments {
        let theta = start + dir * std::f64::consts::PI * i as f64 / segments as f64;
        pts.push((grid(cx + r * theta.cos()), grid(sign * r * theta.sin())));
    }
    pts.push((q7 * (1 << SCALE_BITS) / 7, 0));
    pts
}

fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (abx, aby) = ((b.0 - a.0) as i128, (b.1 - a.1) as i128);
    let (acx, acy) = ((c.0 - a.0) as i128, (c.1 - a.1) as i128);
    abx * acy - aby * acx
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

enum Contact {
    None,
    Proper,
    /// Touching or overlapping at the given point.
    Touch(Point),
}

fn contact(a: Point, b: Point, c: Point, d: Point) -> Contact {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0 {
        return Contact::Proper;
    }
    for (o, s, e, p) in [(o1, a, b, c), (o2, a, b, d), (o3, c, d, a), (o4, c, d, b)] {
        if o == 0 && on_segment(s, e, p) {
            return Contact::Touch(p);
        }
    }
    Contact::None
}

#[derive(Clone, Copy)]
struct BBox {
    x0: i64,
    x1: i64,
    y0: i64,
    y1: i64,
}

impl BBox {
    fn of(pts: &[Point]) -> Self {
        let mut b = BBox { x0: i64::MAX, x1: i64::MIN, y0: i64::MAX, y1: i64::MIN };
        for &(x, y) in pts {
            b.x0 = b.x0.min(x);
            b.x1 = b.x1.max(x);
            b.y0 = b.y0.min(y);
            b.y1 = b.y1.max(y);
        }
        b
    }

    fn meets(&self, o: &BBox) -> bool {
        self.x0 <= o.x1 && o.x0 <= self.x1 && self.y0 <= o.y1 && o.y0 <= self.y1
    }
}

/// Proper crossings between two polylines; touching points are collected
/// into `touches`.
fn count_crossings(p: &[Point], q: &[Point], touches: &mut Vec<Point>) -> u32 {
    if p.len() < 2 || q.len() < 2 || !BBox::of(p).meets(&BBox::of(q)) {
        return 0;
    }
    if p.len() - 1 <= LEAF && q.len() - 1 <= LEAF {
        let mut count = 0;
        for s in p.windows(2) {
            for t in q.windows(2) {
                match contact(s[0], s[1], t[0], t[1]) {
                    Contact::None => {}
                    Contact::Proper => count += 1,
                    Contact::Touch(pt) => touches.push(pt),
                }
            }
        }
        return count;
    }
    // Split the longer polyline; the halves share their middle point.
    if p.len() >= q.len() {
        let mid = p.len() / 2;
        count_crossings(&p[..=mid], q, touches) + count_crossings(&p[mid..], q, touches)
    } else {
        let mid = q.len() / 2;
        count_crossings(p, &q[..=mid], touches) + count_crossings(p, &q[mid..], touches)
    }
}

fn check_queue_layout(layout: &LinearLayout) -> Result<Vec<i64>> {
    if layout.mode != LayoutMode::Queue {
        return Err(Error::input("thickness-2 drawing needs a queue layout"));
    }
    if layout.parts.len() > 2 {
        return Err(Error::input(format!("{} queues; at most 2 are drawable", layout.parts.len())));
    }
    if let Some(v) = validate_layout(layout).first() {
        return Err(Error::input(format!("invalid queue layout: {v:?}")));
    }
    let mut pos = vec![0i64; layout.graph.vertex_count()];
    for (i, &v) in layout.order.iter().enumerate() {
        pos[v] = i as i64 + 1;
    }
    Ok(pos)
}

/// Draws a valid 2-queue layout and certifies it: same-queue pairs cross
/// 0 times and cross-queue pairs at most once. A drawing error names the
/// first offending pair.
pub fn draw_thickness2(layout: &LinearLayout) -> Result<Drawing> {
    draw_refined(layout, 1)
}

/// [`draw_thickness2`] with every lobe split into `refinement` times as
/// many segments.
pub fn draw_refined(layout: &LinearLayout, refinement: u32) -> Result<Drawing> {
    let pos = check_queue_layout(layout)?;
    let g = &layout.graph;
    let mut queue_of = vec![0usize; g.edge_count()];
    for (q, part) in layout.parts.iter().enumerate() {
        for &e in part {
            queue_of[e] = q;
        }
    }
    // Lobes per edge: (top, bottom), with abscissae in sevenths.
    let lobes: Vec<(Vec<Point>, Vec<Point>)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
            let t7 = -7 * (a + b) + SHIFT_SEVENTHS * queue_of[e] as i64;
            (lobe(7 * a, t7, true, refinement), lobe(t7, 7 * b, false, refinement))
        })
        .collect();

    let mut crossings = Vec::new();
    for e in 0..g.edge_count() {
        for f in e + 1..g.edge_count() {
            let mut touches = Vec::new();
            let count = count_crossings(&lobes[e].0, &lobes[f].0, &mut touches)
                + count_crossings(&lobes[e].1, &lobes[f].1, &mut touches)
                + count_crossings(&lobes[e].0, &lobes[f].1, &mut touches)
                + count_crossings(&lobes[e].1, &lobes[f].0, &mut touches);
            let (eu, ev) = g.edge(e);
            let (fu, fv) = g.edge(f);
            let shared: Vec<Point> = [eu, ev]
                .into_iter()
                .filter(|x| *x == fu || *x == fv)
                .map(|x| (pos[x] << SCALE_BITS, 0))
                .collect();
            if let Some(&pt) = touches.iter().find(|pt| !shared.contains(pt)) {
                return Err(Error::Drawing(format!(
                    "edges {}-{} and {}-{} touch at a non-vertex point {:?}",
                    g.id(eu),
                    g.id(ev),
                    g.id(fu),
                    g.id(fv),
                    (pt.0 as f64 / SCALE, pt.1 as f64 / SCALE)
                )));
            }
            let limit = if queue_of[e] == queue_of[f] { 0 } else { 1 };
            if count > limit {
                return Err(Error::Drawing(format!(
                    "edges {}-{} (queue {}) and {}-{} (queue {}) cross {count} times",
                    g.id(eu),
                    g.id(ev),
                    queue_of[e] + 1,
                    g.id(fu),
                    g.id(fv),
                    queue_of[f] + 1
                )));
            }
            if count > 0 {
                crossings.push(Crossing { first: e, second: f, count });
            }
        }
    }

    let polylines: Vec<Vec<Point>> = lobes
        .into_iter()
        .map(|(mut top, bottom)| {
            top.extend_from_slice(&bottom[1..]);
            top
        })
        .collect();
    let svg = thickness2_svg(&pos, &polylines, &queue_of);
    Ok(Drawing { polylines, vertex_positions: pos, queue_of, crossings, refinement, svg })
}

/// Draws at refinement 1 and 2 and checks that every pair keeps its
/// crossing parity.
pub fn draw_thickness2_stable(layout: &LinearLayout) -> Result<Drawing> {
    let coarse = draw_refined(layout, 1)?;
    let fine = draw_refined(layout, 2)?;
    let parities = |d: &Drawing| -> BTreeMap<(usize, usize), u32> {
        d.crossings
            .iter()
            .filter(|c| c.count % 2 == 1)
            .map(|c| ((c.first, c.second), 1))
            .collect()
    };
    if parities(&coarse) != parities(&fine) {
        return Err(Error::Drawing("crossing parity changed when the polylines were refined".into()));
    }
    Ok(coarse)
}

const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn thickness2_svg(pos: &[i64], polylines: &[Vec<Point>], queue_of: &[usize]) -> String {
    let unit = 20.0;
    let to = |p: Point| (p.0 as f64 / SCALE * unit, -(p.1 as f64) / SCALE * unit);
    let mut pts = polylines.iter().flatten().map(|&p| to(p)).collect::<Vec<_>>();
    pts.extend(pos.iter().map(|&i| (i as f64 * unit, 0.0)));
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, unit, -unit, unit);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = unit;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let _ = writeln!(s, r##"<line x1="{:.2}" y1="0" x2="{:.2}" y2="0" stroke="#999" stroke-width="0.5"/>"##, x0, x1);
    for (line, &q) in polylines.iter().zip(queue_of) {
        let mut d = String::new();
        for (i, &p) in line.iter().enumerate() {
            let (x, y) = to(p);
            let _ = write!(d, "{}{:.3} {:.3}", if i == 0 { "M" } else { " L" }, x, y);
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{}" stroke-width="0.6"/>"#, PALETTE[q]);
    }
    for &i in pos {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="0" r="2"/>"#, i as f64 * unit);
    }
    s.push_str("</svg>\n");
    s
}

/// Arc diagram: vertices on a line, one semicircular arc per edge above the
/// line, coloured by part.
pub fn draw_arcs(layout: &LinearLayout) -> String {
    let unit = 30.0;
    let g = &layout.graph;
    let n = layout.order.len();
    let mut pos = vec![0usize; g.vertex_count()];
    for (i, &v) in layout.order.iter().enumerate() {
        if v < pos.len() {
            pos[v] = i;
        }
    }
    let width = (n.max(1) as f64 + 1.0) * unit;
    let height = (n as f64 / 2.0 + 2.0) * unit;
    let base = height - unit;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{:.0}" viewBox="0 0 {width:.0} {:.0}">"#,
        height + unit,
        height + unit
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.1}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="#999" stroke-width="1"/>"##,
        unit / 2.0,
        width - unit / 2.0
    );
    for (p, part) in layout.parts.iter().enumerate() {
        let colour = PALETTE[p % PALETTE.len()];
        let _ = writeln!(s, r#"<g class="part-{p}" stroke="{colour}" fill="none" stroke-width="1.5">"#);
        for &e in part {
            if e >= g.edge_count() {
                continue;
            }
            let (u, v) = g.edge(e);
            let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
            let (xa, xb) = ((a + 1) as f64 * unit, (b + 1) as f64 * unit);
            let r = (xb - xa) / 2.0;
            let _ = writeln!(s, r#"<path d="M{xa:.1} {base:.1} A{r:.1} {r:.1} 0 0 1 {xb:.1} {base:.1}"/>"#);
        }
        s.push_str("</g>\n");
    }
    for (i, &v) in layout.order.iter().enumerate() {
        let x = (i + 1) as f64 * unit;
        let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{base:.1}" r="3"/>"#);
        if v < g.vertex_count() {
            let _ = writeln!(
                s,
                r#"<text x="{x:.1}" y="{:.1}" font-size="9" text-anchor="middle">{}</text>"#,
                base + 14.0,
                escape(g.id(v))
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('\'', "&apos;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;

    fn queue(n: usize, edges: &[(usize, usize)], parts: Vec<Vec<usize>>) -> LinearLayout {
        let g = SimpleGraph::with_vertex_count(n, edges.iter().copied()).unwrap();
        LinearLayout::new(g, (0..n).collect(), parts, LayoutMode::Queue)
    }

    #[test]
    fn single_edge_has_no_crossings() {
        let d = draw_thickness2_stable(&queue(2, &[(0, 1)], vec![vec![0]])).unwrap();
        assert_eq!(d.total_crossings(), 0);
        assert_eq!(d.polylines[0].first(), Some(&(1 << SCALE_BITS, 0)));
        assert_eq!(d.polylines[0].last(), Some(&(2 << SCALE_BITS, 0)));
    }

    #[test]
    fn non_nested_edges_do_not_cross() {
        let d = draw_thickness2_stable(&queue(4, &[(0, 2), (1, 3)], vec![vec![0, 1]])).unwrap();
        assert_eq!(d.total_crossings(), 0);
    }

    #[test]
    fn nested_edges_in_two_queues_cross_once() {
        let d = draw_thickness2_stable(&queue(4, &[(0, 3), (1, 2)], vec![vec![0], vec![1]])).unwrap();
        assert_eq!(d.crossing_count(0, 1), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let three = queue(4, &[(0, 1), (1, 2), (2, 3)], vec![vec![0], vec![1], vec![2]]);
        assert!(matches!(draw_thickness2(&three), Err(Error::Input(_))));
        let nested = queue(4, &[(0, 3), (1, 2)], vec![vec![0, 1]]);
        assert!(matches!(draw_thickness2(&nested), Err(Error::Input(_))));
    }

    #[test]
    fn every_two_queue_layout_of_k4_is_certified() {
        // All splits of K4's edges over two queues under the identity order
        // that keep each queue nest-free.
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut certified = 0;
        for mask in 0u32..64 {
            let parts: Vec<Vec<usize>> = vec![
                (0..6).filter(|&e| mask >> e & 1 == 0).collect(),
                (0..6).filter(|&e| mask >> e & 1 == 1).collect(),
            ];
            let l = queue(4, &edges, parts);
            if validate_layout(&l).is_valid() {
                draw_thickness2_stable(&l).unwrap();
                certified += 1;
            }
        }
        assert!(certified > 0);
    }

    #[test]
    fn arcs_are_deterministic() {
        let l = queue(4, &[(0, 2), (1, 3)], vec![vec![0], vec![1]]);
        let svg = draw_arcs(&l);
        assert_eq!(svg, draw_arcs(&l));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("part-1"));
        let empty = queue(0, &[], vec![]);
        let svg = draw_arcs(&empty);
        assert!(svg.contains("<line") && !svg.contains("<path"));
    }
}
