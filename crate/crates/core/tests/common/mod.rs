//! Brute-force oracles written straight from the definitions, sharing no
//! code with the library beyond its data types.

#![allow(dead_code)]

use std::collections::HashSet;

use expander_layouts::graph::OrderedBipartiteGraph;
use expander_layouts::layouts::LinearLayout;
use expander_layouts::{LayoutMode, MonotoneDecomposition, Rational, SimpleGraph, TrackLayout};

/// `min |N(S)|/|S| - 1` over nonempty `S` of one side with `|S| <= n/2`,
/// where `adj[v]` lists neighbours of `v`.
pub fn one_sided(adj: &[Vec<usize>]) -> Rational {
    let n = adj.len();
    assert!((2..=24).contains(&n));
    let masks: Vec<u64> = adj.iter().map(|ns| ns.iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mut best: Option<Rational> = None;
    for s in 1u32..(1 << n) {
        let size = s.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let nb = (0..n).filter(|&v| s >> v & 1 == 1).fold(0u64, |m, v| m | masks[v]).count_ones();
        let r = Rational::new(nb as i64, size as i64) - Rational::from_integer(1);
        best = Some(best.map_or(r, |b| b.min(r)));
    }
    best.expect("n >= 2")
}

pub fn adjacency(g: &OrderedBipartiteGraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut a = vec![Vec::new(); g.len_a()];
    let mut b = vec![Vec::new(); g.len_b()];
    for &(x, y) in g.edges() {
        a[x].push(y);
        b[y].push(x);
    }
    (a, b)
}

pub fn two_sided(g: &OrderedBipartiteGraph) -> Rational {
    let (a, b) = adjacency(g);
    one_sided(&a).min(one_sided(&b))
}

/// `|N(S)|` of `set` (indices into side A when `from_a`).
pub fn neighbourhood(g: &OrderedBipartiteGraph, from_a: bool, set: &[usize]) -> usize {
    let set: HashSet<usize> = set.iter().copied().collect();
    g.edges()
        .iter()
        .filter_map(|&(x, y)| if from_a { set.contains(&x).then_some(y) } else { set.contains(&y).then_some(x) })
        .collect::<HashSet<_>>()
        .len()
}

/// Size of the smallest vertex set whose removal leaves components of at
/// most half the vertex count.
pub fn min_separator(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n <= 16);
    let mut by_size: Vec<u32> = (0..1u32 << n).collect();
    by_size.sort_by_key(|m| (m.count_ones(), *m));
    for removed in by_size {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(u, v) in edges {
            if removed >> u & 1 == 0 && removed >> v & 1 == 0 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let mut sizes = vec![0usize; n];
        for v in (0..n).filter(|&v| removed >> v & 1 == 0) {
            let r = find(&mut parent, v);
            sizes[r] += 1;
        }
        if sizes.iter().all(|&s| 2 * s <= n) {
            return removed.count_ones() as usize;
        }
    }
    unreachable!()
}

/// Book or queue validity straight from the definitions.
pub fn linear_layout_ok(l: &LinearLayout) -> bool {
    let g = &l.graph;
    let n = g.vertex_count();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in l.order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    if l.order.len() != n {
        return false;
    }
    let mut all: Vec<usize> = l.parts.iter().flatten().copied().collect();
    all.sort_unstable();
    if all != (0..g.edge_count()).collect::<Vec<_>>() {
        return false;
    }
    for part in &l.parts {
        for &e in part {
            for &f in part {
                let (a, b) = span(g, &pos, e);
                let (c, d) = span(g, &pos, f);
                let bad = match l.mode {
                    LayoutMode::Book => a < c && c < b && b < d,
                    LayoutMode::Queue => a < c && d < b,
                };
                if bad {
                    return false;
                }
            }
        }
    }
    true
}

fn span(g: &SimpleGraph, pos: &[usize], e: usize) -> (usize, usize) {
    let (u, v) = g.edge(e);
    (pos[u].min(pos[v]), pos[u].max(pos[v]))
}

/// Every part a matching.
pub fn parts_are_matchings(l: &LinearLayout) -> bool {
    l.parts.iter().all(|part| {
        let mut seen = HashSet::new();
        part.iter().all(|&e| {
            let (u, v) = l.graph.edge(e);
            seen.insert(u) && seen.insert(v)
        })
    })
}

/// Same-side neighbours of any vertex sit in distinct queues.
pub fn strict_queue_ok(l: &LinearLayout) -> bool {
    let g = &l.graph;
    let mut pos = vec![0; g.vertex_count()];
    for (i, &v) in l.order.iter().enumerate() {
        pos[v] = i;
    }
    let mut slots = HashSet::new();
    for (q, part) in l.parts.iter().enumerate() {
        for &e in part {
            let (u, v) = g.edge(e);
            for (x, y) in [(u, v), (v, u)] {
                if !slots.insert((x, pos[y] > pos[x], q)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Partition, matchings, and no crossing inside any matching.
pub fn monotone_ok(d: &MonotoneDecomposition) -> bool {
    let edges = d.graph.edges();
    let mut all: Vec<usize> = d.matchings.iter().flatten().copied().collect();
    all.sort_unstable();
    if all != (0..edges.len()).collect::<Vec<_>>() {
        return false;
    }
    d.matchings.iter().all(|m| {
        m.iter().all(|&e| {
            m.iter().all(|&f| {
                let ((i, j), (k, l)) = (edges[e], edges[f]);
                e == f || (i != k && j != l && (i < k) == (j < l))
            })
        })
    })
}

/// Tracks partition the vertices into independent sets with no X-crossing
/// between any two tracks.
pub fn track_ok(t: &TrackLayout, g: &SimpleGraph) -> bool {
    let n = g.vertex_count();
    let mut slot = vec![None; n];
    for (i, track) in t.tracks.iter().enumerate() {
        for (p, &v) in track.iter().enumerate() {
            if v >= n || slot[v].is_some() {
                return false;
            }
            slot[v] = Some((i, p));
        }
    }
    let Some(slot): Option<Vec<(usize, usize)>> = slot.into_iter().collect() else { return false };
    let edges = g.edges();
    for &(u, v) in edges {
        if slot[u].0 == slot[v].0 {
            return false;
        }
    }
    for &e in edges {
        for &f in edges {
            let orient = |(u, v): (usize, usize)| if slot[u].0 < slot[v].0 { (slot[u], slot[v]) } else { (slot[v], slot[u]) };
            let ((s1, t1), (s2, t2)) = (orient(e), orient(f));
            if s1.0 == s2.0 && t1.0 == t2.0 && s1.1 < s2.1 && t2.1 < t1.1 {
                return false;
            }
        }
    }
    true
}

/// `|N_C(I)|` for `I` on the cycle `0..len`.
pub fn cycle_neighbourhood(len: usize, set: &[usize]) -> usize {
    set.iter()
        .flat_map(|&v| [(v + 1) % len, (v + len - 1) % len])
        .collect::<HashSet<_>>()
        .len()
}
