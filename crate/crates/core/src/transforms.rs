//! The two-sided lift, the unraveling with its 3-page and 3-monotone
//! layouts, and the 2-subdivision.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BiEdge, MonotoneDecomposition, OrderedBipartiteGraph, SimpleGraph};
use crate::layouts::{validate_layout, LayoutMode, LinearLayout};
use crate::rational::{self, int, Rational};

/// Adds the mirror `(j, i)` of every edge `(i, j)`. Each input matching is
/// kept and followed by its mirror, minus edges already covered; empty
/// mirrors are dropped.
pub fn two_sided(d: &MonotoneDecomposition) -> Result<MonotoneDecomposition> {
    let g = &d.graph;
    if g.len_a() != g.len_b() {
        return Err(Error::input(format!(
            "two-sided lift needs |A| = |B|, got {} and {}",
            g.len_a(),
            g.len_b()
        )));
    }
    d.ensure_valid()?;

    let mut covered: BTreeSet<BiEdge> = g.edges().iter().copied().collect();
    let mut groups: Vec<Vec<BiEdge>> = (0..d.len()).map(|m| d.matching_edges(m).collect()).collect();
    for m in 0..d.len() {
        let mirror: Vec<BiEdge> = d
            .matching_edges(m)
            .map(|(i, j)| (j, i))
            .filter(|&e| covered.insert(e))
            .collect();
        if !mirror.is_empty() {
            groups.push(mirror);
        }
    }

    let lifted = OrderedBipartiteGraph::new(
        g.side_a().to_vec(),
        g.side_b().to_vec(),
        covered.iter().copied(),
    )?;
    let matchings = groups
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|&e| lifted.edge_index(e).expect("edge was added"))
                .collect()
        })
        .collect();
    Ok(MonotoneDecomposition::new(lifted, matchings))
}

/// Unraveling of a graph whose edges carry colours in `1..=k`. Layer `i`
/// (0-based) holds copies `i * n .. (i + 1) * n` of the `n` vertices, with
/// ids `"{id}.{i + 1}"`.
pub fn unravel_simple(g: &SimpleGraph, colours: &[u32], k: usize) -> Result<SimpleGraph> {
    if colours.len() != g.edge_count() {
        return Err(Error::input("every edge needs a colour"));
    }
    if let Some(&c) = colours.iter().find(|&&c| c == 0 || c as usize > k) {
        return Err(Error::input(format!("colour {c} is outside 1..={k}")));
    }
    let n = g.vertex_count();
    let ids = (1..=k).flat_map(|i| g.ids().iter().map(move |id| format!("{id}.{i}"))).collect();
    let layer_edges = g.edges().iter().zip(colours).map(|(&(u, v), &c)| {
        let base = (c as usize - 1) * n;
        (base + u, base + v)
    });
    let path_edges = (0..k.saturating_sub(1)).flat_map(|i| (0..n).map(move |v| (i * n + v, (i + 1) * n + v)));
    SimpleGraph::new(ids, layer_edges.chain(path_edges).collect::<Vec<_>>())
}

/// Unraveling of an edge-coloured bipartite graph; vertices inside a layer
/// are `A` then `B` as in [`OrderedBipartiteGraph::to_simple`].
pub fn unravel(g: &OrderedBipartiteGraph, k: usize) -> Result<SimpleGraph> {
    let colours = g
        .colors()
        .ok_or_else(|| Error::input("unraveling needs an edge colouring"))?;
    unravel_simple(&g.to_simple(), colours, k)
}

/// 3-page book layout of the unraveling of a book layout with `k` pages.
/// Layers come in order, odd layers (1-based) in the input order and even
/// layers reversed. Pages: layer edges, path edges leaving odd layers, path
/// edges leaving even layers.
pub fn unravel_book(layout: &LinearLayout) -> Result<LinearLayout> {
    if layout.mode != LayoutMode::Book {
        return Err(Error::input("unraveling needs a book layout"));
    }
    if let Some(v) = validate_layout(layout).first() {
        return Err(Error::input(format!("invalid book layout: {v:?}")));
    }
    let g = &layout.graph;
    let k = layout.parts.len().max(1);
    let mut colours = vec![0u32; g.edge_count()];
    for (p, part) in layout.parts.iter().enumerate() {
        for &e in part {
            colours[e] = p as u32 + 1;
        }
    }
    let unravelled = unravel_simple(g, &colours, k)?;

    let n = g.vertex_count();
    let mut order = Vec::with_capacity(n * k);
    for i in 0..k {
        let layer = layout.order.iter().map(|&v| i * n + v);
        if i % 2 == 0 {
            order.extend(layer);
        } else {
            order.extend(layer.rev());
        }
    }
    let mut parts = vec![Vec::new(); 3];
    for (e, &(u, v)) in unravelled.edges().iter().enumerate() {
        let (lu, lv) = (u / n, v / n);
        let page = if lu == lv { 0 } else if lu.min(lv) % 2 == 0 { 1 } else { 2 };
        parts[page].push(e);
    }
    Ok(LinearLayout::new(unravelled, order, parts, LayoutMode::Book))
}

/// 3-monotone layout of the unraveling of a monotone decomposition with `k`
/// matchings. One side is `A_1, B_2, A_3, ...` and the other
/// `B_1, A_2, B_3, ...`. Matching 0 holds the layer edges, matching 1 the
/// path edges from block `i` of the first side to block `i + 1` of the
/// second, matching 2 the path edges running the other way.
pub fn unravel_monotone(d: &MonotoneDecomposition) -> Result<MonotoneDecomposition> {
    d.ensure_valid()?;
    let g = &d.graph;
    let k = d.len().max(1);
    let (na, nb) = (g.len_a(), g.len_b());

    // Position of a_i / b_i (0-based layer i) on its side of the output.
    // Side P holds A on even i and B on odd i; blocks are laid out in
    // layer order.
    let block_start = |side_p: bool, i: usize| -> usize {
        (0..i)
            .map(|j| if (j % 2 == 0) == side_p { na } else { nb })
            .sum()
    };
    let a_slot = |i: usize, a: usize| -> (bool, usize) {
        let on_p = i.is_multiple_of(2);
        (on_p, block_start(on_p, i) + a)
    };
    let b_slot = |i: usize, b: usize| -> (bool, usize) {
        let on_p = i % 2 == 1;
        (on_p, block_start(on_p, i) + b)
    };

    let mut side_p = Vec::new();
    let mut side_q = Vec::new();
    for i in 0..k {
        let a_ids = g.side_a().iter().map(|id| format!("{id}.{}", i + 1));
        let b_ids = g.side_b().iter().map(|id| format!("{id}.{}", i + 1));
        if i % 2 == 0 {
            side_p.extend(a_ids);
            side_q.extend(b_ids);
        } else {
            side_p.extend(b_ids);
            side_q.extend(a_ids);
        }
    }

    let orient = |x: (bool, usize), y: (bool, usize)| -> BiEdge {
        debug_assert_ne!(x.0, y.0);
        if x.0 {
            (x.1, y.1)
        } else {
            (y.1, x.1)
        }
    };
    let mut groups: Vec<Vec<BiEdge>> = vec![Vec::new(); 3];
    for (m, _) in d.matchings.iter().enumerate() {
        for (a, b) in d.matching_edges(m) {
            groups[0].push(orient(a_slot(m, a), b_slot(m, b)));
        }
    }
    for i in 0..k.saturating_sub(1) {
        for a in 0..na {
            let from = a_slot(i, a);
            groups[if from.0 { 1 } else { 2 }].push(orient(from, a_slot(i + 1, a)));
        }
        for b in 0..nb {
            let from = b_slot(i, b);
            groups[if from.0 { 1 } else { 2 }].push(orient(from, b_slot(i + 1, b)));
        }
    }

    let out = OrderedBipartiteGraph::new(side_p, side_q, groups.concat())?;
    let matchings = groups
        .iter()
        .map(|group| group.iter().map(|&e| out.edge_index(e).expect("edge present")).collect())
        .collect();
    Ok(MonotoneDecomposition::new(out, matchings))
}

/// Replaces each edge `vw` (`v` in A) by the path `v, w', v', w`. Edge `e`
/// (in sorted order) contributes `v'` with id `"e{e}a"` to A and `w'` with
/// id `"e{e}b"` to B, appended in edge order.
pub fn subdivide_twice(g: &OrderedBipartiteGraph) -> Result<OrderedBipartiteGraph> {
    let (na, nb) = (g.len_a(), g.len_b());
    let mut side_a = g.side_a().to_vec();
    let mut side_b = g.side_b().to_vec();
    let mut edges = Vec::with_capacity(3 * g.edge_count());
    for (e, &(v, w)) in g.edges().iter().enumerate() {
        side_a.push(format!("e{e}a"));
        side_b.push(format!("e{e}b"));
        let (v2, w2) = (na + e, nb + e);
        edges.extend([(v, w2), (v2, w2), (v2, w)]);
    }
    OrderedBipartiteGraph::new(side_a, side_b, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubdivisionParams {
    #[serde(with = "rational")]
    pub epsilon: Rational,
    pub d: usize,
    #[serde(with = "rational")]
    pub beta: Rational,
    #[serde(with = "rational")]
    pub gamma: Rational,
    #[serde(with = "rational")]
    pub epsilon_prime: Rational,
}

/// `β = (4d+3)/(4d+4)`, `γ = ε(1-β)/(2(ε+β))` and
/// `ε' = min{(1+ε)(1-γ) - 1, (ε+β)(1-γ)/((1+ε)β) - 1, γ/d}`.
pub fn subdivision_epsilon(epsilon: Rational, d: usize) -> Result<SubdivisionParams> {
    if epsilon <= int(0) || epsilon > int(1) {
        return Err(Error::input(format!("ε = {} is outside (0, 1]", rational::format(&epsilon))));
    }
    if d < 2 {
        return Err(Error::input(format!("d = {d} is below 2")));
    }
    let one = int(1);
    let dd = int(d as i64);
    let beta = (int(4) * dd + int(3)) / (int(4) * dd + int(4));
    let gamma = epsilon * (one - beta) / (int(2) * (epsilon + beta));
    let terms = [
        (one + epsilon) * (one - gamma) - one,
        (epsilon + beta) * (one - gamma) / ((one + epsilon) * beta) - one,
        gamma / dd,
    ];
    let epsilon_prime = terms.into_iter().min().expect("three terms");
    if !(gamma > int(0) && gamma < epsilon / int(2)) {
        return Err(Error::Invariant(format!("γ = {} is not in (0, ε/2)", rational::format(&gamma))));
    }
    if !(epsilon_prime > int(0) && epsilon_prime <= one) {
        return Err(Error::Invariant(format!("ε' = {} is not in (0, 1]", rational::format(&epsilon_prime))));
    }
    Ok(SubdivisionParams { epsilon, d, beta, gamma, epsilon_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{decompose_monotone_exact, decompose_monotone_greedy, validate_monotone};
    use crate::layouts::{monotone_to_book, monotone_to_queue, validate_pushdown};
    use crate::rational::rat;

    fn decomposition(n: usize, edges: &[BiEdge]) -> MonotoneDecomposition {
        let g = OrderedBipartiteGraph::with_sizes(n, n, edges.iter().copied()).unwrap();
        decompose_monotone_greedy(&g)
    }

    #[test]
    fn two_sided_examples() {
        let d = decomposition(2, &[(0, 1)]);
        let lifted = two_sided(&d).unwrap();
        assert_eq!(lifted.graph.edges(), &[(0, 1), (1, 0)]);
        assert!(validate_monotone(&lifted).is_valid());
        assert_eq!(lifted.len(), 2);

        let sym = decomposition(2, &[(0, 1), (1, 0)]);
        let lifted = two_sided(&sym).unwrap();
        assert_eq!(lifted.graph.edges(), sym.graph.edges());
        assert_eq!(lifted.len(), sym.len());

        let uneven = decompose_monotone_greedy(&OrderedBipartiteGraph::with_sizes(1, 2, [(0, 0)]).unwrap());
        assert!(matches!(two_sided(&uneven), Err(Error::Input(_))));
    }

    #[test]
    fn two_sided_is_idempotent() {
        let d = decomposition(4, &[(0, 1), (0, 2), (1, 3), (2, 0), (3, 3)]);
        let once = two_sided(&d).unwrap();
        let twice = two_sided(&once).unwrap();
        assert_eq!(once, twice);
    }

    fn coloured(n: usize, edges: &[BiEdge], colours: &[u32]) -> OrderedBipartiteGraph {
        let ids = |p: char| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        OrderedBipartiteGraph::with_colors(ids('a'), ids('b'), edges.to_vec(), colours.to_vec()).unwrap()
    }

    #[test]
    fn unravel_examples() {
        let one = unravel(&coloured(1, &[(0, 0)], &[1]), 1).unwrap();
        assert_eq!((one.vertex_count(), one.edge_count()), (2, 1));

        let two = unravel(&coloured(1, &[(0, 0)], &[1]), 2).unwrap();
        assert_eq!((two.vertex_count(), two.edge_count()), (4, 3));
        assert_eq!(two.edges(), &[(0, 1), (0, 2), (1, 3)]);
        assert_eq!(two.id(3), "b0.2");

        let missing = OrderedBipartiteGraph::with_sizes(1, 1, [(0, 0)]).unwrap();
        assert!(matches!(unravel(&missing, 2), Err(Error::Input(_))));
        assert!(matches!(unravel(&coloured(1, &[(0, 0)], &[3]), 2), Err(Error::Input(_))));
    }

    #[test]
    fn unravel_book_k1_has_one_page() {
        let g = SimpleGraph::with_vertex_count(3, [(0, 1), (1, 2)]).unwrap();
        let l = LinearLayout::new(g, vec![0, 1, 2], vec![vec![0, 1]], LayoutMode::Book);
        let u = unravel_book(&l).unwrap();
        assert!(u.parts[1].is_empty() && u.parts[2].is_empty());
        assert!(validate_layout(&u).is_valid());
    }

    #[test]
    fn unravel_book_of_k22() {
        let k22 = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let book = monotone_to_book(&decompose_monotone_exact(&k22, 20).unwrap()).unwrap();
        let u = unravel_book(&book).unwrap();
        assert_eq!(u.parts.len(), 3);
        assert!(validate_layout(&u).is_valid());
    }

    #[test]
    fn unravel_monotone_examples() {
        let single = decomposition(3, &[(0, 0), (1, 2)]);
        let u = unravel_monotone(&single).unwrap();
        assert_eq!(u.matchings[0].len(), 2);
        assert!(u.matchings[1].is_empty() && u.matchings[2].is_empty());
        assert!(validate_monotone(&u).is_valid());

        let k22 = OrderedBipartiteGraph::with_sizes(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let d = decompose_monotone_exact(&k22, 20).unwrap();
        let u = unravel_monotone(&d).unwrap();
        assert!(validate_monotone(&u).is_valid());
        assert!(u.graph.max_degree() <= 3);
        assert_eq!(u.graph.vertex_count(), 4 * d.len());
        assert!(validate_pushdown(&monotone_to_book(&u).unwrap()).unwrap());
        assert!(validate_layout(&monotone_to_queue(&u).unwrap()).is_valid());
    }

    #[test]
    fn subdivision_examples() {
        let g = OrderedBipartiteGraph::with_sizes(1, 1, [(0, 0)]).unwrap();
        let s = subdivide_twice(&g).unwrap();
        assert_eq!(s.side_a(), &["a0", "e0a"]);
        assert_eq!(s.side_b(), &["b0", "e0b"]);
        assert_eq!(s.edges(), &[(0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn subdivision_parameters() {
        let p = subdivision_epsilon(int(1), 3).unwrap();
        assert_eq!((p.beta, p.gamma, p.epsilon_prime), (rat(15, 16), rat(1, 62), rat(1, 186)));
        let p = subdivision_epsilon(int(1), 2).unwrap();
        assert_eq!((p.beta, p.gamma, p.epsilon_prime), (rat(11, 12), rat(1, 46), rat(1, 92)));
        assert!(subdivision_epsilon(int(0), 3).is_err());
        assert!(subdivision_epsilon(rat(3, 2), 3).is_err());
        assert!(subdivision_epsilon(int(1), 1).is_err());
    }
}
