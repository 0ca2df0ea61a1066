mod common;

use proptest::prelude::*;

use expander_layouts::expansion::expansion_two_sided;
use expander_layouts::graph::{
    decompose_monotone_exact, decompose_monotone_greedy, edges_cross, validate_monotone, BiEdge,
};
use expander_layouts::io;
use expander_layouts::layouts::{monotone_to_book, monotone_to_queue, validate_layout, validate_pushdown};
use expander_layouts::transforms::{two_sided, unravel_monotone};
use expander_layouts::OrderedBipartiteGraph;

fn bipartite(max_side: usize, max_edges: usize) -> impl Strategy<Value = OrderedBipartiteGraph> {
    (1..=max_side, 1..=max_side).prop_flat_map(move |(n, m)| {
        prop::collection::vec((0..n, 0..m), 0..=max_edges)
            .prop_map(move |edges| OrderedBipartiteGraph::with_sizes(n, m, edges).unwrap())
    })
}

fn balanced(max_side: usize, max_edges: usize) -> impl Strategy<Value = OrderedBipartiteGraph> {
    (2..=max_side).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges)
            .prop_map(move |edges| OrderedBipartiteGraph::with_sizes(n, n, edges).unwrap())
    })
}

proptest! {
    #[test]
    fn greedy_is_always_valid(g in bipartite(12, 40)) {
        let d = decompose_monotone_greedy(&g);
        prop_assert!(validate_monotone(&d).is_valid());
        prop_assert!(common::monotone_ok(&d));
    }

    #[test]
    fn exact_uses_at_most_greedy_matchings(g in bipartite(5, 9)) {
        let greedy = decompose_monotone_greedy(&g);
        let exact = decompose_monotone_exact(&g, 16).unwrap();
        prop_assert!(validate_monotone(&exact).is_valid());
        prop_assert!(exact.used() <= greedy.used());
    }

    #[test]
    fn crossing_is_symmetric_and_irreflexive(e in (0..20usize, 0..20usize), f in (0..20usize, 0..20usize)) {
        let (e, f): (BiEdge, BiEdge) = (e, f);
        prop_assert_eq!(edges_cross(e, f), edges_cross(f, e));
        prop_assert!(!edges_cross(e, e));
        prop_assert_eq!(edges_cross(e, f), (e.0 < f.0 && f.1 < e.1) || (f.0 < e.0 && e.1 < f.1));
    }

    #[test]
    fn conversions_are_valid(g in bipartite(10, 30)) {
        let d = decompose_monotone_greedy(&g);
        let book = monotone_to_book(&d).unwrap();
        let queue = monotone_to_queue(&d).unwrap();
        prop_assert!(validate_layout(&book).is_valid());
        prop_assert!(validate_pushdown(&book).unwrap());
        prop_assert!(validate_layout(&queue).is_valid());
        prop_assert!(common::linear_layout_ok(&book) && common::linear_layout_ok(&queue));
        prop_assert_eq!(book.parts.len(), d.len());
    }

    #[test]
    fn two_sided_is_idempotent(g in balanced(8, 20)) {
        let once = two_sided(&decompose_monotone_greedy(&g)).unwrap();
        let twice = two_sided(&once).unwrap();
        prop_assert_eq!(once.graph.edges(), twice.graph.edges());
        prop_assert!(validate_monotone(&once).is_valid());
        for &(i, j) in once.graph.edges() {
            prop_assert!(once.graph.contains_edge((j, i)));
        }
    }

    #[test]
    fn unravel_monotone_is_three_monotone(g in bipartite(8, 24)) {
        let u = unravel_monotone(&decompose_monotone_greedy(&g)).unwrap();
        prop_assert!(validate_monotone(&u).is_valid());
        prop_assert!(u.used() <= 3);
    }

    #[test]
    fn expansion_matches_the_oracle(g in balanced(9, 30)) {
        let r = expansion_two_sided(&g).unwrap();
        let oracle = common::two_sided(&g);
        match r.epsilon_star {
            Some(e) => prop_assert_eq!(e, oracle),
            None => prop_assert!(oracle < expander_layouts::rational::int(0)),
        }
        prop_assert_eq!(r.ratio() - expander_layouts::rational::int(1), oracle);
    }

    #[test]
    fn files_round_trip(g in bipartite(8, 20)) {
        let d = decompose_monotone_greedy(&g);
        let text = io::write_decomposition(&d, None).unwrap();
        prop_assert_eq!(io::read_decomposition(&text).unwrap(), d.clone());
        let book = monotone_to_book(&d).unwrap();
        prop_assert_eq!(io::read_layout(&io::write_layout(&book), Some(&book.graph)).unwrap(), book);
    }
}
