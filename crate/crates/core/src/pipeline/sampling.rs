//! Randomized expansion search on `G'`, for sizes beyond the exhaustive
//! oracle.
//!
//! The sampler walks through subsets of one class, adding or dropping one
//! vertex per step, and restarts periodically from the empty set, a
//! cycle-aligned set (a few whole cycle parts plus partial arcs) or a
//! breadth-first ball. Every
//! visited set with `1 ≤ |S| ≤ |class|/2` counts as one sample.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::PipelineGraph;
use crate::error::{Error, Result};
use crate::graph::{OrderedBipartiteGraph, Side};
use crate::rational::{self, Rational};

const RESTART_EVERY: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SamplingReport {
    pub samples: u64,
    /// Sets with `|N(S)| < (1 + threshold)|S|`.
    pub violations: u64,
    #[serde(with = "rational")]
    pub threshold: Rational,
    /// Smallest `|N(S)|/|S| - 1` seen.
    #[serde(with = "rational")]
    pub worst_epsilon: Rational,
    pub worst_set: Vec<String>,
}

struct Walker<'a> {
    nbrs: &'a [Vec<usize>],
    cap: usize,
    hits: Vec<u32>,
    neighbours: usize,
    member: Vec<Option<usize>>,
    set: Vec<usize>,
}

impl<'a> Walker<'a> {
    fn new(nbrs: &'a [Vec<usize>], other: usize) -> Self {
        Self {
            nbrs,
            cap: nbrs.len() / 2,
            hits: vec![0; other],
            neighbours: 0,
            member: vec![None; nbrs.len()],
            set: Vec::new(),
        }
    }

    fn add(&mut self, v: usize) {
        if self.member[v].is_some() || self.set.len() >= self.cap {
            return;
        }
        self.member[v] = Some(self.set.len());
        self.set.push(v);
        for &w in &self.nbrs[v] {
            if self.hits[w] == 0 {
                self.neighbours += 1;
            }
            self.hits[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        let Some(pos) = self.member[v].take() else { return };
        self.set.swap_remove(pos);
        if let Some(&moved) = self.set.get(pos) {
            self.member[moved] = Some(pos);
        }
        for &w in &self.nbrs[v] {
            self.hits[w] -= 1;
            if self.hits[w] == 0 {
                self.neighbours -= 1;
            }
        }
    }

    fn clear(&mut self) {
        while let Some(&v) = self.set.last() {
            self.remove(v);
        }
    }
}

/// Searches both classes of `G'` for a set expanding by less than
/// `threshold`, using `samples` sets split evenly between the classes.
pub fn sample_expansion(p: &PipelineGraph, threshold: Rational, samples: u64, seed: u64) -> Result<SamplingReport> {
    let len_x = p.gprime.len_a();
    let parts = [p.cycles.class_parts(len_x, true), p.cycles.class_parts(len_x, false)];
    sample_expansion_graph(&p.gprime, &parts, threshold, samples, seed)
}

/// [`sample_expansion`] on any balanced bipartite graph. `parts[0]` and
/// `parts[1]` list vertex groups of sides A and B used for aligned restarts
/// (either may be empty); other restarts grow a random ball in the
/// distance-2 graph of the class, or start from the empty set.
pub fn sample_expansion_graph(
    g: &OrderedBipartiteGraph,
    parts: &[Vec<Vec<usize>>; 2],
    threshold: Rational,
    samples: u64,
    seed: u64,
) -> Result<SamplingReport> {
    if g.len_a() != g.len_b() || g.len_a() < 2 {
        return Err(Error::input("sampling needs two equal classes of size at least 2"));
    }
    let (num, den) = (*threshold.numer() as i128, *threshold.denom() as i128);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SamplingReport {
        samples: 0,
        violations: 0,
        threshold,
        worst_epsilon: Rational::new(i64::MAX, 1),
        worst_set: Vec::new(),
    };
    let mut worst = (usize::MAX, 1usize);

    for (side, budget) in [(Side::A, samples / 2), (Side::B, samples - samples / 2)] {
        let nbrs = g.neighbours(side);
        let back = g.neighbours(side.other());
        let parts = &parts[usize::from(side == Side::B)];
        let mut walker = Walker::new(&nbrs, g.side(side.other()).len());
        let s = nbrs.len();
        let mut taken = 0u64;
        while taken < budget {
            if taken.is_multiple_of(RESTART_EVERY) {
                walker.clear();
                match rng.gen_range(0..3) {
                    0 if !parts.is_empty() => aligned_start(&mut walker, parts, &mut rng),
                    1 => ball_start(&mut walker, &back, &mut rng),
                    _ => {}
                }
            }
            let v = rng.gen_range(0..s);
            if walker.member[v].is_some() {
                walker.remove(v);
            } else {
                walker.add(v);
            }
            if walker.set.is_empty() {
                continue;
            }
            taken += 1;
            let (nb, sz) = (walker.neighbours, walker.set.len());
            if (nb as i128) * den < (den + num) * sz as i128 {
                report.violations += 1;
            }
            if nb * worst.1 < worst.0.saturating_mul(sz) || worst.0 == usize::MAX {
                worst = (nb, sz);
                let names = g.side(side);
                let mut set: Vec<String> = walker.set.iter().map(|&v| names[v].clone()).collect();
                set.sort();
                report.worst_set = set;
            }
        }
        report.samples += taken;
    }
    report.worst_epsilon = rational::rat(worst.0 as i64, worst.1 as i64) - rational::int(1);
    Ok(report)
}

/// A few whole parts plus random arcs of others.
fn aligned_start(walker: &mut Walker, parts: &[Vec<usize>], rng: &mut ChaCha8Rng) {
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.shuffle(rng);
    let heavy = rng.gen_range(0..=parts.len() / 2);
    for &c in &order[..heavy] {
        for &v in &parts[c] {
            walker.add(v);
        }
    }
    for &c in &order[heavy..] {
        let part = &parts[c];
        if part.len() > 1 && rng.gen_bool(0.3) {
            let start = rng.gen_range(0..part.len());
            let len = rng.gen_range(1..part.len());
            for j in 0..len {
                walker.add(part[(start + j) % part.len()]);
            }
        }
    }
}

/// Breadth-first ball around a random vertex, through common neighbours.
fn ball_start(walker: &mut Walker, back: &[Vec<usize>], rng: &mut ChaCha8Rng) {
    let n = walker.nbrs.len();
    let target = rng.gen_range(1..=walker.cap.max(1));
    let root = rng.gen_range(0..n);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        if walker.set.len() >= target {
            break;
        }
        walker.add(v);
        for &w in &walker.nbrs[v] {
            for &u in &back[w] {
                if !std::mem::replace(&mut seen[u], true) {
                    queue.push_back(u);
                }
            }
        }
    }
}

/// Exact minimum of `|N(S)|/|S| - 1` over sets that are unions of whole
/// in-class cycle parts with `|S| ≤ |class|/2`, over both classes. Needs at
/// most 20 seed vertices.
pub fn aligned_minimum(p: &PipelineGraph) -> Result<Rational> {
    let g = &p.gprime;
    let parts_count = p.cycles.cycles.len();
    if parts_count > 20 {
        return Err(Error::Capacity { what: "seed vertex count", actual: parts_count, limit: 20 });
    }
    let mut best: Option<Rational> = None;
    for side in [Side::A, Side::B] {
        let nbrs = g.neighbours(side);
        let parts = p.cycles.class_parts(g.len_a(), side == Side::A);
        let cap = nbrs.len() / 2;
        let mut seen = vec![0u32; g.side(side.other()).len()];
        for mask in 1u32..1 << parts_count {
            let size: usize = (0..parts_count).filter(|&c| mask >> c & 1 == 1).map(|c| parts[c].len()).sum();
            if size > cap {
                continue;
            }
            let mut count = 0;
            for c in (0..parts_count).filter(|&c| mask >> c & 1 == 1) {
                for &v in &parts[c] {
                    for &w in &nbrs[v] {
                        if seen[w] != mask {
                            seen[w] = mask;
                            count += 1;
                        }
                    }
                }
            }
            let eps = rational::rat(count as i64, size as i64) - rational::int(1);
            best = Some(best.map_or(eps, |b| b.min(eps)));
        }
    }
    best.ok_or_else(|| Error::input("no admissible cycle-aligned set"))
}

#[cfg(test)]
mod tests {
    use super::super::main_construct;
    use super::*;
    use crate::graph::decompose_monotone_greedy;
    use crate::rational::{int, rat};

    fn construct() -> PipelineGraph {
        let edges = (0..3).flat_map(|a| [(a, a), (a, (a + 1) % 3)]);
        let g = OrderedBipartiteGraph::with_sizes(3, 3, edges).unwrap();
        main_construct(&decompose_monotone_greedy(&g), 3, int(1)).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = construct();
        let a = sample_expansion(&p, rat(1, 39), 20_000, 5).unwrap();
        let b = sample_expansion(&p, rat(1, 39), 20_000, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 20_000);
    }

    #[test]
    fn sampling_reports_violations_of_a_high_threshold() {
        let p = construct();
        let r = sample_expansion(&p, int(5), 5_000, 1).unwrap();
        assert_eq!(r.violations, r.samples);
        assert!(r.worst_epsilon < int(5));
    }

    #[test]
    fn sampling_finds_a_planted_bottleneck() {
        // a0 and a1 share their only neighbour.
        let mut edges = vec![(0, 0), (1, 0)];
        edges.extend((2..8).flat_map(|a| (1..8).map(move |b| (a, b))));
        let g = OrderedBipartiteGraph::with_sizes(8, 8, edges).unwrap();
        let r = sample_expansion_graph(&g, &[vec![], vec![]], int(0), 50_000, 2).unwrap();
        assert!(r.violations > 0);
        assert_eq!(r.worst_epsilon, rat(-1, 2));
        assert_eq!(r.worst_set, ["a0", "a1"]);
    }

    #[test]
    fn aligned_minimum_of_a_single_heavy_cycle() {
        let p = construct();
        // One A-cycle part (7 vertices) reaches its 7 cycle neighbours plus
        // one cross neighbour per seed edge.
        let m = aligned_minimum(&p).unwrap();
        assert!(m > int(0));
        assert!(m <= rat(2, 7));
    }
}
