//! Seeded random generators: monotone matchings, two-sided seed expanders
//! and random graphs for test corpora. Every generator is a pure function
//! of its arguments and the `u64` seed (ChaCha8).

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{expansion_two_sided, EXPANSION_LIMIT};
use crate::graph::{BiEdge, MonotoneDecomposition, OrderedBipartiteGraph, SimpleGraph};
use crate::layouts::{LayoutMode, LinearLayout};
use crate::rational::{self, int, Rational};
use crate::transforms::two_sided;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random monotone matching of `size` edges between sides of size `n`
/// and `m`: two sorted random subsets paired in order.
pub fn random_monotone_matching<R: Rng>(n: usize, m: usize, size: usize, rng: &mut R) -> Vec<BiEdge> {
    let size = size.min(n).min(m);
    let mut a = index::sample(rng, n, size).into_vec();
    let mut b = index::sample(rng, m, size).into_vec();
    a.sort_unstable();
    b.sort_unstable();
    a.into_iter().zip(b).collect()
}

/// Union of `k` random monotone matchings of sizes in `[n - 2, n]`, each
/// edge kept in the first matching that drew it.
pub fn random_monotone_decomposition<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<MonotoneDecomposition> {
    let groups: Vec<Vec<BiEdge>> = (0..k)
        .map(|_| {
            let size = rng.gen_range(n.saturating_sub(2).max(1)..=n.max(1));
            random_monotone_matching(n, n, size, rng)
        })
        .collect();
    decomposition_of(n, groups)
}

fn decomposition_of(n: usize, groups: Vec<Vec<BiEdge>>) -> Result<MonotoneDecomposition> {
    let g = OrderedBipartiteGraph::with_sizes(n, n, groups.iter().flatten().copied())?;
    let mut taken = vec![false; g.edge_count()];
    let matchings = groups
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|&e| g.edge_index(e).expect("edge is in the union"))
                .filter(|&e| !std::mem::replace(&mut taken[e], true))
                .collect()
        })
        .collect();
    Ok(MonotoneDecomposition::new(g, matchings))
}

/// Which seeds [`generate_seed`] accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedTarget {
    /// `k * eps* >= 3`.
    Feasible,
    /// `k = max(3, ceil(3 / eps*))`.
    Tight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSeed {
    /// Exactly `k` matchings (padded with empty ones).
    pub decomposition: MonotoneDecomposition,
    pub epsilon_star: Rational,
    /// Samples drawn, including the accepted one.
    pub attempts: usize,
}

/// Smallest cycle parameter the construction accepts for `epsilon`:
/// `max(3, ceil(3 / epsilon))`.
pub fn minimal_k(epsilon: Rational) -> Result<usize> {
    if epsilon <= int(0) {
        return Err(Error::input(format!("epsilon {} is not positive", rational::format(&epsilon))));
    }
    Ok((rational::ceil(&(int(3) / epsilon)) as usize).max(3))
}

/// Samples two-sided monotone expanders on `n + n` vertices with at most
/// `k` matchings until one meets `target`: `k / 2` one-sided matchings are
/// lifted by [`two_sided`], plus one more random matching when `k` is odd.
pub fn generate_seed(n: usize, k: usize, target: SeedTarget, seed: u64, attempts: usize) -> Result<GeneratedSeed> {
    if n < 2 || k < 2 {
        return Err(Error::input(format!("need n >= 2 and k >= 2, got n = {n}, k = {k}")));
    }
    if 2 * n > EXPANSION_LIMIT {
        return Err(Error::Capacity { what: "seed vertex count", actual: 2 * n, limit: EXPANSION_LIMIT });
    }
    let mut rng = rng(seed);
    for attempt in 1..=attempts {
        let base = random_monotone_decomposition(n, k / 2, &mut rng)?;
        let lifted = two_sided(&base)?;
        let mut groups: Vec<Vec<BiEdge>> = (0..lifted.len()).map(|m| lifted.matching_edges(m).collect()).collect();
        if k % 2 == 1 {
            let size = rng.gen_range(n.saturating_sub(2).max(1)..=n);
            groups.push(random_monotone_matching(n, n, size, &mut rng));
        }
        let d = decomposition_of(n, groups)?.compacted();
        if d.len() > k {
            continue;
        }
        let Some(eps) = expansion_two_sided(&d.graph)?.epsilon_star else { continue };
        if eps <= int(0) {
            continue;
        }
        let accept = match target {
            SeedTarget::Feasible => int(k as i64) * eps >= int(3),
            SeedTarget::Tight => minimal_k(eps)? == k,
        };
        if accept {
            log::debug!("seed accepted after {attempt} samples, eps* = {}", rational::format(&eps));
            return Ok(GeneratedSeed { decomposition: d.padded(k), epsilon_star: eps, attempts: attempt });
        }
    }
    Err(Error::Unsatisfiable(format!(
        "no sample among {attempts} on {n} + {n} vertices with {k} matchings met the expansion target"
    )))
}

/// Erdős–Rényi bipartite graph with sides `a*`, `b*`.
pub fn random_bipartite<R: Rng>(n: usize, m: usize, p: f64, rng: &mut R) -> Result<OrderedBipartiteGraph> {
    let edges: Vec<BiEdge> = (0..n)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    OrderedBipartiteGraph::with_sizes(n, m, edges)
}

/// A random graph with a valid `pages`-page book layout in a shuffled
/// vertex order: `tries` random edges, each put on the first page where it
/// crosses nothing and dropped when no page fits.
pub fn random_book_layout<R: Rng>(n: usize, pages: usize, tries: usize, rng: &mut R) -> Result<LinearLayout> {
    if n < 2 {
        return Err(Error::input("a book layout with edges needs two vertices"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut by_page: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pages];
    let mut seen = std::collections::HashSet::new();
    for _ in 0..tries {
        let (mut a, mut b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if !seen.insert((a, b)) {
            continue;
        }
        let free = |&(c, d): &(usize, usize)| !((a < c && c < b && b < d) || (c < a && a < d && d < b));
        if let Some(page) = by_page.iter_mut().find(|p| p.iter().all(free)) {
            page.push((a, b));
        }
    }
    let g = SimpleGraph::with_vertex_count(
        n,
        by_page.iter().flatten().map(|&(a, b)| (order[a], order[b])),
    )?;
    let parts = by_page
        .iter()
        .map(|p| p.iter().map(|&(a, b)| g.edge_index(order[a], order[b]).expect("edge added")).collect())
        .collect();
    Ok(LinearLayout::new(g, order, parts, LayoutMode::Book))
}
