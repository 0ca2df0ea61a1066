//! Exact vertex expansion, balanced separators and the cycle
//! independent-set bound.
//!
//! Everything here is exhaustive and uses exact rationals. Subset
//! enumeration walks a Gray code so each step adds or drops one vertex and
//! the neighbourhood size is updated from per-vertex hit counts.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{OrderedBipartiteGraph, Side, SimpleGraph};
use crate::rational::{self, Rational};

/// Largest side the exhaustive expansion oracle accepts.
pub const EXPANSION_LIMIT: usize = 24;
/// Default vertex limit for [`min_separator`].
pub const SEPARATOR_LIMIT: usize = 14;

/// Number of high bits used to split the enumeration across workers.
const PREFIX_BITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportSide {
    A,
    B,
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpansionReport {
    /// `min |N(S)|/|S| - 1`; `None` when some admissible `S` has fewer
    /// neighbours than members, in which case `witness` is that set.
    #[serde(with = "rational::option")]
    pub epsilon_star: Option<Rational>,
    pub witness: Vec<String>,
    pub side: ReportSide,
    #[serde(skip)]
    pub witness_side: Side,
    #[serde(skip)]
    pub witness_indices: Vec<usize>,
    #[serde(skip)]
    pub neighbourhood: usize,
}

impl ExpansionReport {
    /// `|N(S)| / |S|` of the witness.
    pub fn ratio(&self) -> Rational {
        rational::rat(self.neighbourhood as i64, self.witness_indices.len() as i64)
    }

    pub fn is_expander(&self) -> bool {
        self.epsilon_star.is_some_and(|e| e > rational::int(0))
    }
}

/// Best subset seen so far, ordered by `(ratio, size, mask)`.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    neighbours: u32,
    size: u32,
    mask: u32,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        let lhs = self.neighbours as u64 * other.size as u64;
        let rhs = other.neighbours as u64 * self.size as u64;
        (lhs, self.size, self.mask) < (rhs, other.size, other.mask)
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn check_sides(g: &OrderedBipartiteGraph) -> Result<()> {
    if g.len_a() != g.len_b() {
        return Err(Error::input(format!(
            "expansion needs |A| = |B|, got {} and {}",
            g.len_a(),
            g.len_b()
        )));
    }
    if g.len_a() > EXPANSION_LIMIT {
        return Err(Error::Capacity { what: "side size", actual: g.len_a(), limit: EXPANSION_LIMIT });
    }
    if g.len_a() < 2 {
        return Err(Error::input("expansion needs at least two vertices per side"));
    }
    Ok(())
}

/// Enumerate the subsets whose top `PREFIX_BITS` bits equal `prefix`.
fn scan_prefix(nbrs: &[Vec<usize>], other: usize, cap: u32, low_bits: usize, prefix: u32) -> Option<Candidate> {
    let mut hits = vec![0u32; other];
    let mut neighbours = 0u32;
    let mut size = 0u32;
    let add = |v: usize, hits: &mut [u32], neighbours: &mut u32| {
        for &w in &nbrs[v] {
            if hits[w] == 0 {
                *neighbours += 1;
            }
            hits[w] += 1;
        }
    };
    for v in low_bits..nbrs.len() {
        if prefix >> (v - low_bits) & 1 == 1 {
            add(v, &mut hits, &mut neighbours);
            size += 1;
        }
    }
    if size > cap {
        return None;
    }

    let mut best = None;
    let mut low = 0u32;
    let consider = |best: &mut Option<Candidate>, low: u32, size: u32, neighbours: u32| {
        if size >= 1 && size <= cap {
            let c = Candidate { neighbours, size, mask: prefix << low_bits | low };
            *best = pick(*best, Some(c));
        }
    };
    consider(&mut best, low, size, neighbours);
    for step in 1u64..(1u64 << low_bits) {
        let v = step.trailing_zeros() as usize;
        low ^= 1 << v;
        if low >> v & 1 == 1 {
            add(v, &mut hits, &mut neighbours);
            size += 1;
        } else {
            for &w in &nbrs[v] {
                hits[w] -= 1;
                if hits[w] == 0 {
                    neighbours -= 1;
                }
            }
            size -= 1;
        }
        consider(&mut best, low, size, neighbours);
    }
    best
}

fn minimum_ratio(nbrs: &[Vec<usize>], other: usize) -> Candidate {
    let s = nbrs.len();
    let cap = (s / 2) as u32;
    let prefix_bits = PREFIX_BITS.min(s);
    let low_bits = s - prefix_bits;
    (0u32..1 << prefix_bits)
        .into_par_iter()
        .map(|prefix| scan_prefix(nbrs, other, cap, low_bits, prefix))
        .reduce(|| None, pick)
        .expect("side has at least two vertices")
}

fn report_from(g: &OrderedBipartiteGraph, side: Side, best: Candidate) -> ExpansionReport {
    let witness_indices: Vec<usize> = (0..g.side(side).len()).filter(|&v| best.mask >> v & 1 == 1).collect();
    let ratio = rational::rat(best.neighbours as i64, best.size as i64);
    let epsilon = ratio - rational::int(1);
    ExpansionReport {
        epsilon_star: (epsilon >= rational::int(0)).then_some(epsilon),
        witness: witness_indices.iter().map(|&v| g.side(side)[v].clone()).collect(),
        side: match side {
            Side::A => ReportSide::A,
            Side::B => ReportSide::B,
        },
        witness_side: side,
        witness_indices,
        neighbourhood: best.neighbours as usize,
    }
}

/// Exact `ε*` of one side: the minimum of `|N(S)|/|S| - 1` over nonempty
/// `S` with `|S| ≤ |side|/2`. Ties go to the smaller set, then to the set
/// with the smaller bitmask.
pub fn expansion_one_sided(g: &OrderedBipartiteGraph, side: Side) -> Result<ExpansionReport> {
    check_sides(g)?;
    let nbrs = g.neighbours(side);
    let best = minimum_ratio(&nbrs, g.side(side.other()).len());
    Ok(report_from(g, side, best))
}

/// Minimum of both one-sided reports; A wins ties.
pub fn expansion_two_sided(g: &OrderedBipartiteGraph) -> Result<ExpansionReport> {
    let a = expansion_one_sided(g, Side::A)?;
    let b = expansion_one_sided(g, Side::B)?;
    let mut best = if b.ratio() < a.ratio() { b } else { a };
    best.side = ReportSide::Both;
    Ok(best)
}

/// `|N(S)|` for a subset of one side.
pub fn neighbourhood_size(g: &OrderedBipartiteGraph, side: Side, set: &[usize]) -> Result<usize> {
    let nbrs = g.neighbours(side);
    let mut seen = vec![false; g.side(side.other()).len()];
    let mut count = 0;
    for &v in set {
        let list = nbrs
            .get(v)
            .ok_or_else(|| Error::input(format!("vertex {v} is not on side {side:?}")))?;
        for &w in list {
            if !seen[w] {
                seen[w] = true;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Re-evaluate a report's witness: `|N(S)|/|S| - 1`.
pub fn witness_epsilon(g: &OrderedBipartiteGraph, report: &ExpansionReport) -> Result<Rational> {
    let n = report.witness_indices.len();
    if n == 0 {
        return Err(Error::input("empty witness"));
    }
    let nb = neighbourhood_size(g, report.witness_side, &report.witness_indices)?;
    Ok(rational::rat(nb as i64, n as i64) - rational::int(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparatorReport {
    pub min_size: usize,
    pub witness: Vec<String>,
    #[serde(with = "rational::option")]
    pub bound: Option<Rational>,
    #[serde(skip)]
    pub witness_indices: Vec<usize>,
}

impl SeparatorReport {
    /// Attach the lower bound for a bipartite `ε`-expander with `n`
    /// vertices per side.
    pub fn with_bound(mut self, epsilon: Rational, n: usize) -> Result<Self> {
        self.bound = Some(separator_lower_bound(epsilon, n)?);
        Ok(self)
    }
}

/// Whether removing `removed` leaves every component with
/// `2 * size <= |V|`.
pub fn is_balanced_separator(g: &SimpleGraph, removed: &[usize]) -> bool {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut blocked = vec![false; n];
    for &z in removed {
        if z < n {
            blocked[z] = true;
        }
    }
    let mut queue = VecDeque::new();
    for start in 0..n {
        if blocked[start] {
            continue;
        }
        blocked[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in &adj[u] {
                if !blocked[w] {
                    blocked[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if 2 * size > n {
            return false;
        }
    }
    true
}

/// Smallest balanced separator, trying subsets in increasing size and, per
/// size, in lexicographic order.
pub fn min_separator(g: &SimpleGraph, limit: usize) -> Result<SeparatorReport> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::Capacity { what: "vertex count", actual: n, limit });
    }
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if is_balanced_separator(g, &combo) {
                return Ok(SeparatorReport {
                    min_size: size,
                    witness: combo.iter().map(|&v| g.id(v).to_string()).collect(),
                    bound: None,
                    witness_indices: combo,
                });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("removing every vertex always separates")
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `(ε/2)(n-1) - 1`.
pub fn separator_lower_bound(epsilon: Rational, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    Ok(epsilon / rational::int(2) * rational::int(n as i64 - 1) - rational::int(1))
}

/// `|N_C(I)|` for an independent set `I` of the cycle `C` on vertices
/// `0..len`, and whether `|N_C(I)| = |I|`.
pub fn cycle_neighborhood_check(len: usize, set: &[usize]) -> Result<(usize, bool)> {
    if len < 3 {
        return Err(Error::input("a cycle has at least three vertices"));
    }
    let mut member = vec![false; len];
    for &i in set {
        if i >= len {
            return Err(Error::input(format!("index {i} is outside a cycle of length {len}")));
        }
        if member[i] {
            return Err(Error::input(format!("index {i} is repeated")));
        }
        member[i] = true;
    }
    for &i in set {
        if member[(i + 1) % len] {
            return Err(Error::input(format!("{i} and {} are adjacent", (i + 1) % len)));
        }
    }
    let mut hit = vec![false; len];
    for &i in set {
        hit[(i + 1) % len] = true;
        hit[(i + len - 1) % len] = true;
    }
    let size = hit.iter().filter(|&&h| h).count();
    let equal = size == set.len();
    if size < set.len() || (equal && !set.is_empty() && len != 2 * set.len()) {
        return Err(Error::Invariant(format!(
            "cycle of length {len}: |N(I)| = {size} against |I| = {}",
            set.len()
        )));
    }
    Ok((size, equal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupancy {
    Heavy,
    Light,
    Unused,
}

/// Classify each cycle by how much of its in-class part lies in `set`.
/// `cycles[v]` lists the vertices of `C_v` in the class containing `set`,
/// so `k_v = cycles[v].len()`.
pub fn classify_occupancy(cycles: &[Vec<usize>], set: &[usize]) -> Vec<Occupancy> {
    let members: std::collections::HashSet<usize> = set.iter().copied().collect();
    cycles
        .iter()
        .map(|cycle| {
            let hit = cycle.iter().filter(|v| members.contains(v)).count();
            if hit == 0 {
                Occupancy::Unused
            } else if hit == cycle.len() {
                Occupancy::Heavy
            } else {
                Occupancy::Light
            }
        })
        .collect()
}
