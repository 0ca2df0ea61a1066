//! Embedding the quotient `H` in the wall.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{all_tracks, full_quotient, Role, Track};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::wall::{wall_adjacent, Coord, WallPatch};

/// Node budget of the fallback search in [`embed_h_in_wall`].
pub const SEARCH_BUDGET: usize = 2_000_000;

/// Coordinates of every track (in [`all_tracks`] order). The A-cycle runs
/// along rows 0 and 1 over `x` in `0..=2k`; the B-cycle wraps around it on
/// rows -1 to 2, turning at `x = -2` and `x = 2k + 2`.
pub fn closed_form_embedding(k: usize) -> Vec<Coord> {
    let k = k as i64;
    all_tracks(k as usize)
        .into_iter()
        .map(|Track { role, index: i }| match role {
            Role::V => (2 * i - 1, 1),
            Role::Nu => (2 * i, 1),
            Role::VPrime => (2 * i - 1, 0),
            Role::NuPrime => (2 * i, 0),
            Role::W if i == -1 => (-2, 1),
            Role::W if i == k + 2 => (2 * k + 2, 1),
            Role::W => (2 * i - 1, 2),
            Role::Omega if i == -1 => (-1, 1),
            Role::Omega if i == k + 1 => (2 * k + 1, 1),
            Role::Omega => (2 * i, 2),
            Role::WPrime if i == -1 => (-2, 0),
            Role::WPrime if i == k + 2 => (2 * k + 2, 0),
            Role::WPrime => (2 * i - 1, -1),
            Role::OmegaPrime if i == -1 => (-1, 0),
            Role::OmegaPrime if i == k + 1 => (2 * k + 1, 0),
            Role::OmegaPrime => (2 * i, -1),
        })
        .collect()
}

/// Checks that `coords` is injective and maps every edge of `h` to a wall
/// edge.
pub fn verify_embedding(h: &SimpleGraph, coords: &[Coord]) -> Result<()> {
    if coords.len() != h.vertex_count() {
        return Err(Error::Invariant(format!(
            "{} coordinates for {} vertices",
            coords.len(),
            h.vertex_count()
        )));
    }
    let mut used = HashMap::new();
    for (v, &c) in coords.iter().enumerate() {
        if let Some(u) = used.insert(c, v) {
            return Err(Error::Invariant(format!("{} and {} both sit at {c:?}", h.id(u), h.id(v))));
        }
    }
    for &(u, v) in h.edges() {
        if !wall_adjacent(coords[u], coords[v]) {
            return Err(Error::Invariant(format!(
                "edge {}-{} maps to {:?}-{:?}, which is not a wall edge",
                h.id(u),
                h.id(v),
                coords[u],
                coords[v]
            )));
        }
    }
    Ok(())
}

/// Closed-form embedding of the full `H`, falling back to
/// [`search_embedding`] if the closed form does not verify.
pub fn embed_h_in_wall(k: usize) -> Result<Vec<Coord>> {
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k} is below 2")));
    }
    let h = full_quotient(k);
    let coords = closed_form_embedding(k);
    if verify_embedding(&h, &coords).is_ok() {
        return Ok(coords);
    }
    log::warn!("closed-form embedding failed for k = {k}; searching");
    let k = k as i64;
    let patch = WallPatch::new(-3, 2 * k + 3, -2, 3)?;
    let coords = search_embedding(&h, &patch, SEARCH_BUDGET)?;
    verify_embedding(&h, &coords)?;
    Ok(coords)
}

/// Backtracking search for an injective map of `h` into `patch` sending
/// edges to wall edges. Vertices are placed in breadth-first order, each
/// next to an already placed neighbour. Gives up after `budget` placements.
pub fn search_embedding(h: &SimpleGraph, patch: &WallPatch, budget: usize) -> Result<Vec<Coord>> {
    let adj = h.adjacency();
    if let Some(v) = (0..h.vertex_count()).find(|&v| adj[v].len() > 3) {
        return Err(Error::Unsatisfiable(format!("{} has degree {} > 3", h.id(v), adj[v].len())));
    }
    if h.vertex_count() > patch.vertex_count() {
        return Err(Error::Unsatisfiable("patch has fewer cells than H has vertices".into()));
    }

    let n = h.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut search = Search {
        adj: &adj,
        patch,
        order: &order,
        parent: &parent,
        coords: vec![None; n],
        used: HashSet::new(),
        nodes: 0,
        budget,
    };
    if search.place(0)? {
        Ok(search.coords.into_iter().map(|c| c.expect("all placed")).collect())
    } else {
        Err(Error::Unsatisfiable("no embedding in the patch".into()))
    }
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    patch: &'a WallPatch,
    order: &'a [usize],
    parent: &'a [usize],
    coords: Vec<Option<Coord>>,
    used: HashSet<Coord>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn wall_neighbours(&self, c: Coord) -> Vec<Coord> {
        [(c.0 - 1, c.1), (c.0 + 1, c.1), (c.0, c.1 - 1), (c.0, c.1 + 1)]
            .into_iter()
            .filter(|&d| self.patch.contains(d) && wall_adjacent(c, d))
            .collect()
    }

    fn fits(&self, v: usize, c: Coord) -> bool {
        if self.used.contains(&c) {
            return false;
        }
        let mut unplaced = 0;
        for &w in &self.adj[v] {
            match self.coords[w] {
                Some(d) if !wall_adjacent(c, d) => return false,
                Some(_) => {}
                None => unplaced += 1,
            }
        }
        let free = self.wall_neighbours(c).into_iter().filter(|d| !self.used.contains(d)).count();
        unplaced <= free
    }

    fn place(&mut self, step: usize) -> Result<bool> {
        if step == self.order.len() {
            return Ok(true);
        }
        let v = self.order[step];
        let candidates: Vec<Coord> = match self.parent[v] {
            usize::MAX => self.patch.vertices(),
            p => self.wall_neighbours(self.coords[p].expect("parent placed first")),
        };
        for c in candidates {
            if !self.fits(v, c) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Unsatisfiable(format!("search budget of {} nodes exhausted", self.budget)));
            }
            self.coords[v] = Some(c);
            self.used.insert(c);
            if self.place(step + 1)? {
                return Ok(true);
            }
            self.used.remove(&c);
            self.coords[v] = None;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::with_vertex_count(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn closed_form_verifies_for_small_k() {
        for k in 2..=12 {
            let h = full_quotient(k);
            let coords = closed_form_embedding(k);
            verify_embedding(&h, &coords).unwrap();
            assert_eq!(embed_h_in_wall(k).unwrap(), coords);
        }
    }

    #[test]
    fn inner_cycle_is_nested() {
        let k = 3;
        let coords = closed_form_embedding(k);
        let la = 4 * k + 2;
        let inner = WallPatch::bounding(coords[..la].iter().copied()).unwrap();
        let outer = WallPatch::bounding(coords[la..].iter().copied()).unwrap();
        assert!(outer.x0 < inner.x0 && inner.x1 < outer.x1);
        assert!(outer.y0 < inner.y0 && inner.y1 < outer.y1);
    }

    #[test]
    fn verification_rejects_non_wall_edges() {
        let k = 3;
        let h = full_quotient(k);
        let mut edges = h.edges().to_vec();
        edges.push((0, 5));
        let mutated = SimpleGraph::new(h.ids().to_vec(), edges).unwrap();
        assert!(matches!(
            verify_embedding(&mutated, &closed_form_embedding(k)),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn search_finds_small_subgraphs() {
        let patch = WallPatch::new(0, 5, 0, 3).unwrap();
        for g in [cycle(6), cycle(10), SimpleGraph::with_vertex_count(5, (0..4).map(|i| (i, i + 1))).unwrap()] {
            let coords = search_embedding(&g, &patch, 100_000).unwrap();
            verify_embedding(&g, &coords).unwrap();
        }
    }

    #[test]
    fn search_rejects_impossible_graphs() {
        let patch = WallPatch::new(0, 5, 0, 3).unwrap();
        let star = SimpleGraph::with_vertex_count(5, (1..5).map(|i| (0, i))).unwrap();
        assert!(matches!(search_embedding(&star, &patch, 100_000), Err(Error::Unsatisfiable(_))));
        // Odd cycles cannot embed in a bipartite host.
        assert!(matches!(search_embedding(&cycle(5), &patch, 100_000), Err(Error::Unsatisfiable(_))));
        // The 4-cycle is not a wall subgraph: the wall's shortest cycle has length 6.
        assert!(matches!(search_embedding(&cycle(4), &patch, 100_000), Err(Error::Unsatisfiable(_))));
    }

    #[test]
    fn degree_four_mutation_is_unsatisfiable() {
        let h = full_quotient(2);
        assert_eq!(h.adjacency()[1].len(), 3);
        let mut edges = h.edges().to_vec();
        edges.push((1, 12));
        let mutated = SimpleGraph::new(h.ids().to_vec(), edges).unwrap();
        let patch = WallPatch::new(-3, 7, -2, 3).unwrap();
        assert!(matches!(search_embedding(&mutated, &patch, 10_000), Err(Error::Unsatisfiable(_))));
    }

    #[test]
    fn search_recovers_an_embedding_of_h() {
        let h = full_quotient(2);
        let patch = WallPatch::new(-3, 7, -2, 3).unwrap();
        let coords = search_embedding(&h, &patch, SEARCH_BUDGET).unwrap();
        verify_embedding(&h, &coords).unwrap();
    }
}
