//! JSON file formats.
//!
//! Vertices are named by string ids everywhere; edges are pairs of ids.
//!
//! * bipartite graph: `{"sideA": [...], "sideB": [...], "edges": [[a, b], ...], "colors": [...]}`;
//!   a monotone decomposition is a bipartite graph with `colors` (1-based,
//!   parallel to `edges`).
//! * general graph: `{"vertices": [...], "edges": [[u, v], ...]}`
//! * linear layout: `{"mode": "book"|"queue", "order": [...], "parts": [[[u, v], ...], ...]}`
//! * track layout: `{"tracks": [[...], ...]}`

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MonotoneDecomposition, OrderedBipartiteGraph, SimpleGraph};
use crate::layouts::{LayoutMode, LinearLayout, TrackLayout};
use crate::rational::{self, Rational};
use crate::wall::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BipartiteFile {
    pub side_a: Vec<String>,
    pub side_b: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    /// Exhaustively computed two-sided expansion, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_star: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LayoutFile {
    pub mode: LayoutMode,
    pub order: Vec<String>,
    pub parts: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackFile {
    pub tracks: Vec<Vec<String>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("cannot parse {what}: {e}")))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

fn lookup(index: &HashMap<&str, usize>, id: &str) -> Result<usize> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| Error::input(format!("unknown vertex {id:?}")))
}

fn index_of(ids: &[String]) -> HashMap<&str, usize> {
    ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

pub fn bipartite_to_file(g: &OrderedBipartiteGraph, epsilon_star: Option<Rational>) -> BipartiteFile {
    BipartiteFile {
        side_a: g.side_a().to_vec(),
        side_b: g.side_b().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|&(a, b)| (g.side_a()[a].clone(), g.side_b()[b].clone()))
            .collect(),
        colors: g.colors().map(<[u32]>::to_vec),
        epsilon_star: epsilon_star.map(|e| rational::format(&e)),
    }
}

pub fn bipartite_from_file(f: &BipartiteFile) -> Result<OrderedBipartiteGraph> {
    let (ia, ib) = (index_of(&f.side_a), index_of(&f.side_b));
    let edges = f
        .edges
        .iter()
        .map(|(a, b)| Ok((lookup(&ia, a)?, lookup(&ib, b)?)))
        .collect::<Result<Vec<_>>>()?;
    match &f.colors {
        Some(c) => OrderedBipartiteGraph::with_colors(f.side_a.clone(), f.side_b.clone(), edges, c.clone()),
        None => OrderedBipartiteGraph::new(f.side_a.clone(), f.side_b.clone(), edges),
    }
}

pub fn write_bipartite(g: &OrderedBipartiteGraph, epsilon_star: Option<Rational>) -> String {
    pretty(&bipartite_to_file(g, epsilon_star))
}

pub fn read_bipartite(text: &str) -> Result<OrderedBipartiteGraph> {
    bipartite_from_file(&parse(text, "bipartite graph")?)
}

/// `epsilonStar` recorded in a bipartite graph file, if any.
pub fn read_epsilon_star(text: &str) -> Result<Option<Rational>> {
    let f: BipartiteFile = parse(text, "bipartite graph")?;
    f.epsilon_star.as_deref().map(rational::parse).transpose()
}

pub fn write_decomposition(d: &MonotoneDecomposition, epsilon_star: Option<Rational>) -> Result<String> {
    Ok(write_bipartite(&d.to_colored_graph()?, epsilon_star))
}

pub fn read_decomposition(text: &str) -> Result<MonotoneDecomposition> {
    MonotoneDecomposition::from_colors(&read_bipartite(text)?, None)
}

pub fn write_graph(g: &SimpleGraph) -> String {
    pretty(&GraphFile {
        vertices: g.ids().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|&(u, v)| (g.id(u).to_string(), g.id(v).to_string()))
            .collect(),
    })
}

/// Reads either file kind as a simple graph (bipartite files flatten A
/// then B).
pub fn read_any_graph(text: &str) -> Result<SimpleGraph> {
    let value: serde_json::Value = parse(text, "graph")?;
    if value.get("sideA").is_some() {
        Ok(read_bipartite(text)?.to_simple())
    } else {
        let f: GraphFile = parse(text, "graph")?;
        let index = index_of(&f.vertices);
        let edges = f
            .edges
            .iter()
            .map(|(u, v)| Ok((lookup(&index, u)?, lookup(&index, v)?)))
            .collect::<Result<Vec<_>>>()?;
        SimpleGraph::new(f.vertices, edges)
    }
}

pub fn write_layout(l: &LinearLayout) -> String {
    let g = &l.graph;
    let name = |e: usize| {
        let (u, v) = g.edge(e);
        (g.id(u).to_string(), g.id(v).to_string())
    };
    pretty(&LayoutFile {
        mode: l.mode,
        order: l.order.iter().map(|&v| g.id(v).to_string()).collect(),
        parts: l.parts.iter().map(|p| p.iter().map(|&e| name(e)).collect()).collect(),
    })
}

/// Reads a layout. Without `graph`, the graph is the vertices of `order`
/// and the edges of `parts`.
pub fn read_layout(text: &str, graph: Option<&SimpleGraph>) -> Result<LinearLayout> {
    let f: LayoutFile = parse(text, "layout")?;
    let g = match graph {
        Some(g) => g.clone(),
        None => {
            let index = index_of(&f.order);
            let edges = f
                .parts
                .iter()
                .flatten()
                .map(|(u, v)| Ok((lookup(&index, u)?, lookup(&index, v)?)))
                .collect::<Result<Vec<_>>>()?;
            SimpleGraph::new(f.order.clone(), edges)?
        }
    };
    let index = index_of(g.ids());
    let order = f.order.iter().map(|id| lookup(&index, id)).collect::<Result<Vec<_>>>()?;
    let mut parts = Vec::with_capacity(f.parts.len());
    for part in &f.parts {
        let mut edges = Vec::with_capacity(part.len());
        for (u, v) in part {
            let (u, v) = (lookup(&index, u)?, lookup(&index, v)?);
            let e = g
                .edge_index(u, v)
                .ok_or_else(|| Error::input(format!("{}-{} is not an edge of the graph", g.id(u), g.id(v))))?;
            edges.push(e);
        }
        parts.push(edges);
    }
    Ok(LinearLayout::new(g, order, parts, f.mode))
}

pub fn write_tracks(t: &TrackLayout, g: &SimpleGraph) -> String {
    pretty(&TrackFile {
        tracks: t
            .tracks
            .iter()
            .map(|track| track.iter().map(|&v| g.id(v).to_string()).collect())
            .collect(),
    })
}

pub fn read_tracks(text: &str, g: &SimpleGraph) -> Result<TrackLayout> {
    let f: TrackFile = parse(text, "track layout")?;
    let index = index_of(g.ids());
    let tracks = f
        .tracks
        .iter()
        .map(|track| track.iter().map(|id| lookup(&index, id)).collect())
        .collect::<Result<Vec<_>>>()?;
    Ok(TrackLayout::new(tracks))
}

/// One `NAME -> x,y` line per entry.
pub fn write_embedding<'a>(entries: impl IntoIterator<Item = (String, &'a Coord)>) -> String {
    entries
        .into_iter()
        .map(|(name, c)| format!("{name} -> {},{}\n", c.0, c.1))
        .collect()
}

pub fn read_embedding(text: &str) -> Result<Vec<(String, Coord)>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let bad = || Error::input(format!("bad embedding line {line:?}"));
            let (name, coord) = line.split_once("->").ok_or_else(bad)?;
            let (x, y) = coord.trim().split_once(',').ok_or_else(bad)?;
            let x = x.trim().parse().map_err(|_| bad())?;
            let y = y.trim().parse().map_err(|_| bad())?;
            Ok((name.trim().to_string(), (x, y)))
        })
        .collect()
}
