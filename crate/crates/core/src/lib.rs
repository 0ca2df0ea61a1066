//! Layouts of bipartite expanders.
//!
//! The crate builds graphs that carry simultaneous 3-monotone, 3-pushdown,
//! 2-queue and 4-track layouts out of small two-sided monotone bipartite
//! expanders, and checks every property with exact, exhaustive oracles:
//!
//! * [`graph`]: ordered bipartite graphs, crossing predicate, monotone
//!   decompositions (greedy and exact).
//! * [`layouts`]: book, queue and track layouts with brute-force validators,
//!   plus the monotone-to-book and monotone-to-queue conversions.
//! * [`expansion`]: exact vertex expansion, balanced separators and the cycle
//!   independent-set bound.
//! * [`wall`]: finite patches of the wall and its three layouts.
//! * [`transforms`]: two-sided lift, unraveling and the 2-subdivision.
//! * [`pipeline`]: generalized unraveling, the quotient `H`, its wall
//!   embedding and the pulled-back layouts.
//! * [`render`]: SVG arc diagrams and the certified thickness-2 drawing.
//! * [`io`] and [`generate`]: file formats and seeded generators.

#![forbid(unsafe_code)]

pub mod error;
pub mod expansion;
pub mod generate;
pub mod graph;
pub mod io;
pub mod layouts;
pub mod pipeline;
pub mod rational;
pub mod render;
pub mod report;
pub mod transforms;
pub mod wall;

pub use error::{Error, Result};
pub use graph::{MonotoneDecomposition, OrderedBipartiteGraph, Side, SimpleGraph};
pub use layouts::{LayoutMode, LinearLayout, TrackLayout};
pub use rational::Rational;
