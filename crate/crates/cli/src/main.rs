//! `xlayout`: build, transform, verify and draw layouts of bipartite
//! expanders.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the JSON
//! report on stdout carries the witnesses), 2 for unreadable input or a
//! capacity guard.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod run;

#[derive(Parser, Debug)]
#[command(name = "xlayout", version, about = "Layouts of bipartite expanders with exact verification")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving output files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a two-sided monotone expander seed with its decomposition and exact ε*.
    Generate(GenerateArgs),
    /// Apply a graph transformation.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Run the full construction.
    #[command(subcommand)]
    Pipeline(PipelineCommand),
    /// Build a layout of a graph or of a wall patch.
    Layout(LayoutArgs),
    /// Check a property; exit 0 on pass and 1 on failure.
    Verify(VerifyArgs),
    /// Draw a layout as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Vertices per side.
    #[arg(long)]
    n: usize,
    /// Cycle parameter; the seed gets at most k matchings.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    attempts: usize,
    /// Require k = max(3, ceil(3/ε*)) instead of k ≥ 3/ε*.
    #[arg(long)]
    tight: bool,
    #[arg(long, default_value = "seed.json")]
    out: String,
}

#[derive(Subcommand, Debug)]
enum TransformCommand {
    /// Add the mirror of every edge.
    TwoSided(TransformArgs),
    /// Unravel a book layout or a monotone decomposition.
    Unravel(TransformArgs),
    /// Subdivide every edge twice.
    Subdivide(SubdivideArgs),
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct SubdivideArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<String>,
    /// Expansion of the input; defaults to its recorded `epsilonStar`.
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Subcommand, Debug)]
enum PipelineCommand {
    Run(PipelineArgs),
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Seed graph file with edge colours (or none, for a greedy decomposition).
    #[arg(long)]
    seed: PathBuf,
    #[arg(long)]
    k: usize,
    /// Defaults to the exhaustively computed ε* of the seed.
    #[arg(long)]
    epsilon: Option<String>,
    /// Random subsets tried by the expansion check on G'.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LayoutKind {
    Book,
    Queue,
    Track,
    Monotone,
}

#[derive(Args, Debug)]
struct LayoutArgs {
    kind: LayoutKind,
    /// Bipartite graph file; omit to lay out the wall patch given by --x0 --x1 --y0 --y1.
    #[arg(long, conflicts_with_all = ["x0", "x1", "y0", "y1"])]
    input: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    y1: Option<i64>,
    /// Minimum decomposition by branch-and-bound instead of greedy.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Expansion,
    Separator,
    Layout,
    Pushdown,
    StrictQueue,
    Track,
    Monotone,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    #[arg(long)]
    input: PathBuf,
    /// Graph for track files, or to check a layout against.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Required expansion (expansion) or the ε giving the lower bound (separator).
    #[arg(long)]
    epsilon: Option<String>,
    /// Sample this many subsets instead of enumerating all of them.
    #[arg(long)]
    samples: Option<u64>,
    /// Earlier report whose witness should be re-confirmed.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Style {
    Arcs,
    Thickness2,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    layout: PathBuf,
    #[arg(long, value_enum, default_value_t = Style::Arcs)]
    style: Style,
    #[arg(long, default_value = "layout.svg")]
    out: String,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use expander_layouts::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::Input(_) | Error::Capacity { .. } | Error::Precondition(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
