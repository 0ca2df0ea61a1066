use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use expander_layouts::expansion::{
    expansion_two_sided, is_balanced_separator, min_separator, neighbourhood_size, EXPANSION_LIMIT, SEPARATOR_LIMIT,
};
use expander_layouts::generate::{generate_seed, SeedTarget};
use expander_layouts::graph::{decompose_monotone_exact, decompose_monotone_greedy, validate_monotone};
use expander_layouts::layouts::{
    monotone_to_book, monotone_to_queue, strict_queue_conflicts, validate_layout, validate_pushdown, validate_track,
};
use expander_layouts::pipeline::{
    aligned_minimum, gen_epsilon, layout_2queue, layout_3monotone, layout_4track, main_construct, quotient_h,
    sample_expansion, sample_expansion_graph, verify_layouts,
};
use expander_layouts::rational::{self, int, Rational};
use expander_layouts::render::{draw_arcs, draw_thickness2_stable};
use expander_layouts::transforms::{subdivide_twice, subdivision_epsilon, two_sided, unravel_book, unravel_monotone};
use expander_layouts::wall::{wall_monotone_layout, wall_queue_layout, wall_track_layout, WallPatch};
use expander_layouts::{io, Error, LayoutMode, MonotoneDecomposition, OrderedBipartiteGraph, Side, SimpleGraph};

use crate::run::{print_json, Run};
use crate::{Check, Cli, Command, LayoutKind, PipelineCommand, Style, TransformCommand};

/// Largest decomposition the exact solver is asked to handle.
const EXACT_EDGE_LIMIT: usize = 64;

pub fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Transform(t) => transform(cli, t),
        Command::Pipeline(PipelineCommand::Run(a)) => pipeline(cli, a),
        Command::Layout(a) => layout(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Render(a) => render(cli, a),
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    Ok(rational::parse(text)?)
}

/// A coloured file is read as its decomposition; an uncoloured one is
/// decomposed greedily (or exactly).
fn decomposition_of(text: &str, exact: bool) -> Result<MonotoneDecomposition> {
    let g = io::read_bipartite(text)?;
    if g.colors().is_some() {
        let d = io::read_decomposition(text)?;
        d.ensure_valid()?;
        return Ok(d);
    }
    Ok(if exact { decompose_monotone_exact(&g, EXACT_EDGE_LIMIT)? } else { decompose_monotone_greedy(&g) })
}

fn generate(cli: &Cli, a: &crate::GenerateArgs) -> Result<bool> {
    let mut run = Run::new(&cli.out_dir, "generate", cli.seed);
    let target = if a.tight { SeedTarget::Tight } else { SeedTarget::Feasible };
    match generate_seed(a.n, a.k, target, cli.seed, a.attempts) {
        Ok(s) => {
            run.write(&a.out, &io::write_decomposition(&s.decomposition, Some(s.epsilon_star))?)?;
            run.check("expansion-target", true);
            print_json(&json!({
                "status": "ok",
                "file": a.out,
                "n": a.n,
                "k": a.k,
                "matchings": s.decomposition.used(),
                "epsilonStar": rational::format(&s.epsilon_star),
                "attempts": s.attempts,
            }))?;
            run.finish()
        }
        Err(Error::Unsatisfiable(reason)) => {
            run.check("expansion-target", false);
            print_json(&json!({ "status": "failure", "reason": reason }))?;
            run.finish()
        }
        Err(e) => Err(e.into()),
    }
}

fn transform(cli: &Cli, t: &TransformCommand) -> Result<bool> {
    let mut run = Run::new(&cli.out_dir, "transform", cli.seed);
    match t {
        TransformCommand::TwoSided(a) => {
            let text = run.read(&a.input)?;
            let lifted = two_sided(&decomposition_of(&text, false)?)?;
            let name = a.out.as_deref().unwrap_or("two-sided.json");
            run.write(name, &io::write_decomposition(&lifted, None)?)?;
            print_json(&json!({
                "file": name,
                "edges": lifted.graph.edge_count(),
                "matchings": lifted.used(),
            }))?;
        }
        TransformCommand::Unravel(a) => {
            let text = run.read(&a.input)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Input(e.to_string()))?;
            if value.get("mode").is_some() {
                let unravelled = unravel_book(&io::read_layout(&text, None)?)?;
                let name = a.out.as_deref().unwrap_or("unravel-book.json");
                run.write(name, &io::write_layout(&unravelled))?;
                let valid = validate_layout(&unravelled).is_valid();
                run.check("layout", valid);
                print_json(&json!({ "file": name, "pages": unravelled.parts.len(), "valid": valid }))?;
            } else {
                let unravelled = unravel_monotone(&decomposition_of(&text, false)?)?;
                let name = a.out.as_deref().unwrap_or("unravel-monotone.json");
                run.write(name, &io::write_decomposition(&unravelled, None)?)?;
                let valid = validate_monotone(&unravelled).is_valid();
                run.check("monotone", valid);
                print_json(&json!({ "file": name, "matchings": unravelled.len(), "valid": valid }))?;
            }
        }
        TransformCommand::Subdivide(a) => {
            let text = run.read(&a.input)?;
            let g = io::read_bipartite(&text)?.uncolored();
            let sub = subdivide_twice(&g)?;
            let name = a.out.as_deref().unwrap_or("subdivided.json");
            run.write(name, &io::write_bipartite(&sub, None))?;
            let epsilon = match &a.epsilon {
                Some(e) => Some(parse_rational(e)?),
                None => io::read_epsilon_star(&text)?,
            };
            let params = epsilon.map(|e| subdivision_epsilon(e, g.max_degree())).transpose()?;
            print_json(&json!({ "file": name, "vertices": sub.vertex_count(), "parameters": params }))?;
        }
    }
    run.finish()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PipelineSummary {
    n: usize,
    k: usize,
    #[serde(with = "rational")]
    epsilon: Rational,
    seed_max_degree: usize,
    #[serde(with = "rational")]
    gen_epsilon: Rational,
    vertex_count: usize,
    edge_count: usize,
    layouts: expander_layouts::pipeline::LayoutChecks,
    conditions: Value,
    expansion: Value,
}

fn pipeline(cli: &Cli, a: &crate::PipelineArgs) -> Result<bool> {
    let mut run = Run::new(&cli.out_dir, "pipeline", cli.seed);
    let text = run.read(&a.seed)?;
    let d = decomposition_of(&text, false)?;
    let epsilon = match &a.epsilon {
        Some(e) => parse_rational(e)?,
        None => expansion_two_sided(&d.graph)?
            .epsilon_star
            .filter(|e| *e > int(0))
            .ok_or_else(|| Error::Input("the seed is not an expander".into()))?,
    };
    let mut p = main_construct(&d, a.k, epsilon)?;
    p.embed()?;
    let delta = d.graph.max_degree().max(1);
    let threshold = gen_epsilon(epsilon, a.k, delta)?;

    let monotone = layout_3monotone(&p)?;
    run.write("gprime.json", &io::write_bipartite(&p.gprime, None))?;
    run.write("monotone3.json", &io::write_decomposition(&monotone, None)?)?;
    run.write("book3.json", &io::write_layout(&monotone_to_book(&monotone)?))?;
    run.write("queue2.json", &io::write_layout(&layout_2queue(&p)?))?;
    run.write("track4.json", &io::write_tracks(&layout_4track(&p)?, &p.gprime.to_simple()))?;
    run.write("h.json", &io::write_graph(&quotient_h(&p)?.graph))?;
    let coords = p.coords()?;
    run.write(
        "embedding.txt",
        &io::write_embedding(p.tracks.iter().map(|t| t.to_string()).zip(coords.iter())),
    )?;

    let layouts = verify_layouts(&p)?;
    let sampling = sample_expansion(&p, threshold, a.samples, cli.seed)?;
    let aligned = aligned_minimum(&p).ok();
    let conditions = match &p.conditions {
        Some(r) => json!({ "valid": r.is_valid(), "violations": r.violations(), "truncated": r.truncated() }),
        None => Value::Null,
    };
    run.check("layouts", layouts.all_valid());
    run.check("expansion-sampled", sampling.violations == 0);
    let summary = PipelineSummary {
        n: p.n(),
        k: a.k,
        epsilon,
        seed_max_degree: delta,
        gen_epsilon: threshold,
        vertex_count: p.gprime.vertex_count(),
        edge_count: p.gprime.edge_count(),
        layouts,
        conditions,
        expansion: json!({
            "sampling": sampling,
            "alignedMinimum": aligned.map(|m| rational::format(&m)),
        }),
    };
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    run.write("summary.json", &text)?;
    print!("{text}");
    run.finish()
}

fn layout(cli: &Cli, a: &crate::LayoutArgs) -> Result<bool> {
    let mut run = Run::new(&cli.out_dir, "layout", cli.seed);
    let default_name = match a.kind {
        LayoutKind::Book => "book.json",
        LayoutKind::Queue => "queue.json",
        LayoutKind::Track => "track.json",
        LayoutKind::Monotone => "monotone.json",
    };
    let name = a.out.as_deref().unwrap_or(default_name);
    let (contents, summary) = match &a.input {
        Some(path) => {
            let d = decomposition_of(&run.read(path)?, a.exact)?;
            match a.kind {
                LayoutKind::Monotone => (io::write_decomposition(&d, None)?, json!({ "matchings": d.used() })),
                LayoutKind::Book => {
                    let l = monotone_to_book(&d)?;
                    (io::write_layout(&l), json!({ "pages": l.parts.len() }))
                }
                LayoutKind::Queue => {
                    let l = monotone_to_queue(&d)?;
                    (io::write_layout(&l), json!({ "queues": l.parts.len() }))
                }
                LayoutKind::Track => {
                    return Err(Error::Input("track layouts are built for wall patches only".into()).into())
                }
            }
        }
        None => {
            let (Some(x0), Some(x1), Some(y0), Some(y1)) = (a.x0, a.x1, a.y0, a.y1) else {
                bail!(Error::Input("give --input or all of --x0 --x1 --y0 --y1".into()));
            };
            let patch = WallPatch::new(x0, x1, y0, y1)?;
            run.write("wall.json", &io::write_graph(&patch.graph()))?;
            match a.kind {
                LayoutKind::Monotone => (io::write_decomposition(&wall_monotone_layout(&patch), None)?, json!({ "matchings": 3 })),
                LayoutKind::Book => (io::write_layout(&monotone_to_book(&wall_monotone_layout(&patch))?), json!({ "pages": 3 })),
                LayoutKind::Queue => (io::write_layout(&wall_queue_layout(&patch)), json!({ "queues": 2 })),
                LayoutKind::Track => (io::write_tracks(&wall_track_layout(&patch), &patch.graph()), json!({ "tracks": 4 })),
            }
        }
    };
    run.write(name, &contents)?;
    let mut report = json!({ "file": name });
    report.as_object_mut().expect("object").extend(summary.as_object().expect("object").clone());
    print_json(&report)?;
    run.finish()
}

/// Replaces vertex indices in a serialized violation by vertex ids: pairs
/// under `edge`, `first` and `second` go through `pair`, numbers under
/// `vertex` through `single`.
fn with_ids(mut v: Value, pair: &dyn Fn(usize, usize) -> (String, String), single: &dyn Fn(usize) -> String) -> Value {
    if let Some(map) = v.as_object_mut() {
        for (key, field) in map.iter_mut() {
            match (key.as_str(), &*field) {
                ("edge" | "first" | "second", Value::Array(xs)) if xs.len() == 2 => {
                    let (Some(a), Some(b)) = (xs[0].as_u64(), xs[1].as_u64()) else { continue };
                    let (a, b) = pair(a as usize, b as usize);
                    *field = json!([a, b]);
                }
                ("vertex", Value::Number(x)) => {
                    if let Some(x) = x.as_u64() {
                        *field = json!(single(x as usize));
                    }
                }
                _ => {}
            }
        }
    }
    v
}

fn simple_ids(g: &SimpleGraph) -> (impl Fn(usize, usize) -> (String, String) + '_, impl Fn(usize) -> String + '_) {
    let id = move |v: usize| g.ids().get(v).cloned().unwrap_or_else(|| v.to_string());
    (move |a, b| (id(a), id(b)), id)
}

fn named<T: Serialize>(violations: &[T], g: &SimpleGraph) -> Result<Vec<Value>> {
    let (pair, single) = simple_ids(g);
    violations
        .iter()
        .map(|v| Ok(with_ids(serde_json::to_value(v)?, &pair, &single)))
        .collect()
}

fn verify(cli: &Cli, a: &crate::VerifyArgs) -> Result<bool> {
    let read = |p: &Path| std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()));
    let text = read(&a.input)?;
    let graph = a.graph.as_deref().map(|p| read(p).and_then(|t| Ok(io::read_any_graph(&t)?))).transpose()?;
    let (pass, report) = match a.check {
        Check::Expansion => verify_expansion(cli, a, &text)?,
        Check::Separator => verify_separator(a, &text)?,
        Check::Layout | Check::Pushdown | Check::StrictQueue => {
            let l = io::read_layout(&text, graph.as_ref())?;
            let base = validate_layout(&l);
            let violations = named(base.violations(), &l.graph)?;
            let mut report = json!({ "valid": base.is_valid(), "violations": violations });
            let pass = match a.check {
                Check::Pushdown => {
                    let p = validate_pushdown(&l)?;
                    report["pushdown"] = json!(p);
                    p
                }
                Check::StrictQueue => {
                    let conflicts = strict_queue_conflicts(&l)?;
                    let g = &l.graph;
                    report["strictConflicts"] = json!(conflicts
                        .iter()
                        .take(100)
                        .map(|&(p, q, r)| [g.id(p), g.id(q), g.id(r)])
                        .collect::<Vec<_>>());
                    base.is_valid() && conflicts.is_empty()
                }
                _ => base.is_valid(),
            };
            (pass, report)
        }
        Check::Track => {
            let g = graph.ok_or_else(|| Error::Input("track checks need --graph".into()))?;
            let t = io::read_tracks(&text, &g)?;
            let r = validate_track(&t, &g)?;
            (r.is_valid(), json!({ "tracks": t.tracks.len(), "violations": named(r.violations(), &g)? }))
        }
        Check::Monotone => {
            let d = io::read_decomposition(&text)?;
            let r = validate_monotone(&d);
            let g = &d.graph;
            let pair = |x: usize, y: usize| {
                let name = |s: &[String], i: usize| s.get(i).cloned().unwrap_or_else(|| i.to_string());
                (name(g.side_a(), x), name(g.side_b(), y))
            };
            let violations = r
                .violations()
                .iter()
                .map(|v| Ok(with_ids(serde_json::to_value(v)?, &pair, &|v| v.to_string())))
                .collect::<Result<Vec<_>>>()?;
            (r.is_valid(), json!({ "matchings": d.used(), "violations": violations }))
        }
    };
    let mut report = report;
    report["check"] = serde_json::to_value(format!("{:?}", a.check).to_lowercase())?;
    report["pass"] = json!(pass);
    print_json(&report)?;
    Ok(pass)
}

fn side_of(g: &OrderedBipartiteGraph, ids: &[String]) -> Result<(Side, Vec<usize>)> {
    for side in [Side::A, Side::B] {
        let names = g.side(side);
        let found: Option<Vec<usize>> = ids.iter().map(|id| names.iter().position(|n| n == id)).collect();
        if let Some(found) = found {
            return Ok((side, found));
        }
    }
    Err(Error::Input("witness is not a subset of one side".into()).into())
}

fn verify_expansion(cli: &Cli, a: &crate::VerifyArgs, text: &str) -> Result<(bool, Value)> {
    let g = io::read_bipartite(text)?.uncolored();
    let required = a.epsilon.as_deref().map(parse_rational).transpose()?;

    if let Some(path) = &a.witness {
        let old: Value = serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Input(e.to_string()))?;
        let ids: Vec<String> = serde_json::from_value(old["witness"].clone()).map_err(|e| Error::Input(e.to_string()))?;
        if ids.is_empty() {
            bail!(Error::Input("report has no witness".into()));
        }
        let (side, set) = side_of(&g, &ids)?;
        let nb = neighbourhood_size(&g, side, &set)?;
        let ratio = rational::rat(nb as i64, set.len() as i64) - int(1);
        let claimed = old["epsilonStar"].as_str().map(rational::parse).transpose()?;
        let pass = match claimed {
            Some(c) => c == ratio,
            None => nb < set.len(),
        };
        return Ok((pass, json!({ "witness": ids, "neighbourhood": nb, "epsilon": rational::format(&ratio) })));
    }

    if let Some(samples) = a.samples {
        let threshold = required.unwrap_or(int(0));
        let r = sample_expansion_graph(&g, &[vec![], vec![]], threshold, samples, cli.seed)?;
        return Ok((r.violations == 0, serde_json::to_value(&r)?));
    }

    let side = g.len_a().max(g.len_b());
    if side > EXPANSION_LIMIT {
        bail!(Error::Capacity { what: "side size", actual: side, limit: EXPANSION_LIMIT });
    }
    let r = expansion_two_sided(&g)?;
    let pass = match (r.epsilon_star, required) {
        (Some(e), Some(req)) => e >= req,
        (Some(e), None) => e > int(0),
        (None, _) => false,
    };
    Ok((pass, serde_json::to_value(&r)?))
}

fn verify_separator(a: &crate::VerifyArgs, text: &str) -> Result<(bool, Value)> {
    let g = io::read_any_graph(text)?;
    if let Some(path) = &a.witness {
        let old: Value = serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Input(e.to_string()))?;
        let ids: Vec<String> = serde_json::from_value(old["witness"].clone()).map_err(|e| Error::Input(e.to_string()))?;
        let removed = ids
            .iter()
            .map(|id| g.vertex_index(id).ok_or_else(|| Error::Input(format!("unknown vertex {id:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let balanced = is_balanced_separator(&g, &removed);
        let size_matches = old["minSize"].as_u64().is_none_or(|s| s as usize == removed.len());
        return Ok((balanced && size_matches, json!({ "witness": ids, "balanced": balanced })));
    }
    let mut r = min_separator(&g, SEPARATOR_LIMIT)?;
    let mut pass = true;
    if let Some(e) = &a.epsilon {
        r = r.with_bound(parse_rational(e)?, g.vertex_count().div_ceil(2))?;
        pass = r.bound.is_some_and(|b| int(r.min_size as i64) >= b);
    }
    Ok((pass, serde_json::to_value(&r)?))
}

fn render(cli: &Cli, a: &crate::RenderArgs) -> Result<bool> {
    let mut run = Run::new(&cli.out_dir, "render", cli.seed);
    let l = io::read_layout(&run.read(&a.layout)?, None)?;
    match a.style {
        Style::Arcs => {
            run.write(&a.out, &draw_arcs(&l))?;
            print_json(&json!({ "file": a.out, "style": "arcs" }))?;
        }
        Style::Thickness2 => {
            if l.mode != LayoutMode::Queue {
                bail!(Error::Input("thickness-2 drawings need a queue layout".into()));
            }
            let drawing = draw_thickness2_stable(&l)?;
            run.write(&a.out, &drawing.svg)?;
            run.check("thickness2-certificate", true);
            print_json(&json!({
                "file": a.out,
                "style": "thickness2",
                "crossings": drawing.total_crossings(),
                "crossingPairs": drawing.crossings.len(),
            }))?;
        }
    }
    run.finish()
}
