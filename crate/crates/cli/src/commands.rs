use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latinlab::absorb::{absorb_cycles, absorber_demo, gadget_search, standalone_sphere, Tri};
use latinlab::count::{
    count_configuration, count_intercalates_partial, count_subsquares, cuboctahedra_report_partial, girth,
    ColoredTripleSystem,
};
use latinlab::extremal::{phi_report, PhiOracle};
use latinlab::format::{parse_any, parse_arrays, write_rectangle, write_square, write_triples};
use latinlab::fracdec::{boost as run_boost, CycleMode, RegParams, TriangleSet};
use latinlab::process::{analytic_partial, log_count_estimate, run_process, ProcessConfig, SelectionMode};
use latinlab::rng::rng;
use latinlab::sample::{sample_rectangle_counted, JmChain, SamplerConfig};
use latinlab::{LatinSquare, TripartiteGraph, TripleSystem, Vertex};

use crate::{Failure, Format, Global, Outcome};

/// Writes to `path`, or stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Every record in a file. Concatenated arrays are split and named
/// `file#i`; anything else is read as a single square or triple list.
fn read_systems(paths: &[PathBuf]) -> Result<Vec<(String, TripleSystem)>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        let text = read_input(p)?;
        let name = p.display().to_string();
        let arrays = parse_arrays(&text).ok().filter(|a| a.len() > 1);
        match arrays {
            Some(arrays) => {
                for (i, a) in arrays.iter().enumerate() {
                    out.push((format!("{name}#{i}"), a.to_triples()?));
                }
            }
            None => out.push((name, parse_any(&text)?)),
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("no input files".into()));
    }
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

// ---------------------------------------------------------------- count

#[derive(Subcommand)]
pub enum CountCmd {
    Intercalates { files: Vec<PathBuf> },
    Cuboctahedra {
        /// Also list the degenerate classes.
        #[arg(long)]
        classes: bool,
        files: Vec<PathBuf>,
    },
    Subsquares {
        #[arg(long, default_value_t = 2)]
        k: usize,
        files: Vec<PathBuf>,
    },
    Girth {
        #[arg(long, default_value_t = 6)]
        g_max: usize,
        files: Vec<PathBuf>,
    },
    /// Labelled embeddings of a small pattern.
    Config {
        #[arg(long, value_enum, default_value = "intercalate")]
        pattern: Pattern,
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Pattern {
    SingleEdge,
    Intercalate,
    Cuboctahedron,
}

pub fn count(cmd: CountCmd, g: &Global) -> Outcome {
    let mut rows: Vec<(String, String, String)> = Vec::new();
    match cmd {
        CountCmd::Intercalates { files } => {
            for (name, ts) in read_systems(&files)? {
                rows.push((name, "intercalates".into(), count_intercalates_partial(&ts).to_string()));
            }
        }
        CountCmd::Cuboctahedra { classes, files } => {
            for (name, ts) in read_systems(&files)? {
                let rep = cuboctahedra_report_partial(&ts);
                rows.push((name.clone(), "cuboctahedra".into(), rep.total.to_string()));
                rows.push((name.clone(), "nondegenerate".into(), rep.nondegenerate().to_string()));
                if classes {
                    for (c, v) in &rep.breakdown {
                        rows.push((name.clone(), format!("class:{}", c.label()), v.to_string()));
                    }
                }
            }
        }
        CountCmd::Subsquares { k, files } => {
            for (name, ts) in read_systems(&files)? {
                let sq = LatinSquare::from_triples(&ts)?;
                rows.push((name, format!("subsquares_{k}"), count_subsquares(&sq, k)?.to_string()));
            }
        }
        CountCmd::Girth { g_max, files } => {
            for (name, ts) in read_systems(&files)? {
                rows.push((name, "girth".into(), girth(&ts, g_max)?.to_string()));
            }
        }
        CountCmd::Config { pattern, files } => {
            let h = match pattern {
                Pattern::SingleEdge => ColoredTripleSystem::single_edge(),
                Pattern::Intercalate => ColoredTripleSystem::intercalate(),
                Pattern::Cuboctahedron => ColoredTripleSystem::cuboctahedron(),
            };
            let label = format!("{pattern:?}").to_lowercase();
            for (name, ts) in read_systems(&files)? {
                rows.push((name, format!("config:{label}"), count_configuration(&h, &ts)?.to_string()));
            }
        }
    }
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("input,metric,value\n");
            for (i, m, v) in &rows {
                s.push_str(&format!("{},{},{}\n", csv_field(i), csv_field(m), csv_field(v)));
            }
            s
        }
        Format::Json => {
            let v: Vec<Value> = rows.iter().map(|(i, m, v)| json!({"input": i, "metric": m, "value": v})).collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    emit(g.out.as_deref(), &text)?;
    Ok(true)
}

// ---------------------------------------------------------------- sample

#[derive(Subcommand)]
pub enum SampleCmd {
    /// Jacobson-Matthews chain samples.
    Square {
        #[arg(long)]
        n: usize,
        /// Proper-state visits before the first sample (default 10 n^3).
        #[arg(long)]
        burnin: Option<u64>,
        /// Proper-state visits between samples (default n^3).
        #[arg(long)]
        thin: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Uniform k x n rectangles by rejection.
    Rectangle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
    },
}

pub fn sample(cmd: SampleCmd, g: &Global) -> Outcome {
    let mut text = String::new();
    match cmd {
        SampleCmd::Square { n, burnin, thin, count } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let cfg = SamplerConfig { seed: g.seed, burn_in: burnin, thin, ..Default::default() };
            for sq in JmChain::new(n, &cfg).take(count) {
                text.push_str(&write_square(&sq));
            }
        }
        SampleCmd::Rectangle { k, n, count, max_attempts } => {
            let mut r = rng(g.seed);
            for _ in 0..count {
                text.push_str(&write_rectangle(&sample_rectangle_counted(k, n, max_attempts, &mut r)?.0));
            }
        }
    }
    emit(g.out.as_deref(), &text)?;
    Ok(true)
}

// ---------------------------------------------------------------- process

#[derive(Subcommand)]
pub enum ProcessCmd {
    /// One run; with `--out DIR` writes trajectory.csv, system.txt and
    /// summary.json there.
    Run {
        #[arg(long)]
        n: usize,
        /// Stop after this many triples (default n^2).
        #[arg(long)]
        m: Option<u64>,
        /// Girth bound: 0 for the plain process, 4..=12 otherwise.
        #[arg(long, default_value_t = 0)]
        g: usize,
        /// Comma-separated steps; default is about 30 geometric points.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        /// Draw from the exact available set instead of rejection.
        #[arg(long)]
        exact: bool,
    },
}

pub fn process(cmd: ProcessCmd, g: &Global) -> Outcome {
    let ProcessCmd::Run { n, m, g: girth_bound, checkpoints, exact } = cmd;
    let mut cfg = ProcessConfig::new(n, girth_bound, g.seed);
    cfg.m_target = m;
    if let Some(c) = checkpoints {
        cfg.checkpoints = c;
    }
    if exact {
        cfg.mode = SelectionMode::Exact;
    }
    let run = run_process(&cfg)?;
    let tr = &run.trajectory;
    let summary = json!({
        "n": n,
        "g": girth_bound,
        "seed": g.seed,
        "completed": tr.completed,
        "exhausted": tr.exhausted,
        "coverage": tr.completed as f64 / (n * n) as f64,
        "intercalates": count_intercalates_partial(&run.system),
        "log_count_estimate": log_count_estimate(tr).ok(),
        "analytic_partial": analytic_partial(n, tr.completed),
        "fallbacks": run.fallbacks,
    });
    let summary = serde_json::to_string_pretty(&summary)? + "\n";
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("trajectory.csv"), tr.to_csv())?;
            fs::write(dir.join("system.txt"), write_triples(&run.system))?;
            fs::write(dir.join("summary.json"), &summary)?;
        }
        None => match g.format.unwrap_or(Format::Csv) {
            Format::Csv => print!("{}", tr.to_csv()),
            Format::Json => print!("{summary}"),
        },
    }
    Ok(true)
}

// ---------------------------------------------------------------- phi

#[derive(Args)]
pub struct PhiArgs {
    /// Target intercalate count.
    #[arg(long = "N")]
    target: u64,
    /// Run the exact oracle over partial squares with at most this many cells.
    #[arg(long)]
    exact_max_cells: Option<usize>,
}

pub fn phi(a: PhiArgs, g: &Global) -> Outcome {
    let oracle = a.exact_max_cells.map(PhiOracle::build).transpose()?;
    let rec = phi_report(a.target, oracle.as_ref())?;
    // the report is the JSON; `--out` names the witness file
    let witness = match (&g.out, &rec.witness) {
        (Some(p), Some(w)) => {
            fs::write(p, write_triples(w))?;
            Some(p.display().to_string())
        }
        _ => None,
    };
    let v = json!({
        "N": rec.target,
        "lower": rec.lower,
        "upper": rec.upper,
        "exact": rec.exact,
        "witness-file": witness,
    });
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(true)
}

// ---------------------------------------------------------------- boost

#[derive(Args)]
pub struct BoostArgs {
    /// Host graph in JSON; K_{n,n,n} with `--n` instead.
    #[arg(long, conflicts_with = "n")]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Triangle list, one `a b c` line per triangle (indices into the three
    /// parts). Without it every triangle is kept with probability q.
    #[arg(long)]
    triangles: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 0.9)]
    q: f64,
    #[arg(long = "C", default_value_t = 4.0)]
    c: f64,
    #[arg(long)]
    iters: Option<usize>,
    /// Boost even if the condition check fails.
    #[arg(long)]
    force: bool,
    /// Sample this many 6-cycles per edge instead of enumerating them.
    #[arg(long)]
    sampled: Option<usize>,
}

fn parse_triangle_list(text: &str) -> Result<Vec<[u32; 3]>, Failure> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Failure::Usage(format!("line {}: bad index {t:?}", i + 1))))
            .collect::<Result<_, _>>()?;
        let t: [u32; 3] = v.try_into().map_err(|_| Failure::Usage(format!("line {}: expected `a b c`", i + 1)))?;
        out.push(t);
    }
    Ok(out)
}

pub fn boost(a: BoostArgs, g: &Global) -> Outcome {
    let graph = match (&a.graph, a.n) {
        (Some(p), _) => TripartiteGraph::from_json(&read_input(p)?)?,
        (None, Some(n)) => TripartiteGraph::complete(n),
        (None, None) => return Err(Failure::Usage("give --graph or --n".into())),
    };
    let ts = match &a.triangles {
        Some(p) => TriangleSet::new(graph, parse_triangle_list(&read_input(p)?)?)?,
        None => TriangleSet::thinned(graph, a.q, &mut rng(g.seed))?,
    };
    let mut params = RegParams { force: a.force, seed: g.seed, iterations: a.iters, ..RegParams::new(a.p, a.q).with_c(a.c) };
    if let Some(per_edge) = a.sampled {
        params.mode = Some(CycleMode::Sampled { per_edge, seed: g.seed });
    }
    let out = run_boost(&ts, &params)?;
    let mut trace = String::from("iter,max_disc,vertex_residual\n");
    for r in &out.trace {
        trace.push_str(&format!("{},{:e},{:e}\n", r.iter, r.max_disc, r.vertex_residual));
    }
    let counts = out.edge_counts(&ts);
    let summary = json!({
        "triangles": ts.len(),
        "edges": ts.edge_count(),
        "target": params.target(ts.order()),
        "beta": out.beta,
        "clamped": out.clamped,
        "converged_at": out.converged_at,
        "trace_monotone": out.trace_monotone(),
        "selected": out.selected.len(),
        "edge_count_min": counts.iter().min(),
        "edge_count_max": counts.iter().max(),
        "conditions_pass": out.conditions.passes(),
        "conditions": out.conditions.summary(),
    });
    let summary = serde_json::to_string_pretty(&summary)? + "\n";
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let phi: String = out.phi_star.iter().enumerate().map(|(i, w)| format!("{i} {w:e}\n")).collect();
            let sel: String = out
                .selected
                .iter()
                .map(|&t| {
                    let [x, y, z] = ts.triangle(t);
                    format!("{x} {y} {z}\n")
                })
                .collect();
            fs::write(dir.join("phi_star.txt"), phi)?;
            fs::write(dir.join("selected.txt"), sel)?;
            fs::write(dir.join("trace.csv"), &trace)?;
            fs::write(dir.join("summary.json"), &summary)?;
        }
        None => match g.format.unwrap_or(Format::Csv) {
            Format::Csv => print!("{trace}"),
            Format::Json => print!("{summary}"),
        },
    }
    Ok(true)
}

// ---------------------------------------------------------------- absorb

#[derive(Subcommand)]
pub enum AbsorbCmd {
    /// Path cover of X plus the cycle decomposition of L and the cover.
    PathCover {
        /// Triangle-divisible graph L in JSON.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        mu: usize,
    },
    /// Sphere cover over one rooted triangle.
    Spheres {
        #[arg(long, default_value_t = 3)]
        g: usize,
    },
    /// Search for a rooted absorber of a tripartite cycle.
    Gadget {
        #[arg(long, default_value_t = 3)]
        len: usize,
        #[arg(long, default_value_t = 12)]
        budget: usize,
        #[arg(long, default_value_t = 10_000_000)]
        node_limit: u64,
    },
    /// Absorb every triangle-divisible L on |X^j| = x.
    Demo {
        #[arg(long, default_value_t = 2)]
        x: usize,
        #[arg(long, default_value_t = 4)]
        g: usize,
        #[arg(long, default_value_t = 2)]
        mu: usize,
    },
}

fn vertex_json(v: Vertex) -> Value {
    json!([v.part, v.index])
}

fn cycles_json(cycles: &[Vec<Vertex>]) -> Value {
    Value::Array(cycles.iter().map(|c| Value::Array(c.iter().map(|&v| vertex_json(v)).collect())).collect())
}

/// Triangles as `[a, b, c]` index triples, vertices listed by part.
fn triangles_json(tris: &[Tri]) -> Value {
    Value::Array(
        tris.iter()
            .map(|t| {
                let mut idx = [0u32; 3];
                for v in t {
                    idx[v.part as usize] = v.index;
                }
                json!(idx)
            })
            .collect(),
    )
}

fn graph_value(g: &TripartiteGraph) -> Result<Value, Failure> {
    Ok(serde_json::from_str(&g.to_json())?)
}

pub fn absorb(cmd: AbsorbCmd, g: &Global) -> Outcome {
    let (value, pass) = match cmd {
        AbsorbCmd::PathCover { graph, mu } => {
            let l = TripartiteGraph::from_json(&read_input(&graph)?)?;
            let a = absorb_cycles(&l, mu)?;
            let all: Vec<Vec<Vertex>> = a.all_cycles().cloned().collect();
            let ok = all.iter().all(|c| c.len() <= 9) && latinlab::absorb::verify_cycle_partition(&a.union, &all);
            (
                json!({
                    "mu": mu,
                    "new_vertices": a.cover.new_vertex_count(),
                    "splices": a.splices,
                    "union": graph_value(&a.union)?,
                    "cycles": cycles_json(&a.cycles),
                    "pairings": cycles_json(&a.pairings),
                    "verified": ok,
                }),
                ok,
            )
        }
        AbsorbCmd::Spheres { g: girth_bound } => {
            let (host, s) = standalone_sphere(girth_bound)?;
            let ok = s.verify();
            (
                json!({
                    "g": girth_bound,
                    "graph": graph_value(&host)?,
                    "out": triangles_json(&s.out_decomposition),
                    "in": triangles_json(&s.in_decomposition),
                    "verified": ok,
                }),
                ok,
            )
        }
        AbsorbCmd::Gadget { len, budget, node_limit } => {
            let gadget = gadget_search(len, budget, node_limit)?;
            let ok = gadget.verify();
            (
                json!({
                    "cycle_len": len,
                    "aux": gadget.aux.len(),
                    "graph": graph_value(&gadget.graph)?,
                    "roots": Value::Array(gadget.roots.iter().map(|&v| vertex_json(v)).collect()),
                    "alone": triangles_json(&gadget.alone),
                    "with_rooted": triangles_json(&gadget.with_rooted),
                    "verified": ok,
                }),
                ok,
            )
        }
        AbsorbCmd::Demo { x, g: girth_bound, mu } => {
            let rep = absorber_demo(x, girth_bound, mu)?;
            let ok = rep.passes();
            (serde_json::to_value(&rep)?, ok)
        }
    };
    emit(g.out.as_deref(), &(serde_json::to_string_pretty(&value)? + "\n"))?;
    Ok(pass)
}
