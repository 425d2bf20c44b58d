//! Command-line front end for the `kempe` library.
//!
//! Exit codes: 0 success, 1 verification failure or negative result, 2 usage
//! or precondition error, 3 internal assertion. No artifact is written on
//! exit 2; reports use stable key order so CI can diff them.

use clap::{Parser, Subcommand};
use kempe::{
    class_diameters, enumerate_colourings, fan_sequence, is_proper, parse_colouring, parse_graph,
    random_proper_colouring, reconfiguration_components, regularize, transform, verify_trace,
    write_trace, ColouringIndex, ExecMode, FanShape, Graph, LabelMap, OracleOptions, TraceError,
    TransformOptions, Verdict,
};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "kempe",
    version,
    about = "Kempe-change toolkit for proper edge colourings"
)]
struct Cli {
    /// Cap on the oracle's estimated state count.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,

    /// Seed for randomized value orders.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    seed: u64,

    /// Directory for intermediate artifacts (host graph, embedding map,
    /// host trace, per-checkpoint colourings).
    #[arg(long, global = true, value_name = "DIR")]
    emit_intermediate: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recolour a start colouring onto a target via verified Kempe changes.
    Transform {
        /// Graph file ("u v" per line).
        #[arg(long)]
        graph: PathBuf,
        /// Start colouring ("u v colour" per line), one colour wider than the target.
        #[arg(long)]
        from: PathBuf,
        /// Target colouring.
        #[arg(long)]
        to: PathBuf,
        /// Where to write the move trace (JSON lines).
        #[arg(long)]
        out: PathBuf,
        /// Move cap override (default: cubed host edge count).
        #[arg(long, value_name = "N")]
        move_cap: Option<u64>,
    },
    /// Replay a trace against a graph and start colouring.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Start colouring the trace claims to begin at.
        #[arg(long)]
        from: PathBuf,
        /// Trace file to replay.
        #[arg(long)]
        trace: PathBuf,
        /// Optional expected final colouring.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Enumerate proper k-colourings and report Kempe equivalence classes.
    Equivalence {
        #[arg(long)]
        graph: PathBuf,
        /// Palette size.
        #[arg(short, long)]
        k: u16,
        /// Exit 0 only if the class count equals N.
        #[arg(long, value_name = "N")]
        expect_classes: Option<usize>,
        /// Also report the diameter of each class.
        #[arg(long)]
        diameter: bool,
        /// Write the reconfiguration graph as DOT text.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Force single-threaded enumeration and search.
        #[arg(long)]
        sequential: bool,
    },
    /// Embed a graph into a regular host by repeated doubling.
    Regularize {
        #[arg(long)]
        graph: PathBuf,
        /// Optimal colouring whose palette sets the host degree.
        #[arg(long)]
        colouring: PathBuf,
        /// Writes PREFIX.graph, PREFIX.map and PREFIX.colouring.
        #[arg(long, value_name = "PREFIX")]
        out_prefix: PathBuf,
    },
    /// Classify the fan walk at a centre and first spoke.
    Fan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colouring: PathBuf,
        /// Centre vertex (file label).
        #[arg(short)]
        u: u64,
        /// First spoke (file label).
        #[arg(short)]
        v: u64,
    },
    /// Emit a seeded proper k-colouring ("first found under randomized
    /// value order", not uniform).
    RandomColouring {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        k: u16,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print graph (and optional colouring) statistics.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colouring: Option<PathBuf>,
    },
}

/// A usage or precondition failure: message to standard error, exit 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    // Panics are internal assertion failures; silence the default hook and
    // report them as exit 3.
    panic::set_hook(Box::new(|_| {}));
    let code = match panic::catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(Usage(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            eprintln!("internal assertion: {msg}");
            3
        }
    };
    std::process::exit(code);
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<(Graph, LabelMap), Usage> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_colouring(
    g: &Graph,
    labels: &LabelMap,
    path: &Path,
    palette: Option<u16>,
) -> Result<kempe::Colouring, Usage> {
    Ok(parse_colouring(g, labels, &read(path)?, palette)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Usage> {
    fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn oracle_options(cli: &Cli, sequential: bool) -> OracleOptions {
    let mut opts = OracleOptions::default();
    if let Some(cap) = cli.cap {
        opts.cap = cap;
    }
    if sequential {
        opts.mode = ExecMode::Sequential;
    }
    opts
}

fn dispatch(cli: &Cli) -> Result<i32, Usage> {
    match &cli.cmd {
        Cmd::Transform {
            graph,
            from,
            to,
            out,
            move_cap,
        } => cmd_transform(cli, graph, from, to, out, *move_cap),
        Cmd::Verify {
            graph,
            from,
            trace,
            expect,
        } => cmd_verify(graph, from, trace, expect.as_deref()),
        Cmd::Equivalence {
            graph,
            k,
            expect_classes,
            diameter,
            dot,
            sequential,
        } => cmd_equivalence(cli, graph, *k, *expect_classes, *diameter, dot.as_deref(), *sequential),
        Cmd::Regularize {
            graph,
            colouring,
            out_prefix,
        } => cmd_regularize(graph, colouring, out_prefix),
        Cmd::Fan {
            graph,
            colouring,
            u,
            v,
        } => cmd_fan(graph, colouring, *u, *v),
        Cmd::RandomColouring { graph, k, out } => cmd_random_colouring(cli, graph, *k, out.as_deref()),
        Cmd::Stats { graph, colouring } => cmd_stats(graph, colouring.as_deref()),
    }
}

fn cmd_transform(
    cli: &Cli,
    graph: &Path,
    from: &Path,
    to: &Path,
    out: &Path,
    move_cap: Option<u64>,
) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    let start = load_colouring(&g, &labels, from, None)?;
    let target = load_colouring(&g, &labels, to, None)?;
    let options = TransformOptions {
        move_cap,
        collect_checkpoints: cli.emit_intermediate.is_some(),
    };
    // Exceeding the move cap means the engine broke its own bound — an
    // internal failure, not a usage error.
    let outcome = match transform(&g, &start, &target, &options) {
        Err(e @ kempe::EngineError::MoveCapExceeded { .. }) => panic!("{e}"),
        other => other?,
    };

    // The engine self-verified; re-verify here before writing anything.
    match verify_trace(&g, &start, &outcome.trace, Some(&target))? {
        Verdict::Accepted { .. } => {}
        bad => panic!("transform produced a non-verifying trace: {bad:?}"),
    }

    write_file(out, &write_trace(&outcome.trace, &labels))?;
    if let Some(dir) = &cli.emit_intermediate {
        fs::create_dir_all(dir).map_err(|e| Usage(format!("{}: {e}", dir.display())))?;
        let h = outcome.embedding.host();
        let host_labels = LabelMap::identity(h.vertex_count());
        write_file(&dir.join("host.graph"), &h.serialize(&host_labels))?;
        let map_text: String = outcome
            .embedding
            .pairs()
            .map(|(s, hv)| format!("{} {}\n", labels.label(s), hv))
            .collect();
        write_file(&dir.join("host.map"), &map_text)?;
        write_file(
            &dir.join("host-start.colouring"),
            &outcome.host_start.serialize(h, &host_labels),
        )?;
        write_file(
            &dir.join("host-target.colouring"),
            &outcome.host_target.serialize(h, &host_labels),
        )?;
        write_file(
            &dir.join("host-trace.jsonl"),
            &write_trace(&outcome.host_trace, &host_labels),
        )?;
        for (label, col) in &outcome.report.checkpoint_colourings {
            write_file(&dir.join(format!("{label}.colouring")), &col.serialize(h, &host_labels))?;
        }
    }

    let r = &outcome.report;
    println!("moves: {}", r.projected_moves);
    println!("host-moves: {}", r.host_moves);
    println!("checkpoints: {}", r.checkpoints);
    println!("levels: {}", r.levels);
    println!("layers: {}", r.layers);
    println!("move-bound: {}", r.move_bound);
    for (name, count) in r.cases.rows() {
        println!("case {name}: {count}");
    }
    println!("verdict: accepted");
    println!("trace: {}", out.display());
    Ok(0)
}

fn cmd_verify(
    graph: &Path,
    from: &Path,
    trace: &Path,
    expect: Option<&Path>,
) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    let start = load_colouring(&g, &labels, from, None)?;
    let t = kempe::read_trace(&read(trace)?, &labels)?;
    let expected = match expect {
        Some(p) => Some(load_colouring(&g, &labels, p, Some(start.palette()))?),
        None => None,
    };
    match verify_trace(&g, &start, &t, expected.as_ref()) {
        Ok(Verdict::Accepted { .. }) => {
            println!("moves: {}", t.len());
            println!("verdict: accepted");
            Ok(0)
        }
        Ok(Verdict::RejectedMove { index, reason }) => {
            println!("moves: {}", t.len());
            println!("verdict: rejected");
            println!("failing move: {index}");
            println!("reason: {reason}");
            Ok(1)
        }
        Ok(Verdict::FinalMismatch { edge, got, want }) => {
            println!("moves: {}", t.len());
            println!("verdict: final mismatch");
            println!(
                "edge: {} {}",
                labels.label(edge.u()),
                labels.label(edge.v())
            );
            println!("got: {got}");
            println!("want: {want}");
            Ok(1)
        }
        // The trace does not even belong to these inputs.
        Err(e @ (TraceError::GraphDigestMismatch { .. }
        | TraceError::StartDigestMismatch { .. }
        | TraceError::PaletteMismatch { .. })) => {
            println!("verdict: rejected");
            println!("reason: {e}");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_equivalence(
    cli: &Cli,
    graph: &Path,
    k: u16,
    expect_classes: Option<usize>,
    diameter: bool,
    dot: Option<&Path>,
    sequential: bool,
) -> Result<i32, Usage> {
    let (g, _labels) = load_graph(graph)?;
    let opts = oracle_options(cli, sequential);
    let report = reconfiguration_components(&g, k, &opts)?;
    println!("colourings: {}", report.total());
    println!("classes: {}", report.class_count());
    if report.class_count() > 0 {
        let sizes: Vec<String> = report
            .sizes_sorted_desc()
            .iter()
            .map(u64::to_string)
            .collect();
        println!("sizes: {}", sizes.join(" "));
    }
    if diameter {
        for (class, d) in class_diameters(&g, &report, opts.mode)?.iter().enumerate() {
            println!("diameter class-{class}: {d}");
        }
    }
    if let Some(path) = dot {
        write_file(path, &dot_text(&g, k, &report, &opts)?)?;
        println!("dot: {}", path.display());
    }
    let code = match expect_classes {
        Some(n) => {
            println!("expected-classes: {n}");
            if report.class_count() == n {
                0
            } else {
                1
            }
        }
        None => {
            if report.class_count() == 1 {
                0
            } else {
                1
            }
        }
    };
    Ok(code)
}

/// Plain DOT text of the reconfiguration graph: one node per colouring
/// (labelled by position, annotated with its class), one edge per Kempe move.
fn dot_text(g: &Graph, k: u16, report: &kempe::ComponentReport, opts: &OracleOptions) -> Result<String, Usage> {
    let states = enumerate_colourings(g, k, opts)?;
    let mut class_of = vec![0u32; states.len()];
    for class in 0..report.class_count() as u32 {
        for pos in report.members(class) {
            class_of[pos] = class;
        }
    }
    let mut index_to_pos = std::collections::HashMap::with_capacity(states.len());
    for (pos, s) in states.iter().enumerate() {
        index_to_pos.insert(ColouringIndex::encode(s)?.0, pos);
    }
    let mut out = String::from("graph kempe {\n");
    for (pos, _) in states.iter().enumerate() {
        out.push_str(&format!("  s{pos} [label=\"{pos}\", class=\"{}\"];\n", class_of[pos]));
    }
    for (pos, s) in states.iter().enumerate() {
        for mv in kempe::available_moves(g, s)? {
            let next = kempe::apply_move(g, s, mv).expect("oracle moves apply");
            let npos = index_to_pos[&ColouringIndex::encode(&next)?.0];
            if pos < npos {
                out.push_str(&format!("  s{pos} -- s{npos};\n"));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn cmd_regularize(graph: &Path, colouring: &Path, out_prefix: &Path) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    let target = load_colouring(&g, &labels, colouring, None)?;
    let (emb, extended) = regularize(&g, &target)?;
    let h = emb.host();
    let host_labels = LabelMap::identity(h.vertex_count());
    let prefix = out_prefix.display();
    write_file(&PathBuf::from(format!("{prefix}.graph")), &h.serialize(&host_labels))?;
    let map_text: String = emb
        .pairs()
        .map(|(s, hv)| format!("{} {}\n", labels.label(s), hv))
        .collect();
    write_file(&PathBuf::from(format!("{prefix}.map")), &map_text)?;
    write_file(
        &PathBuf::from(format!("{prefix}.colouring")),
        &extended.serialize(h, &host_labels),
    )?;
    println!("host-vertices: {}", h.vertex_count());
    println!("host-edges: {}", h.edge_count());
    println!("layers: {}", emb.layers());
    println!("degree: {}", emb.degree());
    println!("files: {prefix}.graph {prefix}.map {prefix}.colouring");
    Ok(0)
}

fn cmd_fan(graph: &Path, colouring: &Path, u: u64, v: u64) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    let c = load_colouring(&g, &labels, colouring, None)?;
    let lookup = |l: u64| {
        labels
            .vertex_of(l)
            .ok_or_else(|| Usage(format!("vertex {l} is not in the graph")))
    };
    let s = fan_sequence(&g, &c, lookup(u)?, lookup(v)?)?;
    println!("centre: {}", labels.label(s.centre()));
    match s.shape() {
        FanShape::Path => println!("shape: path"),
        FanShape::Cycle { saturated } => {
            println!("shape: cycle");
            println!("saturated: {saturated}");
        }
        FanShape::Comet { target } => {
            println!("shape: comet");
            println!("target: {target}");
        }
    }
    let spokes: Vec<String> = s
        .spokes()
        .iter()
        .map(|&x| labels.label(x).to_string())
        .collect();
    println!("spokes: {}", spokes.join(" "));
    Ok(0)
}

fn cmd_random_colouring(cli: &Cli, graph: &Path, k: u16, out: Option<&Path>) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    match random_proper_colouring(&g, k, cli.seed) {
        Some(c) => {
            let text = c.serialize(&g, &labels);
            match out {
                Some(p) => {
                    write_file(p, &text)?;
                    println!("colouring: {}", p.display());
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
        None => {
            println!("verdict: no proper {k}-colouring");
            Ok(1)
        }
    }
}

fn cmd_stats(graph: &Path, colouring: Option<&Path>) -> Result<i32, Usage> {
    let (g, labels) = load_graph(graph)?;
    println!("vertices: {}", g.vertex_count());
    println!("edges: {}", g.edge_count());
    println!("min-degree: {}", g.min_degree());
    println!("max-degree: {}", g.max_degree());
    println!(
        "regular: {}",
        g.regular_degree().map_or("no".into(), |d| d.to_string())
    );
    match g.triangle_witness() {
        Some((a, b, c)) => println!(
            "triangle: {} {} {}",
            labels.label(a),
            labels.label(b),
            labels.label(c)
        ),
        None => println!("triangle: none"),
    }
    println!("connected: {}", connected(&g));
    println!("bipartite: {}", bipartite(&g));
    if let Some(path) = colouring {
        let c = load_colouring(&g, &labels, path, None)?;
        println!("palette: {}", c.palette());
        println!("proper: {}", is_proper(&g, &c));
        let mut sizes = Vec::new();
        for col in 1..=c.palette() {
            sizes.push(
                c.colours()
                    .iter()
                    .filter(|&&x| x == col)
                    .count()
                    .to_string(),
            );
        }
        println!("class-sizes: {}", sizes.join(" "));
    }
    Ok(0)
}

fn connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut found = 1;
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbours(u) {
            if !seen[w] {
                seen[w] = true;
                found += 1;
                stack.push(w);
            }
        }
    }
    found == n
}

fn bipartite(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut side = vec![0i8; n + 1];
    for s in 1..=n {
        if side[s] != 0 {
            continue;
        }
        side[s] = 1;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(w, _) in g.neighbours(u) {
                if side[w] == 0 {
                    side[w] = -side[u];
                    stack.push(w);
                } else if side[w] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}
