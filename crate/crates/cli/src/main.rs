use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ged_core::bounds::{delta_bounds, h_breakdown, lb_graph};
use ged_core::bss::{bss_ged, BssConfig, Outcome};
use ged_core::gen::{generate, GenConfig};
use ged_core::mapping::{realize_edit_path, MappingState};
use ged_core::oracle::exhaustive_ged;
use ged_core::simsearch::{range_query, GraphDatabase};
use ged_core::space::{predicted_layer_count, ProcessingOrder, SearchSpace};
use ged_core::{parse_graph_db, write_graph_db, GraphRecord, LabelTable, LabeledGraph, OrderPolicy, SuccessorPolicy};

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_PARSE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ged", version, about = "Exact graph edit distance and similarity search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Default,
    Dfs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Succ {
    Basic,
    Reduced,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    /// Beam width
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
    beam: u64,
    #[arg(long, value_enum, default_value_t = Order::Dfs)]
    order: Order,
    #[arg(long, value_enum, default_value_t = Succ::Reduced)]
    succ: Succ,
    /// Maximum number of search nodes generated per run
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

impl SearchArgs {
    fn config(&self) -> BssConfig {
        BssConfig {
            beam_width: self.beam as usize,
            order: match self.order {
                Order::Default => OrderPolicy::Default,
                Order::Dfs => OrderPolicy::Dfs,
            },
            successors: match self.succ {
                Succ::Basic => SuccessorPolicy::Basic,
                Succ::Reduced => SuccessorPolicy::Reduced,
            },
            node_budget: self.budget,
            ..BssConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Edit distance between two graphs of a database
    Dist {
        db: PathBuf,
        id1: String,
        id2: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
        /// Also print an optimal edit path
        #[arg(long)]
        edit_path: bool,
    },
    /// Edit distance by exhaustive enumeration (at most 8 vertices per graph)
    Oracle { db: PathBuf, id1: String, id2: String },
    /// All database graphs within distance tau of a query
    Search {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Graph id in the query file; defaults to the first graph
        #[arg(long)]
        query_id: Option<String>,
        #[arg(long)]
        tau: u32,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[arg(long)]
        json: bool,
    },
    /// Random graph database
    Gen {
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        #[arg(long, default_value_t = 5)]
        min_vertices: usize,
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 5)]
        vertex_labels: usize,
        #[arg(long, default_value_t = 2)]
        edge_labels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Partition, processing order and per-layer tree sizes for a pair
    Inspect {
        db: PathBuf,
        id1: String,
        id2: String,
        /// Include the graph lower bound and its parts
        #[arg(long)]
        bounds: bool,
    },
    /// Distance for every pair of a database, with a solve ratio
    Bench {
        db: PathBuf,
        /// Query group; pairs every database graph with every query instead of all database pairs
        #[arg(long)]
        queries: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        /// Per-pair time limit in milliseconds
        #[arg(long)]
        time_limit_ms: Option<u64>,
        /// Only the first N pairs
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
}

type CliResult = Result<ExitCode, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Dist { db, id1, id2, search, json, edit_path } => cmd_dist(&db, &id1, &id2, &search, json, edit_path),
        Command::Oracle { db, id1, id2 } => cmd_oracle(&db, &id1, &id2),
        Command::Search { db, query, query_id, tau, search, threads, json } => {
            cmd_search(&db, &query, query_id.as_deref(), tau, &search, threads as usize, json)
        }
        Command::Gen { graphs, min_vertices, max_vertices, density, vertex_labels, edge_labels, seed, output } => {
            let config = GenConfig { graphs, min_vertices, max_vertices, density, vertex_labels, edge_labels, seed };
            cmd_gen(&config, output.as_deref())
        }
        Command::Inspect { db, id1, id2, bounds } => cmd_inspect(&db, &id1, &id2, bounds),
        Command::Bench { db, queries, search, time_limit_ms, limit, json } => {
            cmd_bench(&db, queries.as_deref(), &search, time_limit_ms, limit, json)
        }
    }
}

fn read_db(path: &Path, table: &mut LabelTable) -> Result<Vec<GraphRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_graph_db(&text, table).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn find<'a>(records: &'a [GraphRecord], id: &str) -> Result<&'a LabeledGraph, CliError> {
    records
        .iter()
        .find(|r| r.id == id)
        .map(|r| &r.graph)
        .ok_or_else(|| CliError::Usage(format!("no graph with id {id:?}")))
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn cmd_dist(db: &Path, id1: &str, id2: &str, args: &SearchArgs, as_json: bool, edit_path: bool) -> CliResult {
    let mut table = LabelTable::new();
    let records = read_db(db, &mut table)?;
    let (g, q) = (find(&records, id1)?, find(&records, id2)?);
    let t = Instant::now();
    let r = bss_ged(g, q, &args.config());
    let elapsed = t.elapsed();
    let exact = r.outcome == Outcome::Exact;
    let path = if edit_path { r.mapping.as_ref().map(|m| realize_edit_path(m, g, q)) } else { None };

    if as_json {
        let mut out = json!({
            "ged": r.distance,
            "exact": exact,
            "expanded": r.stats.expanded,
            "backtracks": r.stats.backtracks,
            "passes": r.stats.passes,
            "time_ms": millis(elapsed),
        });
        if let Some(ops) = &path {
            out["edit_path"] = Value::Array(ops.iter().map(|op| op.to_json(&table)).collect());
        }
        println!("{out}");
    } else {
        if exact {
            println!("ged({id1}, {id2}) = {}", r.distance);
        } else {
            println!("ged({id1}, {id2}) <= {} (budget exhausted)", r.distance);
        }
        println!(
            "expanded {}  backtracks {}  passes {}  time {:.3} ms",
            r.stats.expanded,
            r.stats.backtracks,
            r.stats.passes,
            millis(elapsed)
        );
        if let (Some(m), Some(ops)) = (&r.mapping, &path) {
            println!("mapping {m}");
            for op in ops {
                println!("  {}", op.to_json(&table));
            }
        }
    }
    Ok(if exact { ExitCode::SUCCESS } else { ExitCode::from(EXIT_BUDGET) })
}

fn cmd_oracle(db: &Path, id1: &str, id2: &str) -> CliResult {
    let mut table = LabelTable::new();
    let records = read_db(db, &mut table)?;
    let (g, q) = (find(&records, id1)?, find(&records, id2)?);
    let r = exhaustive_ged(g, q).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{}", json!({"ged": r.distance, "mappings_enumerated": r.mappings_enumerated}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(
    db: &Path,
    query: &Path,
    query_id: Option<&str>,
    tau: u32,
    args: &SearchArgs,
    threads: usize,
    as_json: bool,
) -> CliResult {
    let mut table = LabelTable::new();
    let records = read_db(db, &mut table)?;
    let queries = read_db(query, &mut table)?;
    let q = match query_id {
        Some(id) => find(&queries, id)?.clone(),
        None => queries.first().ok_or_else(|| CliError::Usage("query file holds no graph".into()))?.graph.clone(),
    };
    let database = GraphDatabase::new(records);
    let t = Instant::now();
    let r = range_query(&database, &q, tau, &args.config(), threads);
    let elapsed = t.elapsed();

    if as_json {
        let out = json!({
            "matches": r.matches.iter().map(|m| json!({"id": m.id, "bound": m.bound, "exact": m.exact})).collect::<Vec<_>>(),
            "unknown": r.unknown,
            "filtered": r.filtered,
            "candidates": r.candidates,
            "time_ms": millis(elapsed),
        });
        println!("{out}");
    } else {
        println!("{:<20} {:>6} {:>6}", "id", "bound", "exact");
        for m in &r.matches {
            println!("{:<20} {:>6} {:>6}", m.id, m.bound, m.exact);
        }
        for id in &r.unknown {
            println!("{id:<20} {:>6} {:>6}", "?", "-");
        }
        println!(
            "{} matches, {} filtered, {} candidates, {} undecided, {:.3} ms",
            r.matches.len(),
            r.filtered,
            r.candidates,
            r.unknown.len(),
            millis(elapsed)
        );
    }
    Ok(if r.unknown.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_BUDGET) })
}

fn cmd_gen(config: &GenConfig, output: Option<&Path>) -> CliResult {
    let (table, records) = generate(config).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = write_graph_db(&records, &table);
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_inspect(db: &Path, id1: &str, id2: &str, with_bounds: bool) -> CliResult {
    let mut table = LabelTable::new();
    let records = read_db(db, &mut table)?;
    let (g, q) = (find(&records, id1)?, find(&records, id2)?);
    let space = SearchSpace::new(g, q, ProcessingOrder::for_policy(g, OrderPolicy::Dfs));
    let sizes = space.partition.class_sizes();
    let predicted: Vec<u128> =
        (0..=g.vertex_count()).map(|l| predicted_layer_count(l, g.vertex_count(), q.vertex_count(), &sizes)).collect();
    let mut out = json!({
        "source": {"id": id1, "vertices": g.vertex_count(), "edges": g.edge_count()},
        "target": {"id": id2, "vertices": q.vertex_count(), "edges": q.edge_count()},
        "partition": space.partition.classes(),
        "order": space.order.as_slice(),
        "predicted_layer_counts": predicted,
    });
    if with_bounds {
        let (d1, d2) = delta_bounds(g, q);
        let root = h_breakdown(&MappingState::new(g.vertex_count(), q.vertex_count()), g, q);
        out["bounds"] = json!({"lb": lb_graph(g, q), "delta1": d1, "delta2": d2, "root": root});
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("json values serialize"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    db: &Path,
    queries: Option<&Path>,
    args: &SearchArgs,
    time_limit_ms: Option<u64>,
    limit: Option<usize>,
    as_json: bool,
) -> CliResult {
    let mut table = LabelTable::new();
    let records = read_db(db, &mut table)?;
    let config = BssConfig { time_limit: time_limit_ms.map(Duration::from_millis), ..args.config() };
    let query_records = match queries {
        Some(path) => Some(read_db(path, &mut table)?),
        None => None,
    };
    let pairs: Vec<(&GraphRecord, &GraphRecord)> = match &query_records {
        Some(qs) => records.iter().flat_map(|g| qs.iter().map(move |q| (g, q))).collect(),
        None => records.iter().enumerate().flat_map(|(i, g)| records[i + 1..].iter().map(move |q| (g, q))).collect(),
    };

    let mut rows = Vec::new();
    for (g, q) in pairs.into_iter().take(limit.unwrap_or(usize::MAX)) {
        let t = Instant::now();
        let r = bss_ged(&g.graph, &q.graph, &config);
        let elapsed = t.elapsed();
        rows.push(json!({
            "g": g.id,
            "q": q.id,
            "ged": (r.outcome == Outcome::Exact).then_some(r.distance),
            "upper_bound": r.distance,
            "time_ms": millis(elapsed),
            "expanded": r.stats.expanded,
            "backtracks": r.stats.backtracks,
        }));
    }
    let solved = rows.iter().filter(|r| !r["ged"].is_null()).count();
    let ratio = if rows.is_empty() { 1.0 } else { solved as f64 / rows.len() as f64 };

    if as_json {
        println!("{}", json!({"rows": rows, "solved": solved, "pairs": rows.len(), "solve_ratio": ratio}));
    } else {
        println!("{:<12} {:<12} {:>8} {:>12} {:>12} {:>10}", "g", "q", "ged", "time_ms", "expanded", "backtracks");
        for r in &rows {
            let ged = r["ged"].as_u64().map_or_else(|| format!("<={}", r["upper_bound"]), |d| d.to_string());
            println!(
                "{:<12} {:<12} {:>8} {:>12.3} {:>12} {:>10}",
                r["g"].as_str().unwrap_or_default(),
                r["q"].as_str().unwrap_or_default(),
                ged,
                r["time_ms"].as_f64().unwrap_or_default(),
                r["expanded"].as_u64().unwrap_or_default(),
                r["backtracks"].as_u64().unwrap_or_default(),
            );
        }
        println!("solve ratio {ratio:.3} ({solved}/{})", rows.len());
    }
    Ok(ExitCode::SUCCESS)
}
