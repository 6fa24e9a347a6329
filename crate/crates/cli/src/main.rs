//! `dspp`: solve, check and generate two-disjoint-shortest-paths instances.

use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use dspp::dpp_undirected::DEFAULT_PATH_BUDGET;
use dspp::dspp2::{solve, solve_with_stats, successors, Evaluation, Query, SolveOptions, Verdict};
use dspp::format::{emit_instance, parse_instance, InstanceFile};
use dspp::generator::{planted_instance, random_instance};
use dspp::graph::{Length, Link};
use dspp::oracle::{brute_force_dspp2, DEFAULT_ORACLE_BUDGET};
use dspp::relation::{DisjointMode, Path};
use dspp::Error;

#[derive(Parser)]
#[command(
    name = "dspp",
    version,
    about = "Two disjoint shortest paths in undirected graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide every query of an instance file
    Solve(SolveArgs),
    /// List all feasible sink pairs for the sources of each query
    Successors(SolveArgs),
    /// Decide every query by brute force
    Oracle(OracleArgs),
    /// Print a random instance
    Gen(GenArgs),
    /// Print a planted feasible instance
    Planted(PlantedArgs),
    /// Compare solver and oracle on random instances
    Selftest(SelftestArgs),
    /// Time planted instances and print per-component CSV
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Edge,
    Vertex,
}

impl From<ModeArg> for DisjointMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Edge => DisjointMode::Edge,
            ModeArg::Vertex => DisjointMode::Vertex,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    witness: bool,
    /// Overrides the mode given in the file
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Compute only the relation rows the query needs
    #[arg(long)]
    anchored: bool,
    /// Path budget per zero-length component
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    witness: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0)]
    zero_frac: f64,
    #[arg(long, default_value_t = 10)]
    max_length: Length,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "edge")]
    mode: ModeArg,
}

#[derive(Args)]
struct PlantedArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 1000)]
    instances: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "edge")]
    mode: ModeArg,
    #[arg(long)]
    anchored: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    instances: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    anchored: bool,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VertexOutOfRange { .. }
            | Error::SelfLoop(_)
            | Error::DuplicateEdge(..)
            | Error::LengthTooLarge(_)
            | Error::InfeasibleEdgeCount { .. }
            | Error::InvalidArgument(_) => Failure::Input(e.to_string()),
            Error::NotWeaklyAcyclic { .. }
            | Error::ComponentTooLarge { .. }
            | Error::BudgetExceeded { .. }
            | Error::Invariant(_) => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Successors(a) => cmd_successors(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Planted(a) => cmd_planted(&a),
        Command::Selftest(a) => cmd_selftest(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load(path: &FsPath, mode: Option<ModeArg>) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut file =
        parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some(m) = mode {
        file.mode = m.into();
        for q in &mut file.queries {
            q.mode = file.mode;
        }
    }
    Ok(file)
}

#[derive(Serialize)]
struct JsonReport {
    instance: String,
    mode: String,
    results: Vec<JsonResult>,
}

#[derive(Serialize)]
struct JsonQuery {
    s1: u32,
    t1: u32,
    s2: u32,
    t2: u32,
}

#[derive(Serialize)]
struct JsonDistances {
    d1: Option<Length>,
    d2: Option<Length>,
}

#[derive(Serialize)]
struct JsonPath {
    /// 1-based vertex sequence
    vertices: Vec<u32>,
    /// 1-based edge indices in input order
    edges: Vec<u32>,
}

#[derive(Serialize)]
struct JsonWitness {
    path1: JsonPath,
    path2: JsonPath,
}

#[derive(Serialize)]
struct JsonResult {
    query: JsonQuery,
    feasible: bool,
    distances: JsonDistances,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<JsonWitness>,
}

fn json_query(q: &Query) -> JsonQuery {
    JsonQuery {
        s1: q.s.0 .0 + 1,
        t1: q.t.0 .0 + 1,
        s2: q.s.1 .0 + 1,
        t2: q.t.1 .0 + 1,
    }
}

fn json_path(p: &Path) -> JsonPath {
    JsonPath {
        vertices: p.vertices().map(|v| v.0 + 1).collect(),
        edges: p
            .links()
            .map(|l| match l {
                Link::Edge(e) => e.0 + 1,
                Link::Arc(a) => a.0 + 1,
            })
            .collect(),
    }
}

fn render(
    path: &FsPath,
    file: &InstanceFile,
    verdicts: &[Verdict],
    json: bool,
    witness: bool,
) -> Result<String, Failure> {
    if json {
        let report = JsonReport {
            instance: path.display().to_string(),
            mode: file.mode.to_string(),
            results: file
                .queries
                .iter()
                .zip(verdicts)
                .map(|(q, v)| JsonResult {
                    query: json_query(q),
                    feasible: v.feasible,
                    distances: JsonDistances {
                        d1: v.distances[0],
                        d2: v.distances[1],
                    },
                    witness: v.witness.as_ref().filter(|_| witness).map(|w| JsonWitness {
                        path1: json_path(&w.first),
                        path2: json_path(&w.second),
                    }),
                })
                .collect(),
        };
        let mut s =
            serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
        s.push('\n');
        return Ok(s);
    }
    let mut out = String::new();
    for (q, v) in file.queries.iter().zip(verdicts) {
        let jq = json_query(q);
        let d = |x: Option<Length>| x.map_or("unreachable".to_string(), |x| x.to_string());
        let _ = writeln!(
            out,
            "s1={} t1={} s2={} t2={}: {} (d1={}, d2={})",
            jq.s1,
            jq.t1,
            jq.s2,
            jq.t2,
            if v.feasible { "feasible" } else { "infeasible" },
            d(v.distances[0]),
            d(v.distances[1])
        );
        if let (true, Some(w)) = (witness, &v.witness) {
            for (i, p) in [&w.first, &w.second].into_iter().enumerate() {
                let verts: Vec<String> = json_path(p).vertices.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "  path{}: {}", i + 1, verts.join(" "));
            }
        }
    }
    Ok(out)
}

fn options(anchored: bool, witnesses: bool, budget: u64) -> SolveOptions {
    SolveOptions {
        evaluation: if anchored {
            Evaluation::Anchored
        } else {
            Evaluation::Full
        },
        witnesses,
        budget,
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<String, Failure> {
    let file = load(&a.input, a.mode)?;
    let opts = options(a.anchored, a.witness, a.budget);
    let verdicts = file
        .queries
        .iter()
        .map(|q| solve(&file.graph, q, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    render(&a.input, &file, &verdicts, a.json, a.witness)
}

fn cmd_successors(a: &SolveArgs) -> Result<String, Failure> {
    let file = load(&a.input, a.mode)?;
    let opts = options(a.anchored, false, a.budget);
    let mut out = String::new();
    let mut json = Vec::new();
    for q in &file.queries {
        let set = successors(&file.graph, q.s, file.mode, &opts)?;
        let pairs: Vec<[u32; 2]> = set.iter().map(|t| [t.0 .0 + 1, t.1 .0 + 1]).collect();
        let _ = writeln!(
            out,
            "s1={} s2={}: {} sink pairs",
            q.s.0 .0 + 1,
            q.s.1 .0 + 1,
            pairs.len()
        );
        for p in &pairs {
            let _ = writeln!(out, "  t1={} t2={}", p[0], p[1]);
        }
        json.push(serde_json::json!({
            "s1": q.s.0.0 + 1,
            "s2": q.s.1.0 + 1,
            "sinks": pairs,
        }));
    }
    if a.json {
        let report = serde_json::json!({
            "instance": a.input.display().to_string(),
            "mode": file.mode.to_string(),
            "results": json,
        });
        let mut s =
            serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
        s.push('\n');
        return Ok(s);
    }
    Ok(out)
}

fn cmd_oracle(a: &OracleArgs) -> Result<String, Failure> {
    let file = load(&a.input, a.mode)?;
    let verdicts = file
        .queries
        .iter()
        .map(|q| brute_force_dspp2(&file.graph, q, a.budget))
        .collect::<Result<Vec<_>, _>>()?;
    render(&a.input, &file, &verdicts, a.json, a.witness)
}

fn cmd_gen(a: &GenArgs) -> Result<String, Failure> {
    let inst = random_instance(a.n, a.m, a.zero_frac, a.max_length, a.seed)?;
    let mode: DisjointMode = a.mode.into();
    let query = Query { mode, ..inst.query };
    Ok(emit_instance(&InstanceFile {
        graph: inst.graph,
        queries: vec![query],
        mode,
    }))
}

fn cmd_planted(a: &PlantedArgs) -> Result<String, Failure> {
    let inst = planted_instance(a.n, a.seed)?;
    Ok(emit_instance(&InstanceFile {
        graph: inst.graph,
        queries: vec![inst.query],
        mode: DisjointMode::Edge,
    }))
}

fn cmd_selftest(a: &SelftestArgs) -> Result<String, Failure> {
    if a.max_n < 2 {
        return Err(Failure::Input("--max-n must be at least 2".into()));
    }
    let mode: DisjointMode = a.mode.into();
    let opts = options(a.anchored, true, DEFAULT_PATH_BUDGET);
    let fractions = [0.0, 0.3, 1.0];
    let outcomes: Vec<Result<bool, Failure>> = (0..a.instances)
        .into_par_iter()
        .map(|i| {
            let seed = a.seed.wrapping_add(i);
            let n = 2 + (i as usize % (a.max_n - 1));
            let max_m = (n * (n - 1) / 2).min(3 * n);
            let m = (seed as usize).wrapping_mul(2654435761) % (max_m + 1);
            let inst = random_instance(n, m, fractions[i as usize % 3], 5, seed)?;
            let query = Query { mode, ..inst.query };
            let ours = solve(&inst.graph, &query, &opts)?;
            let truth = brute_force_dspp2(&inst.graph, &query, DEFAULT_ORACLE_BUDGET)?;
            Ok(ours.feasible == truth.feasible)
        })
        .collect();
    let mut agree = 0;
    for o in outcomes {
        if o? {
            agree += 1;
        }
    }
    let line = format!("solver/oracle agreement {agree}/{}\n", a.instances);
    if agree as u64 == a.instances {
        Ok(line)
    } else {
        Err(Failure::Internal(line.trim_end().to_string()))
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<String, Failure> {
    let opts = options(a.anchored, true, DEFAULT_PATH_BUDGET);
    let mut out = String::from(
        "n,seed,m,component,vertices,arcs,edges,relation_entries,states,component_micros,total_micros,feasible\n",
    );
    for &n in &a.n {
        for i in 0..a.instances {
            let seed = a.seed.wrapping_add(i);
            let inst = planted_instance(n, seed)?;
            let started = Instant::now();
            let (verdict, stats) = solve_with_stats(&inst.graph, &inst.query, &opts)?;
            let total = started.elapsed().as_micros();
            for c in &stats.components {
                let _ = writeln!(
                    out,
                    "{n},{seed},{},{},{},{},{},{},{},{},{total},{}",
                    inst.graph.edge_count(),
                    c.position,
                    c.vertices,
                    c.arcs,
                    c.edges,
                    c.relation_entries,
                    c.states,
                    c.elapsed.as_micros(),
                    verdict.feasible
                );
            }
        }
    }
    Ok(out)
}
