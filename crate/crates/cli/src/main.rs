//! `twpart`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 cap or parameter
//! infeasibility. Machine output (JSON, CSV, partition and decomposition
//! text) goes to standard output; messages go to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use twpart::apps::{estimate_optimum, test_property, AppError, Problem, Property};
use twpart::generators::{generate, Family, GenSpec};
use twpart::graph::{parse_graph, Graph, Vertex, VertexSet};
use twpart::isolation::is_isolated_neighborhood;
use twpart::neighborhood::{find_neighborhood, SearchBudget};
use twpart::oracle::{assign_by_rank, derive_parameters, OracleParams, OracleSession, ParamError};
use twpart::partition::Partition;
use twpart::query::QueryLedger;
use twpart::rational::{format_rational, parse_rational, Rational};
use twpart::tree_decomp::{exact_treewidth, normalize, TreeDecomposition};

#[derive(Parser, Debug)]
#[command(name = "twpart", version, about = "Partitioning oracle for bounded-treewidth graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Generate a seeded random graph.
    Gen(GenArgs),
    /// Partition every vertex, globally or through per-vertex oracle calls.
    Partition(PartitionArgs),
    /// Component of one vertex, through the local oracle.
    OracleQuery(OracleQueryArgs),
    /// Run the isolated-neighborhood search from one vertex.
    FindNeighborhood(FindArgs),
    /// Estimate matching, vertex cover or dominating set size.
    Estimate(EstimateArgs),
    /// Test a hereditary property.
    Test(TestArgs),
    /// Maximum queries per oracle call across graph sizes, as CSV.
    Bench(BenchArgs),
    /// Validate, normalize, or compute the treewidth of a decomposition.
    Decomp(DecompArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FamilyArg {
    Forest,
    Cactus,
    PartialKtree,
    Grid,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Forest => Family::Forest,
            FamilyArg::Cactus => Family::Cactus,
            FamilyArg::PartialKtree => Family::PartialKtree,
            FamilyArg::Grid => Family::Grid,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Degree bound.
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Treewidth target for partial k-trees.
    #[arg(long, default_value_t = 2)]
    h: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random extra edges; drops the witness.
    #[arg(long, default_value_t = 0)]
    noise: usize,
    #[arg(long)]
    output: PathBuf,
    /// Where to write the witness decomposition, when there is one.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Practical,
    Theoretical,
}

#[derive(Args, Debug, Serialize)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "practical")]
    param_mode: ModeArg,
    /// Neighborhood size bound (practical mode).
    #[arg(long, default_value_t = 20)]
    k: u64,
    /// Conductance bound as "p/q" or a decimal (practical mode).
    #[arg(long, default_value = "1/5")]
    delta: String,
    #[arg(long, default_value_t = 1)]
    h: usize,
    /// Degree bound; defaults to the maximum degree of the input.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value = "1/5")]
    epsilon: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Theoretical mode refuses to run when the derived k exceeds this.
    #[arg(long, default_value_t = 1_000_000)]
    k_cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PartitionMode {
    Global,
    LocalSweep,
}

#[derive(Args, Debug, Serialize)]
struct PartitionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    oracle: OracleArgs,
    #[arg(long, value_enum, default_value = "global")]
    mode: PartitionMode,
    /// Share search results across calls in local-sweep mode.
    #[arg(long)]
    cached: bool,
    /// Partition file; printed before the stats line when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct OracleQueryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    vertex: Vertex,
}

#[derive(Args, Debug, Serialize)]
struct FindArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    vertex: Vertex,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    delta: String,
    #[arg(long)]
    c: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ProblemArg {
    Matching,
    VertexCover,
    DominatingSet,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Matching => Problem::Matching,
            ProblemArg::VertexCover => Problem::VertexCover,
            ProblemArg::DominatingSet => Problem::DominatingSet,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct EstimateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    oracle: OracleArgs,
    #[arg(long, value_enum)]
    problem: ProblemArg,
    /// Additive error as a fraction of n.
    #[arg(long, default_value_t = 0.2)]
    accuracy: f64,
}

#[derive(Args, Debug, Serialize)]
struct TestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    oracle: OracleArgs,
    /// forest, cactus, treewidth_le_<h> or <k>_colorable.
    #[arg(long)]
    property: String,
    /// Distance parameter of the tester.
    #[arg(long, default_value_t = 0.1)]
    accuracy: f64,
}

#[derive(Args, Debug, Serialize)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "forest")]
    family: FamilyArg,
    #[arg(long, default_value = "1/5")]
    epsilon: String,
    /// Comma-separated graph sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    k: u64,
    #[arg(long, default_value = "1/5")]
    delta: String,
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Oracle calls per size, at uniformly sampled vertices.
    #[arg(long, default_value_t = 100)]
    calls: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DecompAction {
    Validate,
    Normalize,
    Treewidth,
}

#[derive(Args, Debug, Serialize)]
struct DecompArgs {
    #[arg(value_enum)]
    action: DecompAction,
    #[arg(long)]
    input: PathBuf,
    /// Decomposition file (validate and normalize).
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Where to write the resulting decomposition.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Infeasible(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Data(format!("{context}: {e}"))
}

fn rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn read_graph_file(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(data(&path.display().to_string()))?;
    parse_graph(&text).map_err(data(&path.display().to_string()))
}

fn read_decomp_file(path: &Path) -> Result<TreeDecomposition, Failure> {
    let text = fs::read_to_string(path).map_err(data(&path.display().to_string()))?;
    TreeDecomposition::parse(&text).map_err(data(&path.display().to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(data(&path.display().to_string()))
}

fn param_failure(e: ParamError) -> Failure {
    Failure::Infeasible(e.to_string())
}

/// Resolved oracle parameters; everything is validated before any I/O.
struct Resolved {
    epsilon: Rational,
    delta: Option<Rational>,
}

fn pre_validate(a: &OracleArgs) -> Result<Resolved, Failure> {
    let epsilon = rational("epsilon", &a.epsilon)?;
    let delta = match a.param_mode {
        ModeArg::Practical => Some(rational("delta", &a.delta)?),
        ModeArg::Theoretical => None,
    };
    Ok(Resolved { epsilon, delta })
}

fn resolve(a: &OracleArgs, r: &Resolved, g: &Graph) -> Result<OracleParams, Failure> {
    let d = a.d.unwrap_or(g.max_degree()).max(1);
    if g.max_degree() > d {
        return Err(Failure::Data(format!("input has degree {} above --d {d}", g.max_degree())));
    }
    let params = match r.delta {
        Some(delta) => OracleParams::practical(r.epsilon, d, a.h, a.k, delta, a.seed).map_err(param_failure)?,
        None => {
            let p = derive_parameters(r.epsilon, d.max(2), a.h).map_err(param_failure)?;
            if p.k > a.k_cap {
                return Err(Failure::Infeasible(format!(
                    "derived k = {} exceeds the cap {}; use --param-mode practical",
                    p.k, a.k_cap
                )));
            }
            p.with_seed(a.seed)
        }
    };
    usize::try_from(params.k).map_err(|_| Failure::Infeasible("k does not fit in memory".into()))?;
    Ok(params)
}

fn params_json(p: &OracleParams) -> Value {
    json!({
        "k": p.k,
        "delta": format_rational(&p.delta),
        "c": p.c,
        "d": p.d,
        "h": p.h,
        "epsilon": format_rational(&p.epsilon),
        "seed": p.seed,
        "mode": p.mode,
    })
}

fn config(command: &Command) -> Value {
    serde_json::to_value(command).expect("arguments serialize")
}

fn emit(out: &mut impl Write, value: &Value) -> Result<(), Failure> {
    writeln!(out, "{value}").map_err(data("stdout"))
}

fn run(command: &Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Gen(a) => {
            let spec = GenSpec {
                family: a.family.into(),
                n: a.n,
                d: a.d,
                h: a.h,
                seed: a.seed,
                noise_edges: a.noise,
            };
            let gen = generate(&spec).map_err(|e| Failure::Infeasible(e.to_string()))?;
            write_file(&a.output, &gen.graph.serialize())?;
            let mut witness = false;
            if let (Some(path), Some(w)) = (&a.witness, &gen.witness) {
                write_file(path, &w.to_text())?;
                witness = true;
            }
            emit(
                out,
                &json!({"n": gen.graph.n(), "m": gen.graph.m(), "witness_written": witness, "config": config(command)}),
            )
        }
        Command::Partition(a) => {
            let resolved = pre_validate(&a.oracle)?;
            let g = read_graph_file(&a.oracle.input)?;
            let params = resolve(&a.oracle, &resolved, &g)?;
            let budget = params.budget();
            let (partition, total, max_call) = match a.mode {
                PartitionMode::Global => {
                    let searched: Vec<(VertexSet, u64)> = (0..g.n())
                        .into_par_iter()
                        .map(|v| {
                            let mut ledger = QueryLedger::new();
                            let s = find_neighborhood(&g, &mut ledger, v, &budget);
                            (s, ledger.total())
                        })
                        .collect();
                    let total = searched.iter().map(|x| x.1).sum::<u64>();
                    let max = searched.iter().map(|x| x.1).max().unwrap_or(0);
                    let found: Vec<VertexSet> = searched.into_iter().map(|x| x.0).collect();
                    (assign_by_rank(&g, &found, params.seed), total, max)
                }
                PartitionMode::LocalSweep => {
                    let session = if a.cached {
                        OracleSession::cached(&g, params.clone())
                    } else {
                        OracleSession::new(&g, params.clone())
                    };
                    let answers: Vec<VertexSet> =
                        (0..g.n()).into_par_iter().map(|v| session.query(v).expect("in range")).collect();
                    let ledger = session.ledger();
                    let p = Partition::from_answers(&g, &answers)
                        .map_err(|e| Failure::Data(format!("oracle answers are inconsistent: {e}")))?;
                    (p, ledger.total(), ledger.max_per_call())
                }
            };
            let text = partition.to_text();
            match &a.output {
                Some(path) => write_file(path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(data("stdout"))?,
            }
            let mut stats = json!({
                "n": g.n(),
                "m": g.m(),
                "cut_edges": partition.cut_edges(),
                "max_component": partition.max_component(),
                "queries_total": total,
                "max_queries_per_call": max_call,
                "config": config(command),
            });
            merge(&mut stats, params_json(&params));
            emit(out, &stats)
        }
        Command::OracleQuery(a) => {
            let resolved = pre_validate(&a.oracle)?;
            let g = read_graph_file(&a.oracle.input)?;
            let params = resolve(&a.oracle, &resolved, &g)?;
            let session = OracleSession::new(&g, params.clone());
            let comp = session.query(a.vertex).map_err(|e| Failure::Data(e.to_string()))?;
            let mut v = json!({
                "vertex": a.vertex,
                "component": comp,
                "queries": session.ledger().total(),
                "config": config(command),
            });
            merge(&mut v, params_json(&params));
            emit(out, &v)
        }
        Command::FindNeighborhood(a) => {
            let delta = rational("delta", &a.delta)?;
            let budget = SearchBudget::new(a.k, delta, a.c).map_err(|e| Failure::Infeasible(e.to_string()))?;
            let g = read_graph_file(&a.input)?;
            if a.vertex >= g.n() {
                return Err(Failure::Data(format!("vertex {} out of range for n = {}", a.vertex, g.n())));
            }
            let mut ledger = QueryLedger::new();
            let set = find_neighborhood(&g, &mut ledger, a.vertex, &budget);
            let valid = is_isolated_neighborhood(&g, a.vertex, &set, a.k, delta, a.c);
            emit(
                out,
                &json!({"vertex": a.vertex, "set": set, "valid": valid, "queries": ledger.total(), "config": config(command)}),
            )
        }
        Command::Estimate(a) => {
            let resolved = pre_validate(&a.oracle)?;
            let g = read_graph_file(&a.oracle.input)?;
            let params = resolve(&a.oracle, &resolved, &g)?;
            let session = OracleSession::cached(&g, params.clone());
            let report = estimate_optimum(&session, a.problem.into(), a.accuracy, a.oracle.seed).map_err(app_failure)?;
            let mut v = serde_json::to_value(&report).expect("report serializes");
            merge(&mut v, json!({"params": params_json(&params), "config": config(command)}));
            emit(out, &v)
        }
        Command::Test(a) => {
            let property: Property = a.property.parse().map_err(|e: twpart::apps::UnknownProperty| Failure::Usage(e.to_string()))?;
            let resolved = pre_validate(&a.oracle)?;
            let g = read_graph_file(&a.oracle.input)?;
            let params = resolve(&a.oracle, &resolved, &g)?;
            let session = OracleSession::cached(&g, params.clone());
            let verdict = test_property(&session, property, a.accuracy, a.oracle.seed).map_err(app_failure)?;
            let mut v = serde_json::to_value(&verdict).expect("verdict serializes");
            merge(&mut v, json!({"params": params_json(&params), "config": config(command)}));
            emit(out, &v)
        }
        Command::Bench(a) => {
            let epsilon = rational("epsilon", &a.epsilon)?;
            let delta = rational("delta", &a.delta)?;
            let params = OracleParams::practical(epsilon, a.d, a.h, a.k, delta, a.seed).map_err(param_failure)?;
            let mut rows = Vec::new();
            for &n in &a.sizes {
                let spec = GenSpec { family: a.family.into(), n, d: a.d, h: a.h, seed: a.seed, noise_edges: 0 };
                let g = generate(&spec).map_err(|e| Failure::Infeasible(e.to_string()))?.graph;
                if g.n() == 0 {
                    rows.push((n, 0));
                    continue;
                }
                let session = OracleSession::new(&g, params.clone());
                let picks = twpart_sample(g.n(), a.calls, a.seed);
                picks.par_iter().for_each(|&v| drop(session.query(v).expect("in range")));
                rows.push((n, session.ledger().max_per_call()));
            }
            writeln!(out, "n,max_queries_per_call").map_err(data("stdout"))?;
            for (n, q) in rows {
                writeln!(out, "{n},{q}").map_err(data("stdout"))?;
            }
            Ok(())
        }
        Command::Decomp(a) => {
            let g = read_graph_file(&a.input)?;
            let need_decomp = || {
                a.decomp
                    .as_deref()
                    .ok_or_else(|| Failure::Data("--decomp is required for this action".into()))
                    .and_then(read_decomp_file)
            };
            match a.action {
                DecompAction::Validate => {
                    let d = need_decomp()?;
                    let result = d.validate(&g);
                    emit(
                        out,
                        &json!({
                            "valid": result.is_ok(),
                            "violation": result.as_ref().err().map(|e| format!("{e:?}")),
                            "width": d.width(),
                            "config": config(command),
                        }),
                    )?;
                    result.map_err(|e| Failure::Data(format!("invalid decomposition: {e:?}")))
                }
                DecompAction::Normalize => {
                    let d = need_decomp()?;
                    let out_d = normalize(&g, &d).map_err(|e| Failure::Data(format!("invalid decomposition: {e:?}")))?;
                    let text = out_d.to_text();
                    match &a.output {
                        Some(path) => write_file(path, &text)?,
                        None => out.write_all(text.as_bytes()).map_err(data("stdout"))?,
                    }
                    emit(
                        out,
                        &json!({
                            "bags_before": d.bags().len(),
                            "bags_after": out_d.bags().len(),
                            "width_before": d.width(),
                            "width_after": out_d.width(),
                            "config": config(command),
                        }),
                    )
                }
                DecompAction::Treewidth => {
                    let r = exact_treewidth(&g).map_err(|e| Failure::Infeasible(e.to_string()))?;
                    if let Some(path) = &a.output {
                        write_file(path, &r.decomposition.to_text())?;
                    }
                    emit(out, &json!({"treewidth": r.width, "order": r.order, "config": config(command)}))
                }
            }
        }
    }
}

fn twpart_sample(n: usize, count: usize, seed: u64) -> Vec<Vertex> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0..n)).collect()
}

fn app_failure(e: AppError) -> Failure {
    Failure::Infeasible(e.to_string())
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = std::env::var("TWPART_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("twpart: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
