//! The `mpoly` command line.
//!
//! Exit codes: `0` yes/feasible, `1` no/infeasible, `2` marginal/unknown,
//! `64` usage error, `65` malformed input, `70` soundness violation in
//! `pipeline`. Structured output is deterministic JSON.

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cert::{certify, Consensus};
use crate::error::Error;
use crate::linalg::{matrices_from_json, matrices_to_json, AnyMatrix, Rational, Tolerance, TOLERANCE_ENV};
use crate::oracle::{alpha_lower_bound, extract_independent_set, max_independent_set, motzkin_straus_min};
use crate::reduction::{build_instance, convex_combination_any, nonneg_parts, Graph, SimplexPoint};
use crate::search::{
    hurwitz_search, minimize_spectral_radius, search_general, search_symmetric, SearchConfig, SearchOutcome,
    SearchStatus, SymmetricConfig,
};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_SOUNDNESS: i32 = 70;

/// Largest graph `pipeline` accepts, since it runs the exact oracle.
pub const PIPELINE_MAX_VERTICES: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "mpoly", version, about = "Nonsingular M-matrix certification and matrix-polytope search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Absolute tolerance for float decisions.
    #[arg(long, global = true, env = TOLERANCE_ENV, value_parser = parse_tol)]
    tol: Option<Tolerance>,
    /// Emit JSON instead of a plain summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of objective evaluations.
    #[arg(long, default_value_t = 50_000)]
    budget: u64,
}

#[derive(Debug, Args, Clone, Copy)]
#[group(multiple = false)]
struct Backing {
    /// Convert the input to exact rationals before computing.
    #[arg(long)]
    exact: bool,
    /// Convert the input to floats before computing.
    #[arg(long)]
    float: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify whether a matrix is a nonsingular M-matrix.
    Certify {
        input: PathBuf,
        #[command(flatten)]
        backing: Backing,
        #[command(flatten)]
        common: Common,
    },
    /// Build the reduction instance for a graph and target size.
    Reduce {
        graph: PathBuf,
        #[arg(short, long)]
        j: usize,
        /// Emit the nonnegative parts `N_i` instead of the gadgets.
        #[arg(long)]
        parts: bool,
    },
    /// Convex combination of a matrix list with the given weights.
    Combine {
        input: PathBuf,
        /// Comma-separated weights, e.g. `1/2,1/4,1/4` or `0.5,0.5`.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
        #[command(flatten)]
        backing: Backing,
    },
    /// Exact independence number of a graph.
    Alpha {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Multi-start Motzkin-Straus minimization.
    MsSolve {
        graph: PathBuf,
        /// Number of starts (default `20 n`).
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Search a matrix polytope for a nonsingular M-matrix.
    Search {
        input: PathBuf,
        /// Use the convex path for symmetric inputs.
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize the spectral radius over a polytope of nonnegative matrices.
    RadiusMin {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Search a matrix polytope for a Hurwitz-stable matrix.
    HurwitzSearch {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce, search and compare against the exact oracle.
    Pipeline {
        graph: PathBuf,
        #[arg(short, long)]
        j: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_tol(s: &str) -> Result<Tolerance, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    Tolerance::new(v).map_err(|e| e.to_string())
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Data(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_matrices(path: &Path) -> Result<Vec<AnyMatrix>, Failure> {
    matrices_from_json(&read_input(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::from_dimacs(&read_input(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn check_j(g: &Graph, j: usize) -> Result<(), Failure> {
    if j == 0 || j > g.vertex_count() {
        return Err(Failure::Usage(format!("-j must satisfy 1 <= j <= n = {}", g.vertex_count())));
    }
    Ok(())
}

fn convert(m: AnyMatrix, backing: Backing) -> Result<AnyMatrix, Failure> {
    Ok(if backing.exact {
        AnyMatrix::Exact(m.to_exact()?)
    } else if backing.float {
        AnyMatrix::Float(m.to_f64())
    } else {
        m
    })
}

fn tolerance(common: &Common) -> Tolerance {
    common.tol.unwrap_or_default()
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output values are serializable"));
}

fn search_config(search: &SearchArgs, common: &Common) -> SearchConfig {
    SearchConfig { budget: search.budget, seed: search.seed, tol: tolerance(common), ..SearchConfig::default() }
}

fn outcome_json(out: &SearchOutcome) -> Value {
    json!({
        "status": out.status,
        "certificate": out.certificate.as_ref().map(|c| match &c.exact_weights {
            Some(e) => json!({ "weights": c.weights, "exact_weights": e }),
            None => json!({ "weights": c.weights }),
        }),
        "margins": out.margins,
        "budget_spent": out.budget_spent,
        "objective_trace": out.objective_trace,
    })
}

fn print_outcome(out: &SearchOutcome, as_json: bool) {
    if as_json {
        print_json(&outcome_json(out));
    } else {
        println!("status        {:?}", out.status);
        if let Some(c) = &out.certificate {
            println!("certificate   {:?}", c.weights.weights());
        }
        for (k, v) in &out.margins {
            println!("{k:<13} {v:.6e}");
        }
        println!("budget_spent  {}", out.budget_spent);
    }
}

fn cmd_certify(input: &Path, backing: Backing, common: &Common) -> CmdResult {
    let mut ms = read_matrices(input)?;
    if ms.len() != 1 {
        return Err(Failure::Data(format!("expected one matrix, found {}", ms.len())));
    }
    let m = convert(ms.remove(0), backing)?;
    let report = certify(&m, tolerance(common));
    if common.json {
        print_json(&report);
    } else {
        println!("dimension  {}", report.input_dim);
        println!("z_matrix   {}", report.is_z);
        for (c, o) in &report.verdicts {
            match o.verdict() {
                Some(v) => println!("{:<10} {:?} (margin {:.6e})", c.name(), v.status, v.margin),
                None => println!("{:<10} error", c.name()),
            }
        }
        println!("consensus  {:?}", report.consensus);
    }
    Ok(match report.consensus {
        Consensus::Yes => 0,
        Consensus::No | Consensus::NotApplicable => 1,
        Consensus::Marginal | Consensus::Disagree => 2,
    })
}

fn cmd_reduce(graph: &Path, j: usize, parts: bool) -> CmdResult {
    let g = read_graph(graph)?;
    check_j(&g, j)?;
    let out = if parts {
        matrices_to_json(&nonneg_parts(&g, j)?.into_iter().map(AnyMatrix::Exact).collect::<Vec<_>>())
    } else {
        build_instance(&g, j)?.to_json()
    };
    print_json(&out);
    Ok(0)
}

fn cmd_combine(input: &Path, weights: &[String], backing: Backing) -> CmdResult {
    let ms = read_matrices(input)?.into_iter().map(|m| convert(m, backing)).collect::<Result<Vec<_>, _>>()?;
    if weights.len() != ms.len() {
        return Err(Failure::Usage(format!("{} weights given for {} matrices", weights.len(), ms.len())));
    }
    let refs: Vec<&str> = weights.iter().map(|s| s.trim()).collect();
    let exact = SimplexPoint::<Rational>::from_strings(&refs).map_err(|e| Failure::Usage(e.to_string()))?;
    let all_exact = ms.iter().all(AnyMatrix::is_exact);
    let b = convex_combination_any(&ms, &exact.to_f64(), all_exact.then_some(&exact))?;
    print_json(&b.to_json());
    Ok(0)
}

fn cmd_alpha(graph: &Path, common: &Common) -> CmdResult {
    let g = read_graph(graph)?;
    let r = max_independent_set(&g)?;
    let witness: Vec<usize> = r.witness.iter().map(|v| v + 1).collect();
    if common.json {
        print_json(&json!({ "alpha": r.alpha, "witness": witness, "node_count": r.node_count }));
    } else {
        println!("alpha    {}", r.alpha);
        println!("witness  {witness:?}");
    }
    Ok(0)
}

fn cmd_ms_solve(graph: &Path, restarts: Option<usize>, iters: usize, seed: u64, common: &Common) -> CmdResult {
    let g = read_graph(graph)?;
    let restarts = restarts.unwrap_or(20 * g.vertex_count());
    if restarts == 0 || iters == 0 {
        return Err(Failure::Usage("--restarts and --iters must be positive".into()));
    }
    let r = motzkin_straus_min(&g, restarts, iters, seed)?;
    let bound = alpha_lower_bound(r.value)?;
    let set: Vec<usize> = extract_independent_set(&g, r.minimizer.weights()).iter().map(|v| v + 1).collect();
    if common.json {
        print_json(&json!({
            "value": r.value,
            "minimizer": r.minimizer,
            "restarts_used": r.restarts_used,
            "alpha_lower_bound": bound,
            "independent_set": set,
        }));
    } else {
        println!("value              {:.12}", r.value);
        println!("alpha_lower_bound  {bound}");
        println!("independent_set    {set:?}");
    }
    Ok(0)
}

fn cmd_search(input: &Path, symmetric: bool, search: &SearchArgs, common: &Common) -> CmdResult {
    let ms = read_matrices(input)?;
    let out = if symmetric {
        let cfg = SymmetricConfig { cert_tol: tolerance(common), ..SymmetricConfig::default() };
        match search_symmetric(&ms, &cfg) {
            Err(e @ Error::NotSymmetric(_)) => return Err(Failure::Data(e.to_string())),
            r => r?,
        }
    } else {
        search_general(&ms, &search_config(search, common))?
    };
    print_outcome(&out, common.json);
    Ok(out.status.exit_code())
}

fn cmd_radius_min(input: &Path, search: &SearchArgs, common: &Common) -> CmdResult {
    let ms = read_matrices(input)?;
    let out = minimize_spectral_radius(&ms, &search_config(search, common))?;
    if common.json {
        print_json(&out);
    } else {
        println!("rho          {:.12}", out.rho);
        println!("pi           {:?}", out.pi.weights());
        println!("below_one    {}", out.below_one);
        println!("cross_check  {:?}", out.cross_check);
    }
    Ok(if out.below_one { 0 } else { 2 })
}

fn cmd_hurwitz(input: &Path, search: &SearchArgs, common: &Common) -> CmdResult {
    let ms = read_matrices(input)?;
    let out = hurwitz_search(&ms, &search_config(search, common))?;
    print_outcome(&out, common.json);
    Ok(out.status.exit_code())
}

/// Result of reducing `(G, j)`, searching the instance and comparing with
/// the exact independence number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub j: usize,
    pub search: SearchOutcome,
    pub alpha: usize,
    /// Ground truth: the instance is feasible iff `alpha > j`.
    pub feasible_truth: bool,
    /// False only when the search reported `FEASIBLE` with `alpha <= j`.
    pub sound: bool,
}

impl PipelineReport {
    pub fn exit_code(&self) -> i32 {
        if self.sound {
            self.search.status.exit_code()
        } else {
            EXIT_SOUNDNESS
        }
    }
}

/// Reduce, run the general search, and check the answer against the
/// branch-and-bound oracle.
pub fn run_pipeline(g: &Graph, j: usize, cfg: &SearchConfig) -> crate::Result<PipelineReport> {
    let inst = build_instance(g, j)?;
    let search = search_general(&inst.as_any(), cfg)?;
    let alpha = max_independent_set(g)?.alpha;
    let feasible_truth = alpha > j;
    let sound = search.status != SearchStatus::Feasible || feasible_truth;
    Ok(PipelineReport { n: g.vertex_count(), j, search, alpha, feasible_truth, sound })
}

fn cmd_pipeline(graph: &Path, j: usize, search: &SearchArgs, common: &Common) -> CmdResult {
    let g = read_graph(graph)?;
    if g.vertex_count() > PIPELINE_MAX_VERTICES {
        return Err(Failure::Usage(format!("pipeline supports n <= {PIPELINE_MAX_VERTICES}")));
    }
    check_j(&g, j)?;
    let report = run_pipeline(&g, j, &search_config(search, common))?;
    let agree = if report.sound { "AGREE" } else { "DISAGREE" };
    if common.json {
        print_json(&json!({
            "n": report.n,
            "j": j,
            "search": outcome_json(&report.search),
            "alpha": report.alpha,
            "feasible_truth": report.feasible_truth,
            "agreement": agree,
        }));
    } else {
        println!("search  {:?}", report.search.status);
        println!("alpha   {} ({} j = {j})", report.alpha, if report.feasible_truth { ">" } else { "<=" });
        println!("{agree}");
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Certify { input, backing, common } => cmd_certify(&input, backing, &common),
        Command::Reduce { graph, j, parts } => cmd_reduce(&graph, j, parts),
        Command::Combine { input, weights, backing } => cmd_combine(&input, &weights, backing),
        Command::Alpha { graph, common } => cmd_alpha(&graph, &common),
        Command::MsSolve { graph, restarts, iters, seed, common } => cmd_ms_solve(&graph, restarts, iters, seed, &common),
        Command::Search { input, symmetric, search, common } => cmd_search(&input, symmetric, &search, &common),
        Command::RadiusMin { input, search, common } => cmd_radius_min(&input, &search, &common),
        Command::HurwitzSearch { input, search, common } => cmd_hurwitz(&input, &search, &common),
        Command::Pipeline { graph, j, search, common } => cmd_pipeline(&graph, j, &search, &common),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DATA
        }
    }
}
