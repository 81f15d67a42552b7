//! `synctsp`: check, construct, solve and render synchronized agencies.
//!
//! Exit codes: 0 success, 1 expected negative answer, 2 input error,
//! 3 cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use synctsp_core::construct::{
    build_example1, build_example2, cubic_agency, full_occupancy_agency,
    full_occupancy_noparking_agency, hamiltonian_delay_agency, tree_max_agents, tree_puzzle_agency,
    ConstructError, DEFAULT_NOPARKING_STEP_CAP,
};
use synctsp_core::graph::{graph_to_json, hamiltonian_cycle, load_graph, stretch_metrics, GraphError};
use synctsp_core::render::{occupancy_csv, to_dot};
use synctsp_core::solver::{
    config_reachability_max_k, decide_agency, max_agents_for_horizon, min_horizon,
    tree_bound_sweep, with_threads, Caps, SolveError, TreeBound,
};
use synctsp_core::{find_crashes, Agency, AgencyError, Graph, StrengthReport};

#[derive(Parser)]
#[command(name = "synctsp", version, about = "Synchronized traveling-salesman agencies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every crash of an agency; exit 1 if there is any.
    Check(CheckArgs),
    /// Print alpha1 = n/k, alpha2 = T/n and alpha.
    Strength(StrengthArgs),
    /// Build an agency with one of the constructions.
    Construct(ConstructArgs),
    /// Exhaustive search on a small instance.
    Solve(SolveArgs),
    /// Maximum number of agents on a tree.
    MaxkTree(MaxkArgs),
    /// Sweep all small trees for agencies beating the tree lower bounds.
    VerifyBounds(VerifyArgs),
    /// Export a DOT picture or a CSV occupancy timeline.
    Render(RenderArgs),
}

#[derive(Args)]
struct InputPair {
    /// Graph file (JSON or edge list)
    #[arg(value_name = "GRAPH")]
    graph_pos: Option<PathBuf>,
    /// Agency JSON file
    #[arg(value_name = "AGENCY")]
    agency_pos: Option<PathBuf>,
    #[arg(long, conflicts_with = "graph_pos")]
    graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "agency_pos")]
    agency: Option<PathBuf>,
}

impl InputPair {
    fn paths(&self) -> (Option<&Path>, Option<&Path>) {
        (
            self.graph.as_deref().or(self.graph_pos.as_deref()),
            self.agency.as_deref().or(self.agency_pos.as_deref()),
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputPair,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct StrengthArgs {
    #[command(flatten)]
    input: InputPair,
    /// Number of nodes, instead of reading files
    #[arg(long, requires_all = ["k", "t"])]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum AgencyFormat {
    Json,
    Csv,
    Dot,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    kind: ConstructKind,
    /// Write the agency here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the graph (JSON) here
    #[arg(long, global = true)]
    graph_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: AgencyFormat,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// n agents with unit delays along a Hamiltonian cycle
    HamDelay {
        #[arg(long)]
        graph: PathBuf,
        /// Cycle as comma-separated nodes; searched for when omitted
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<usize>>,
    },
    /// Tight tree on 7r+6 nodes
    Example1 {
        #[arg(long)]
        r: usize,
    },
    /// Tight tree on 5q+6 nodes
    Example2 {
        #[arg(long)]
        q: usize,
    },
    /// Cubic 3-edge-connected graph with a girth-5 2-factor: T = 2n, k = n/2
    Cubic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// One agent per node, parking allowed
    FullOccupancy {
        #[arg(long)]
        graph: PathBuf,
    },
    /// One agent per node, no parking
    FullOccupancyNoparking {
        #[arg(long)]
        graph: PathBuf,
        /// Largest horizon to materialize
        #[arg(long, default_value_t = DEFAULT_NOPARKING_STEP_CAP)]
        cap: u128,
    },
    /// k agents on a tree via the sliding-puzzle planner
    TreePuzzle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Decide,
    MinT,
    MaxK,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Agents (upper limit in max-k mode, default n)
    #[arg(long)]
    k: Option<usize>,
    /// Horizon (upper limit in min-t mode)
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value = "decide")]
    mode: SolveMode,
    #[arg(long)]
    no_parking: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Lift the size caps
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct MaxkArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Cross-check by configuration-space reachability
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Dot,
    Csv,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    agency: Option<PathBuf>,
    /// Time unit to draw in DOT output
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long, value_enum, default_value = "dot")]
    format: RenderFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let code = if matches!(e, GraphError::CapExceeded { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

impl From<AgencyError> for Failure {
    fn from(e: AgencyError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::CapExceeded { .. } => Failure { code: 3, message: e.to_string() },
            SolveError::Graph(g) => g.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        let code = match &e {
            ConstructError::Graph(g) => return g.clone().into(),
            ConstructError::HorizonCapExceeded { .. } => 3,
            ConstructError::NotTwoEdgeConnected
            | ConstructError::TwoFactorUnionDisconnected
            | ConstructError::TooManyAgents { .. }
            | ConstructError::PaddingInfeasible { .. }
            | ConstructError::Planner(_)
            | ConstructError::Verification(_) => 1,
            ConstructError::NotHamiltonian(_) | ConstructError::Precondition(_) => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    load_graph(&read(path)?).map_err(|e| Failure { message: format!("{}: {e}", path.display()), ..e.into() })
}

fn read_agency(path: &Path) -> Result<Agency, Failure> {
    Agency::from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{v}\n")
}

fn caps(force: bool) -> Result<Caps, Failure> {
    if force {
        eprintln!("warning: --force lifts the solver caps; the search may run for a very long time");
        Ok(Caps::FORCED)
    } else {
        Ok(Caps::from_env()?)
    }
}

fn load_pair(input: &InputPair) -> Result<(Graph, Agency), Failure> {
    match input.paths() {
        (Some(g), Some(a)) => {
            let graph = read_graph(g)?;
            let agency = read_agency(a)?;
            Ok((graph, agency))
        }
        _ => Err(Failure::input("both a graph and an agency are required")),
    }
}

fn check(args: &CheckArgs) -> Outcome {
    let (g, a) = load_pair(&args.input)?;
    // walk and tour errors are input errors; crashes are the negative answer
    for (i, row) in a.schedule().iter().enumerate() {
        synctsp_core::validate_walk(&g, row, a.allow_parking())
            .map_err(|e| Failure::input(format!("agent {i}: {e}")))?;
        if !synctsp_core::is_tour(&g, row, a.allow_parking()) {
            return Err(Failure::input(format!("agent {i} does not visit every node")));
        }
    }
    let crashes = find_crashes(&g, &a);
    match args.format {
        ReportFormat::Text => {
            for c in &crashes {
                println!("{c}");
            }
            println!("{}", if crashes.is_empty() { "feasible" } else { "infeasible" });
        }
        ReportFormat::Json => {
            let v = json!({ "crashes": crashes, "feasible": crashes.is_empty() });
            print!("{}", json_line(&v));
        }
    }
    Ok(if crashes.is_empty() { 0 } else { 1 })
}

fn strength_cmd(args: &StrengthArgs) -> Outcome {
    let report = match (args.n, args.k, args.t) {
        (Some(n), Some(k), Some(t)) => {
            if n == 0 || k == 0 || k > n || t == 0 {
                return Err(Failure::input("need 1 <= k <= n and T >= 1"));
            }
            StrengthReport::new(n, k, t)
        }
        _ => {
            let (g, a) = load_pair(&args.input)?;
            match synctsp_core::strength(&g, &a) {
                Ok(r) => r,
                Err(AgencyError::Crashes(c)) => {
                    eprintln!("agency has {c} crashes; strength is defined for feasible agencies");
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    match args.format {
        ReportFormat::Text => println!("{report}"),
        ReportFormat::Json => {
            let frac = |r: synctsp_core::Rational| {
                json!({ "num": r.numer(), "den": r.denom(), "value": *r.numer() as f64 / *r.denom() as f64 })
            };
            let v = json!({
                "n": report.nodes,
                "k": report.agents,
                "t": report.horizon,
                "alpha1": frac(report.alpha1),
                "alpha2": frac(report.alpha2),
                "alpha": frac(report.alpha),
            });
            print!("{}", json_line(&v));
        }
    }
    Ok(0)
}

fn construct(args: &ConstructArgs) -> Outcome {
    let (g, a) = match &args.kind {
        ConstructKind::HamDelay { graph, cycle } => {
            let g = read_graph(graph)?;
            let cycle = match cycle {
                Some(c) => c.clone(),
                None => hamiltonian_cycle(&g).ok_or_else(|| Failure {
                    code: 1,
                    message: "graph has no Hamiltonian cycle".into(),
                })?,
            };
            let a = hamiltonian_delay_agency(&g, &cycle)?;
            (g, a)
        }
        ConstructKind::Example1 { r } => build_example1(*r)?,
        ConstructKind::Example2 { q } => build_example2(*q)?,
        ConstructKind::Cubic { graph } => {
            let g = read_graph(graph)?;
            let a = cubic_agency(&g)?.agency;
            (g, a)
        }
        ConstructKind::FullOccupancy { graph } => {
            let g = read_graph(graph)?;
            let a = full_occupancy_agency(&g)?;
            (g, a)
        }
        ConstructKind::FullOccupancyNoparking { graph, cap } => {
            let g = read_graph(graph)?;
            let a = full_occupancy_noparking_agency(&g, *cap)?;
            (g, a)
        }
        ConstructKind::TreePuzzle { graph, k } => {
            let g = read_graph(graph)?;
            let a = tree_puzzle_agency(&g, *k)?;
            (g, a)
        }
    };
    if let Some(p) = &args.graph_out {
        emit(Some(p), &graph_to_json(&g))?;
    }
    let text = match args.format {
        AgencyFormat::Json => a.to_json(),
        AgencyFormat::Csv => a.to_csv(),
        AgencyFormat::Dot => to_dot(&g, Some((&a, 0))),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn solve(args: &SolveArgs) -> Outcome {
    let g = read_graph(&args.graph)?;
    let caps = caps(args.force)?;
    let parking = !args.no_parking;
    let agency_value = |a: &Agency| -> serde_json::Value { serde_json::from_str(&a.to_json()).unwrap() };
    let (value, found) = with_threads(args.threads, || -> Result<_, Failure> {
        Ok(match args.mode {
            SolveMode::Decide => {
                let k = args.k.ok_or_else(|| Failure::input("--k is required in decide mode"))?;
                let d = decide_agency(&g, k, args.t, parking, &caps)?;
                (d.to_json_value(), !d.is_absent())
            }
            SolveMode::MinT => {
                let k = args.k.ok_or_else(|| Failure::input("--k is required in min-t mode"))?;
                match min_horizon(&g, k, args.t, parking, &caps)? {
                    Some(a) => (json!({ "result": "witness", "t": a.horizon(), "agency": agency_value(&a) }), true),
                    None => (json!({ "result": "absent", "t_max": args.t }), false),
                }
            }
            SolveMode::MaxK => {
                let k_max = args.k.unwrap_or(g.n());
                match max_agents_for_horizon(&g, args.t, k_max, parking, &caps)? {
                    (k, Some(a)) => (json!({ "result": "witness", "k": k, "agency": agency_value(&a) }), true),
                    (_, None) => (json!({ "result": "absent", "k": 0 }), false),
                }
            }
        })
    })?;
    print!("{}", json_line(&value));
    Ok(if found { 0 } else { 1 })
}

fn maxk_tree(args: &MaxkArgs) -> Outcome {
    let g = read_graph(&args.graph)?;
    let formula = tree_max_agents(&g)?;
    let stretch = if g.n() >= 2 { Some(stretch_metrics(&g)?) } else { None };
    let oracle = if args.oracle { Some(config_reachability_max_k(&g)?) } else { None };
    let agree = oracle.is_none_or(|o| o == formula);
    match args.format {
        ReportFormat::Text => {
            println!("formula: {formula}");
            if let Some(s) = stretch {
                let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
                println!("YY = {}, LY = {}, LL = {}", show(s.yy), show(s.ly), show(s.ll));
            }
            if let Some(o) = oracle {
                println!("oracle: {o}");
                println!("{}", if agree { "agree" } else { "DISAGREE" });
            }
        }
        ReportFormat::Json => {
            let v = json!({ "formula": formula, "stretch": stretch, "oracle": oracle, "agree": agree });
            print!("{}", json_line(&v));
        }
    }
    Ok(if agree { 0 } else { 1 })
}

fn verify_bounds(args: &VerifyArgs) -> Outcome {
    let caps = caps(args.force)?;
    let report = with_threads(args.threads, || tree_bound_sweep(args.max_n, &caps))?;
    match args.format {
        ReportFormat::Text => {
            println!(
                "trees: {}, instances: {} + {}, nodes expanded: {}",
                report.trees, report.instances[0], report.instances[1], report.nodes_expanded
            );
            for bound in [TreeBound::Ratio4, TreeBound::Ratio5Shortest] {
                println!("{} counterexamples to {}", report.count(bound), bound.label());
            }
            for c in &report.counterexamples {
                print!("{}: graph {}  agency {}", c.bound.label(), graph_to_json(&c.graph).trim_end(), c.agency.to_json());
            }
        }
        ReportFormat::Json => print!("{}", json_line(&report.to_json_value())),
    }
    Ok(if report.counterexamples.is_empty() { 0 } else { 1 })
}

fn render(args: &RenderArgs) -> Outcome {
    let g = read_graph(&args.graph)?;
    let a = args.agency.as_deref().map(read_agency).transpose()?;
    if let Some(a) = &a {
        if a.schedule().iter().flatten().any(|&v| v >= g.n()) {
            return Err(Failure::input("agency mentions nodes outside the graph"));
        }
        if args.t > a.horizon() {
            return Err(Failure::input(format!("--t {} exceeds the horizon {}", args.t, a.horizon())));
        }
    }
    let text = match args.format {
        RenderFormat::Dot => to_dot(&g, a.as_ref().map(|a| (a, args.t))),
        RenderFormat::Csv => match &a {
            Some(a) => occupancy_csv(&g, a),
            None => return Err(Failure::input("--format csv needs --agency")),
        },
    };
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Check(a) => check(a),
        Command::Strength(a) => strength_cmd(a),
        Command::Construct(a) => construct(a),
        Command::Solve(a) => solve(a),
        Command::MaxkTree(a) => maxk_tree(a),
        Command::VerifyBounds(a) => verify_bounds(a),
        Command::Render(a) => render(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
