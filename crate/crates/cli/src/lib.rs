//! The `satedge` command line.
//!
//! Machine-readable output goes to stdout and diagnostics to stderr. Exit
//! codes: 0 success, 1 a check failed, 2 usage or input error, 3 a search or
//! packing budget ran out.

pub mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{Config, OutputFormat};
use satedge_core::constructions::{
    blow_up_capped, h0_spec, h1_spec, h2_spec, trim_to_target, turan_graph, turan_number, Blowup, PartMap,
};
use satedge_core::formulas::{parse_rational, table, table_csv, BoundSet};
use satedge_core::graph::io::{edge_list_encode, graph6_encode, parse_graph};
use satedge_core::graph::{contains_clique, DEFAULT_VERTEX_CAP};
use satedge_core::packing::{
    best_r_star, certify_remainder_exhaustive, ell_split, max_packing_with, refine_packing, CliquePacking, PackingError,
    PackingOptions, DEFAULT_NODE_BUDGET,
};
use satedge_core::saturation::{count_saturating_with, CountOptions};
use satedge_core::search::{
    min_saturating, min_saturating_at_jump, min_saturating_constrained, SearchError, SearchOptions, SearchResult,
    DEFAULT_BUDGET,
};
use satedge_core::verify::{self, CheckReport, SuiteOptions};
use satedge_core::Graph;
use serde::Serialize;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "satedge", version, about = "Clique-saturating edges: constructions, counts, packings, search")]
struct Cli {
    /// Worker threads; 0 lets the pool decide. Falls back to the config
    /// file, then SATEDGE_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest graph order accepted on input or built.
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named graph and print it.
    Construct(ConstructArgs),
    /// Count K_p-saturating non-edges of a graph.
    Count(CountArgs),
    /// Maximum packing of vertex-disjoint K_p's.
    Pack(PackArgs),
    /// Exact minimum of the saturating count over small graphs.
    Search(SearchArgs),
    /// Closed-form constants and bounds.
    Formulas {
        #[command(subcommand)]
        command: FormulasCommand,
    },
    /// Run verification checks.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Turan,
    H0,
    H1,
    H2,
    Trim,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GraphOut {
    Graph6,
    Edgelist,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Json,
    Csv,
    Text,
}

impl From<OutputFormat> for Output {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Output::Json,
            OutputFormat::Csv => Output::Csv,
            OutputFormat::Text => Output::Text,
        }
    }
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Kind,
    /// Parameters as `key=value` (n, r, p, x, y, target), same as the flags.
    assignments: Vec<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Number of parts of a Turán graph.
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long)]
    y: Option<u64>,
    /// Edge count for `trim` (default ex(n, K_p) + 1).
    #[arg(long)]
    target: Option<u64>,
    #[arg(long, value_enum, default_value = "graph6")]
    format: GraphOut,
    /// Write the part map (JSON array of [start, end) ranges) here.
    #[arg(long)]
    parts: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Graph file (graph6 or edge list); `-` reads stdin.
    #[arg(long = "in", default_value = "-")]
    input: String,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Clique size K_p.
    #[arg(long)]
    p: usize,
    #[command(flatten)]
    input: InputArgs,
    /// Also list the pairs when there are at most this many.
    #[arg(long)]
    list_limit: Option<u64>,
    #[arg(long, value_enum)]
    output: Option<Output>,
}

#[derive(Args, Debug)]
struct PackArgs {
    /// Size of the packed cliques.
    #[arg(long)]
    p: usize,
    #[command(flatten)]
    input: InputArgs,
    /// Skip switch refinement of the remainder.
    #[arg(long)]
    no_refine: bool,
    /// Maximise the remainder over every maximum packing.
    #[arg(long)]
    exhaustive: bool,
    /// Node budget of the packing search.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    output: Option<Output>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SearchMode {
    /// f_p(n, e) with p the forbidden clique size.
    Min,
    /// f_{p+1}(n, ex(n, K_p) + 1).
    Jump,
    /// Minimum of f_{p+1} over ex(n, K_p)-edge graphs other than T_{p-1}(n).
    Constrained,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Edge count (mode `min` only).
    #[arg(long)]
    e: Option<usize>,
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum, default_value = "min")]
    mode: SearchMode,
    #[arg(long)]
    budget: Option<u64>,
    /// Include the minimising graphs (graph6) in the output.
    #[arg(long)]
    emit_witnesses: bool,
    #[arg(long, value_enum)]
    output: Option<Output>,
}

#[derive(Subcommand, Debug)]
enum FormulasCommand {
    /// CSV of the per-p constants.
    Table {
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
    },
    /// JSON of the bounds at one (n, p), optionally at a packing density r.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        /// Packing density as a fraction, e.g. 2/33.
        #[arg(long)]
        r: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    All,
    Constructions,
    Formulas,
    Packing,
    Reduction,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: Suite,
    /// Reduced ranges for routine runs.
    #[arg(long)]
    small: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Clique size for `packing` and `reduction` on an input graph.
    #[arg(long)]
    p: Option<usize>,
    /// Input graph for `packing` or `reduction`; without it the built-in
    /// instances are used.
    #[arg(long = "in")]
    input: Option<String>,
    /// Sampled switches per packing.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Include per-check wall time (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum)]
    output: Option<Output>,
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn budget(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_BUDGET, message: message.into() }
}

/// Settings after merging flags, config file and environment.
struct Settings {
    vertex_cap: usize,
    packing_budget: u64,
    search_budget: u64,
    format: Option<Output>,
    emit_witnesses: bool,
}

struct Io<'a> {
    stdin: &'a mut (dyn Read + Send),
    out: String,
    code: i32,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I, stdin: &mut (dyn Read + Send), stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut io = Io { stdin, out: String::new(), code: EXIT_OK };
    let result = setup(&cli).and_then(|(settings, threads)| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| usage(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(&cli.command, &settings, &mut io))
    });
    let _ = stdout.write_all(io.out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => io.code,
        Err(f) => {
            let _ = writeln!(stderr, "satedge: {}", f.message);
            f.code
        }
    }
}

fn setup(cli: &Cli) -> Result<(Settings, usize), Failure> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(usage)?,
        None => Config::default(),
    };
    let threads = match cli.threads.or(config.threads) {
        Some(t) => t,
        None => match std::env::var("SATEDGE_THREADS") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("SATEDGE_THREADS is not a thread count: {v:?}")))?,
            Err(_) => 0,
        },
    };
    let vertex_cap = cli.vertex_cap.or(config.vertex_cap).unwrap_or(DEFAULT_VERTEX_CAP);
    if vertex_cap == 0 {
        return Err(usage("--vertex-cap must be positive"));
    }
    Ok((
        Settings {
            vertex_cap,
            packing_budget: config.packing_budget.unwrap_or(DEFAULT_NODE_BUDGET),
            search_budget: config.search_budget.unwrap_or(DEFAULT_BUDGET),
            format: config.format.map(Output::from),
            emit_witnesses: config.emit_witnesses.unwrap_or(false),
        },
        threads,
    ))
}

fn dispatch(command: &Command, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    match command {
        Command::Construct(a) => construct(a, s, io),
        Command::Count(a) => count(a, s, io),
        Command::Pack(a) => pack(a, s, io),
        Command::Search(a) => search(a, s, io),
        Command::Formulas { command } => formulas(command, io),
        Command::Verify(a) => verify_cmd(a, s, io),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialise") + "\n"
}

fn read_graph(source: &str, s: &Settings, io: &mut Io) -> Result<Graph, Failure> {
    let text = if source == "-" {
        let mut t = String::new();
        io.stdin.read_to_string(&mut t).map_err(|e| usage(format!("stdin: {e}")))?;
        t
    } else {
        std::fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?
    };
    parse_graph(&text, s.vertex_cap).map_err(|e| usage(format!("input graph: {e}")))
}

// ---------------------------------------------------------------------------
// construct

/// Merges `key=value` assignments into the flag values.
fn construction_params(a: &ConstructArgs) -> Result<[Option<u64>; 6], Failure> {
    let mut v = [a.n, a.r, a.p, a.x, a.y, a.target];
    const NAMES: [&str; 6] = ["n", "r", "p", "x", "y", "target"];
    for item in &a.assignments {
        let (k, val) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("expected key=value, got {item:?}")))?;
        let i = NAMES
            .iter()
            .position(|&name| name == k)
            .ok_or_else(|| usage(format!("unknown construction parameter {k:?}")))?;
        let val: u64 = val.parse().map_err(|_| usage(format!("{k}: not a non-negative integer: {val:?}")))?;
        match v[i] {
            Some(old) if old != val => return Err(usage(format!("{k} given twice ({old} and {val})"))),
            _ => v[i] = Some(val),
        }
    }
    Ok(v)
}

fn construct(a: &ConstructArgs, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    let [n, r, p, x, y, target] = construction_params(a)?;
    let need = |v: Option<u64>, name: &str| v.ok_or_else(|| usage(format!("{:?} needs --{name}", a.kind)));
    let (graph, parts): (Graph, Option<PartMap>) = match a.kind {
        Kind::Turan => {
            let n = need(n, "n")? as usize;
            if n > s.vertex_cap {
                return Err(usage(format!("{n} vertices exceeds the vertex cap {}", s.vertex_cap)));
            }
            let g = turan_graph(n, need(r, "r")? as usize).map_err(|e| usage(e.to_string()))?;
            (g, None)
        }
        Kind::H0 | Kind::H1 | Kind::H2 | Kind::Trim => {
            let (p, x, y) = (need(p, "p")?, x.unwrap_or(1), y.unwrap_or(0));
            let spec = match a.kind {
                Kind::H0 => h0_spec(p, x),
                Kind::H1 => h1_spec(p, x, y),
                _ => h2_spec(p, x, y),
            }
            .map_err(|e| usage(e.to_string()))?;
            let Blowup { graph, parts, .. } = blow_up_capped(&spec, s.vertex_cap).map_err(|e| usage(e.to_string()))?;
            if a.kind == Kind::Trim {
                let goal = target.unwrap_or(turan_number(graph.order() as u64, p) + 1) as usize;
                let g = trim_to_target(&graph, &parts, goal, p).map_err(|e| Failure {
                    code: EXIT_CHECK_FAILED,
                    message: e.to_string(),
                })?;
                (g, Some(parts))
            } else {
                (graph, Some(parts))
            }
        }
    };
    if let Some(path) = &a.parts {
        let map = parts.unwrap_or_else(|| turan_part_map(&graph, r.unwrap_or(1) as usize));
        std::fs::write(path, json(&map)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    io.out.push_str(&match a.format {
        GraphOut::Graph6 => graph6_encode(&graph) + "\n",
        GraphOut::Edgelist => edge_list_encode(&graph),
    });
    Ok(())
}

fn turan_part_map(g: &Graph, r: usize) -> PartMap {
    let mut start = 0;
    let ranges = satedge_core::constructions::turan_part_sizes(g.order(), r)
        .into_iter()
        .map(|len| {
            start += len;
            start - len..start
        })
        .collect();
    PartMap { ranges }
}

// ---------------------------------------------------------------------------
// count, pack

fn count(a: &CountArgs, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    let g = read_graph(&a.input.input, s, io)?;
    let report = count_saturating_with(&g, a.p, CountOptions { list_limit: a.list_limit })
        .map_err(|e| usage(e.to_string()))?;
    match a.output.or(s.format).unwrap_or(Output::Json) {
        Output::Json => io.out.push_str(&json(&report)),
        Output::Text | Output::Csv => io.out.push_str(&format!("{}\n", report.total)),
    }
    Ok(())
}

#[derive(Serialize)]
struct PackOutput<'a> {
    #[serde(flatten)]
    packing: &'a CliquePacking,
    size: usize,
    density: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_star: Option<satedge_core::packing::RStar>,
}

fn packing_failure(e: PackingError) -> Failure {
    match e {
        PackingError::BudgetExceeded { .. } => budget(e.to_string()),
        _ => usage(e.to_string()),
    }
}

fn pack(a: &PackArgs, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    let g = read_graph(&a.input.input, s, io)?;
    let opts = PackingOptions { node_budget: a.budget.unwrap_or(s.packing_budget) };
    let mut packing = if a.exhaustive {
        certify_remainder_exhaustive(&g, a.p, opts)
    } else {
        max_packing_with(&g, a.p, opts)
    }
    .map_err(packing_failure)?;
    if !a.no_refine {
        packing = refine_packing(&g, &packing).map_err(packing_failure)?;
    }
    let free = contains_clique(&g, a.p + 1).is_none();
    let split = if free { ell_split(&g, &packing).ok() } else { None };
    let out = PackOutput {
        packing: &packing,
        size: packing.len(),
        density: packing.density().to_string(),
        ell1: split.map(|s| s.0),
        ell2: split.map(|s| s.1),
        r_star: best_r_star(&g, &packing).ok(),
    };
    match a.output.or(s.format).unwrap_or(Output::Json) {
        Output::Json => io.out.push_str(&json(&out)),
        Output::Text | Output::Csv => {
            for c in &packing.cliques {
                let line: Vec<String> = c.iter().map(usize::to_string).collect();
                io.out.push_str(&(line.join(" ") + "\n"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// search

#[derive(Serialize)]
struct SearchOutput<'a> {
    n: usize,
    e: usize,
    p: usize,
    minimum: Option<u64>,
    classes: u64,
    explored: u64,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<&'a [String]>,
}

fn search_output(r: &SearchResult, witnesses: bool) -> SearchOutput<'_> {
    SearchOutput {
        n: r.n,
        e: r.e,
        p: r.p,
        minimum: r.minimum,
        classes: r.classes,
        explored: r.explored,
        exact: r.exact,
        witnesses: witnesses.then_some(r.witnesses.as_slice()),
    }
}

fn search(a: &SearchArgs, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    let opts = SearchOptions { budget: a.budget.unwrap_or(s.search_budget) };
    let result = match a.mode {
        SearchMode::Min => {
            let e = a.e.ok_or_else(|| usage("mode min needs --e"))?;
            min_saturating(a.n, e, a.p, opts)
        }
        SearchMode::Jump => min_saturating_at_jump(a.n, a.p, opts),
        SearchMode::Constrained => min_saturating_constrained(a.n, a.p, opts),
    };
    let witnesses = a.emit_witnesses || s.emit_witnesses;
    let format = a.output.or(s.format).unwrap_or(Output::Json);
    match result {
        Ok(r) => {
            match format {
                Output::Json => io.out.push_str(&json(&search_output(&r, witnesses))),
                Output::Text | Output::Csv => {
                    let m = r.minimum.map_or("none".to_string(), |m| m.to_string());
                    io.out.push_str(&format!("{m}\n"));
                    if witnesses {
                        for w in &r.witnesses {
                            io.out.push_str(&format!("{w}\n"));
                        }
                    }
                }
            }
            Ok(())
        }
        Err(SearchError::BudgetExceeded { reason, partial }) => {
            if format == Output::Json {
                io.out.push_str(&json(&search_output(&partial, witnesses)));
            }
            Err(budget(reason))
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

// ---------------------------------------------------------------------------
// formulas

fn formulas(command: &FormulasCommand, io: &mut Io) -> Result<(), Failure> {
    match command {
        FormulasCommand::Table { p_min, p_max } => {
            if p_min > p_max {
                return Err(usage(format!("--p-min {p_min} exceeds --p-max {p_max}")));
            }
            let rows = table(*p_min, *p_max).map_err(|e| usage(e.to_string()))?;
            io.out.push_str(&table_csv(&rows));
        }
        FormulasCommand::Bounds { n, p, r } => {
            let set = BoundSet::new(*n, *p).map_err(|e| usage(e.to_string()))?;
            match r {
                None => io.out.push_str(&json(&set)),
                Some(text) => {
                    let r = parse_rational(text).ok_or_else(|| usage(format!("--r: not a fraction: {text:?}")))?;
                    let at = set.at(&r).map_err(|e| usage(e.to_string()))?;
                    #[derive(Serialize)]
                    struct Both<'a> {
                        #[serde(flatten)]
                        set: &'a BoundSet,
                        at: satedge_core::formulas::DensityBounds,
                    }
                    io.out.push_str(&json(&Both { set: &set, at }));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

fn verify_cmd(a: &VerifyArgs, s: &Settings, io: &mut Io) -> Result<(), Failure> {
    let packing = PackingOptions { node_budget: s.packing_budget };
    let input = match &a.input {
        Some(src) => Some(read_graph(src, s, io)?),
        None => None,
    };
    if input.is_some() && !matches!(a.suite, Suite::Packing | Suite::Reduction) {
        return Err(usage("--in applies to the packing and reduction suites only"));
    }
    let p_max = if a.small { 100 } else { 10_000 };
    let mut reports: Vec<CheckReport> = match a.suite {
        Suite::All => verify::verify_all(SuiteOptions { small: a.small, seed: a.seed, packing }),
        Suite::Constructions => {
            let xs: &[u64] = if a.small { &[1] } else { &[1, 2] };
            verify::verify_constructions(&[3, 4, 5], xs, &[0, 1, 2])
        }
        Suite::Formulas => verify::verify_formulas(p_max, 50, &[1, 2, 66, 1000, 1_000_000]),
        Suite::Packing => match &input {
            Some(g) => {
                let p = a.p.ok_or_else(|| usage("--in needs --p"))?;
                verify::verify_packing_identities(g, p, a.trials, a.seed, "input", packing)
            }
            None => {
                let g = satedge_core::constructions::h1(3, 1, 0).map_err(|e| usage(e.to_string()))?.graph;
                verify::verify_packing_identities(&g, 3, a.trials, a.seed, "h1(3,1,0)", packing)
            }
        },
        Suite::Reduction => match &input {
            Some(g) => {
                let p = a.p.ok_or_else(|| usage("--in needs --p"))?;
                vec![verify::verify_reduction(p, g).map_err(|e| usage(e.to_string()))?]
            }
            None => verify::reduction_suite(),
        },
    };
    verify::sort_reports(&mut reports);
    if !a.timings {
        for r in &mut reports {
            r.elapsed_ms = None;
        }
    }
    match a.output.or(s.format).unwrap_or(Output::Json) {
        Output::Json => {
            io.out.push_str(&serde_json::to_string_pretty(&reports).expect("reports serialise"));
            io.out.push('\n');
        }
        Output::Csv => io.out.push_str(&reports_csv(&reports, a.timings)),
        Output::Text => {
            for r in &reports {
                io.out.push_str(&report_line(r));
            }
        }
    }
    let summary = verify::summarize(&reports);
    if matches!(a.output.or(s.format), Some(Output::Text)) {
        io.out.push_str(&format!(
            "{} passed, {} failed, {} informational failures, {} skipped\n",
            summary.pass, summary.fail, summary.informational_fail, summary.skipped
        ));
    }
    if verify::has_failures(&reports) {
        io.code = EXIT_CHECK_FAILED;
    }
    Ok(())
}

fn params_field(r: &CheckReport) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn reports_csv(reports: &[CheckReport], timings: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id", "status", "informational", "relation", "lhs", "rhs", "params", "reason"];
    if timings {
        header.push("elapsed_ms");
    }
    w.write_record(&header).expect("in-memory write");
    for r in reports {
        let mut row = vec![
            r.id.clone(),
            format!("{:?}", r.status).to_lowercase(),
            r.informational.to_string(),
            r.relation.symbol().to_string(),
            r.lhs.clone(),
            r.rhs.clone(),
            params_field(r),
            r.reason.clone().unwrap_or_default(),
        ];
        if timings {
            row.push(r.elapsed_ms.map_or(String::new(), |t| format!("{t:.3}")));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn report_line(r: &CheckReport) -> String {
    let status = format!("{:?}", r.status).to_uppercase();
    let flag = if r.informational { " (informational)" } else { "" };
    let mut line = format!("{status:7} {} [{}]", r.id, params_field(r));
    if !r.lhs.is_empty() || !r.rhs.is_empty() {
        line.push_str(&format!(" {} {} {}", r.lhs, r.relation.symbol(), r.rhs));
    }
    line.push_str(flag);
    if let Some(reason) = &r.reason {
        line.push_str(&format!(" -- {reason}"));
    }
    line + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("satedge").chain(args.iter().copied());
        let code = run(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn construct_assignments_match_flags() {
        let a = call(&["construct", "h1", "p=3", "x=1", "y=2"], "");
        let b = call(&["construct", "h1", "--p", "3", "--x", "1", "--y", "2"], "");
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let conflict = call(&["construct", "h1", "--p", "3", "p=4"], "");
        assert_eq!(conflict.0, EXIT_USAGE);
        assert_eq!(call(&["construct", "h1", "q=3"], "").0, EXIT_USAGE);
    }

    #[test]
    fn count_reads_stdin_in_both_formats() {
        let (code, out, _) = call(&["count", "--p", "3"], "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
        assert_eq!(code, 0);
        assert_eq!(out, "{\"p\":3,\"n\":5,\"total\":5}\n");
        let (_, out, _) = call(&["count", "--p", "3", "--output", "text"], "Dhc\n");
        assert_eq!(out, "5\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"], "").0, EXIT_USAGE);
        assert_eq!(call(&["count"], "").0, EXIT_USAGE);
        assert_eq!(call(&["count", "--p", "3"], "not a graph ~~~\n").0, EXIT_USAGE);
        assert_eq!(call(&["search", "--n", "5", "--p", "3"], "").0, EXIT_USAGE);
        assert_eq!(call(&["--help"], "").0, EXIT_OK);
    }

    #[test]
    fn search_budget_exits_three_with_partial_output() {
        let (code, out, err) = call(&["search", "--n", "8", "--e", "16", "--p", "4", "--budget", "10"], "");
        assert_eq!(code, EXIT_BUDGET);
        assert!(out.contains("\"exact\":false"));
        assert!(err.contains("budget"));
    }

    #[test]
    fn formulas_table_has_main_term() {
        let (code, out, _) = call(&["formulas", "table", "--p-max", "10"], "");
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().starts_with("3,2/33,"));
        assert_eq!(out.lines().count(), 9);
    }

    #[test]
    fn report_formats() {
        let (code, csv_out, _) = call(&["verify", "formulas", "--small", "--output", "csv"], "");
        assert_eq!(code, 0);
        assert!(csv_out.starts_with("id,status,informational,relation,lhs,rhs,params,reason\n"));
        let (_, text, _) = call(&["verify", "formulas", "--small", "--output", "text"], "");
        assert!(text.contains("PASS    formulas.margin_f_at_3 [p=3] 7/10 == 7/10"));
        assert!(text.ends_with("0 failed, 0 informational failures, 0 skipped\n"));
    }
}
