//! Command-line interface.
//!
//! Exit status: 0 on success, 1 for usage and parse errors, 2 when an
//! operation does not apply to its input, 3 when an internal check fails,
//! and 4 when `search` or `filter` find no matching graph.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codec::{self, CodeError};
use crate::families::{self, FamilyError, FamilyId};
use crate::graph::{gnp, Graph};
use crate::graph6;
use crate::refine::{self, RefineError};
use crate::search::{self, SearchConstraints};

#[derive(Debug, Parser)]
#[command(name = "longref", version, about = "Colour Refinement iteration counts and long-refinement graphs")]
pub struct Cli {
    /// Worker threads for the search (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Print extra statistics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run Colour Refinement on a graph.
    Refine(RefineArgs),
    /// Build, decode, or measure code strings.
    #[command(subcommand)]
    Code(CodeCommand),
    /// List or generate members of the code families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Build a verified slow-refining graph of a given order.
    Witness(WitnessArgs),
    /// Exhaustively generate graphs of one order.
    Search(SearchArgs),
    /// Keep the long-refinement graphs of a graph6 stream.
    Filter(FilterArgs),
    /// Time the refinement engines on seeded random graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    G6,
    Dot,
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// graph6 text, a file of graph6 text, or "-" for stdin.
    #[arg(conflicts_with = "code")]
    pub input: Option<String>,
    /// Build the input graph from a code string instead.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value = "split")]
    pub engine: String,
    /// List every round's partition.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TraceFormat,
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Print the graph of a code.
    Build {
        code: String,
        #[arg(long, value_enum, default_value = "g6")]
        format: GraphFormat,
        /// Shorthand for `--format g6`.
        #[arg(long)]
        g6: bool,
    },
    /// Recover the code of a graph (graph6 text, file, or "-").
    Decode { input: String },
    /// Print the order of a code's graph.
    Order { code: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Show the catalogue with orders and verified iteration counts.
    List {
        #[arg(long, default_value_t = 2)]
        max_k: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
    },
    /// Print one family member.
    Gen {
        family: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
        /// Print the order instead of the code.
        #[arg(long)]
        order: bool,
        /// Print the graph instead of the code.
        #[arg(long, value_enum)]
        format: Option<GraphFormat>,
    },
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    pub n: usize,
    #[arg(long, value_enum)]
    pub format: Option<GraphFormat>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub connected: bool,
    /// Exact set of distinct degrees, e.g. "2,3".
    #[arg(long, value_delimiter = ',')]
    pub degrees: Option<Vec<usize>>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Apply the degree bound while generating.
    #[arg(long)]
    pub prune: bool,
    /// Keep only long-refinement graphs.
    #[arg(long)]
    pub long_refinement: bool,
    /// Print the sorted canonical graph6 forms of the matches.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// graph6 stream file, or "-" for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Stop at the first malformed line.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 200)]
    pub order: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub status: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            status: 1,
            message: message.into(),
        }
    }

    fn not_applicable(message: impl Into<String>) -> Self {
        CliError {
            status: 2,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        CliError {
            status: 3,
            message: message.into(),
        }
    }

    fn no_match(message: impl Into<String>) -> Self {
        CliError {
            status: 4,
            message: message.into(),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::NotRealizable(_) | CodeError::NotEncodable(_) => CliError::not_applicable(e.to_string()),
            CodeError::StructureError(_) => CliError::internal(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Code(inner) => inner.into(),
            FamilyError::NotApplicable(_) => CliError::not_applicable(e.to_string()),
            FamilyError::VerificationFailed(_) => CliError::internal(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<RefineError> for CliError {
    fn from(e: RefineError) -> Self {
        CliError::usage(e.to_string())
    }
}

fn read_source(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| CliError::usage(format!("cannot read {input}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

/// First graph of a graph6 source.
fn read_graph(input: &str) -> Result<Graph, CliError> {
    let text = read_source(input)?;
    let first = graph6::decode_lines(&text).next();
    match first {
        Some((_, Ok(g))) => Ok(g),
        Some((line, Err(e))) => Err(CliError::usage(format!("line {line}: {e}"))),
        None => Err(CliError::usage("no graph in input")),
    }
}

fn render_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::G6 => graph6::encode_string(g) + "\n",
        GraphFormat::Dot => g.to_dot(None),
        GraphFormat::Edges => {
            let mut out = format!("{} {}\n", g.order(), g.size());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
            out
        }
    }
}

fn refine_cmd(args: &RefineArgs) -> Result<String, CliError> {
    let engine = refine::engine(&args.engine)?;
    let g = match (&args.code, &args.input) {
        (Some(code), _) => codec::build_graph(&codec::parse_code(code)?)?,
        (None, Some(input)) => read_graph(input)?,
        (None, None) => return Err(CliError::usage("no input graph; pass graph6, a file, '-', or --code")),
    };
    let trace = refine::run_with(engine, &g, None)?;
    let mut out = String::new();
    match args.format {
        TraceFormat::Json => {
            out = serde_json::to_string_pretty(&trace.to_document()).expect("trace serialises");
            out.push('\n');
        }
        TraceFormat::Dot => {
            for (i, p) in trace.rounds().iter().enumerate() {
                let _ = writeln!(out, "// round {i}");
                out.push_str(&g.to_dot(Some(p)));
            }
        }
        TraceFormat::Text => {
            let _ = writeln!(out, "n={}", g.order());
            let _ = writeln!(out, "wl1={}", trace.wl1());
            let counts: Vec<String> = trace.class_counts().iter().map(usize::to_string).collect();
            let _ = writeln!(out, "classes={}", counts.join(","));
            if args.trace {
                for (i, p) in trace.rounds().iter().enumerate() {
                    let classes: Vec<String> = p
                        .classes()
                        .iter()
                        .map(|c| {
                            let vs: Vec<String> = c.iter().map(usize::to_string).collect();
                            format!("{{{}}}", vs.join(","))
                        })
                        .collect();
                    let _ = writeln!(out, "round {i}: {}", classes.join(" "));
                }
            }
        }
    }
    Ok(out)
}

fn code_cmd(cmd: &CodeCommand) -> Result<String, CliError> {
    match cmd {
        CodeCommand::Build { code, format, g6 } => {
            let g = codec::build_graph(&codec::parse_code(code)?)?;
            let format = if *g6 { GraphFormat::G6 } else { *format };
            Ok(render_graph(&g, format))
        }
        CodeCommand::Decode { input } => {
            let g = read_graph(input)?;
            Ok(format!("{}\n", codec::decode_graph(&g)?))
        }
        CodeCommand::Order { code } => Ok(format!("{}\n", codec::code_order(&codec::parse_code(code)?))),
    }
}

fn family_cmd(cmd: &FamilyCommand) -> Result<String, CliError> {
    match cmd {
        FamilyCommand::List { max_k, format } => {
            let rows = families::catalogue(*max_k)?;
            if *format == ListFormat::Csv {
                return Ok(families::catalogue_csv(&rows));
            }
            let mut out = String::new();
            for family in FamilyId::ALL {
                let _ = writeln!(out, "{family}  {}", family.pattern());
                for row in rows.iter().filter(|r| r.family == family) {
                    let _ = writeln!(
                        out,
                        "  k={:<3} order={:<4} wl1={:<4} {}",
                        row.k, row.order, row.achieved, row.code
                    );
                }
            }
            Ok(out)
        }
        FamilyCommand::Gen {
            family,
            k,
            order,
            format,
        } => {
            let family: FamilyId = family.parse()?;
            let code = families::family_member(family, *k)?;
            if *order {
                return Ok(format!("{}\n", code.order()));
            }
            match format {
                Some(f) => Ok(render_graph(&codec::build_graph(&code)?, *f)),
                None => Ok(format!("{code}\n")),
            }
        }
    }
}

fn witness_cmd(args: &WitnessArgs) -> Result<String, CliError> {
    let w = families::witness(args.n)?;
    if let Some(format) = args.format {
        return Ok(render_graph(&w.graph, format));
    }
    Ok(format!(
        "order={} achieved={}\nprovenance={}\n{}\n",
        w.order,
        w.achieved,
        w.provenance,
        graph6::encode_string(&w.graph)
    ))
}

fn search_cmd(args: &SearchArgs, verbose: bool) -> Result<String, CliError> {
    let mut c = SearchConstraints {
        degree_set: args.degrees.clone(),
        max_degree: args.max_degree,
        prune_degrees: args.prune,
        ..SearchConstraints::all(args.order)
    };
    c.connected = args.connected;
    c.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let (count, graphs, stats) = if args.long_refinement {
        let r = search::count_long_refinement(args.order, &c).map_err(|e| CliError::usage(e.to_string()))?;
        (r.count as u64, r.graphs, r.stats)
    } else if args.list {
        let found = std::sync::Mutex::new(Vec::new());
        let stats = search::enumerate(&c, |g| {
            let code = search::canonical_code(&g.to_graph()).to_string();
            found.lock().expect("lock is not poisoned").push(code);
        })
        .map_err(|e| CliError::usage(e.to_string()))?;
        let mut graphs = found.into_inner().expect("lock is not poisoned");
        graphs.sort();
        (stats.emitted, graphs, stats)
    } else {
        let stats = search::enumerate(&c, |_| {}).map_err(|e| CliError::usage(e.to_string()))?;
        (stats.emitted, Vec::new(), stats)
    };
    if verbose {
        eprintln!(
            "levels={:?} final-candidates={}",
            stats.nodes_per_level, stats.candidates
        );
    }
    let mut out = format!("order={} count={count}\n", args.order);
    if args.list {
        for g in graphs {
            out.push_str(&g);
            out.push('\n');
        }
    }
    if count == 0 {
        print!("{out}");
        return Err(CliError::no_match("no graph matches"));
    }
    Ok(out)
}

fn filter_cmd(args: &FilterArgs) -> Result<String, CliError> {
    let text = if args.input == "-" || Path::new(&args.input).is_file() {
        read_source(&args.input)?
    } else {
        return Err(CliError::usage(format!("no such file: {}", args.input)));
    };
    let report = search::filter_stream(&text, args.strict).map_err(|e| CliError::usage(e.to_string()))?;
    for (line, error) in &report.errors {
        eprintln!("line {line}: {error}");
    }
    eprintln!("scanned={} matched={}", report.scanned, report.matched.len());
    for (degrees, count) in &report.degree_histogram {
        eprintln!("  degrees {degrees}: {count}");
    }
    let mut out = String::new();
    for line in &report.matched {
        out.push_str(line);
        out.push('\n');
    }
    if report.matched.is_empty() {
        return Err(CliError::no_match("no long-refinement graph in the stream"));
    }
    Ok(out)
}

fn bench_cmd(args: &BenchArgs) -> Result<String, CliError> {
    if !(0.0..=1.0).contains(&args.density) {
        return Err(CliError::usage("density must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let graphs: Vec<Graph> = (0..args.samples).map(|_| gnp(args.order, args.density, &mut rng)).collect();
    let mut out = format!(
        "samples={} order={} density={} seed={}\n",
        args.samples, args.order, args.density, args.seed
    );
    let mut reference: Option<Vec<usize>> = None;
    for engine in refine::engines() {
        let start = Instant::now();
        let iterations: Vec<usize> = graphs
            .iter()
            .map(|g| refine::wl1_iterations_with(*engine, g))
            .collect::<Result<_, _>>()?;
        let elapsed = start.elapsed();
        let total: usize = iterations.iter().sum();
        let _ = writeln!(
            out,
            "{:<6} {:>10.3} ms  mean wl1={:.3}",
            engine.name(),
            elapsed.as_secs_f64() * 1e3,
            total as f64 / graphs.len().max(1) as f64
        );
        match &reference {
            Some(r) if *r != iterations => {
                return Err(CliError::internal(format!("engine {} disagrees on iteration counts", engine.name())))
            }
            Some(_) => {}
            None => reference = Some(iterations),
        }
    }
    Ok(out)
}

/// Executes a parsed command line and returns the text for stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be positive"));
        }
        // A second call in the same process keeps the existing pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match &cli.command {
        Command::Refine(args) => refine_cmd(args),
        Command::Code(cmd) => code_cmd(cmd),
        Command::Family(cmd) => family_cmd(cmd),
        Command::Witness(args) => witness_cmd(args),
        Command::Search(args) => search_cmd(args, cli.verbose),
        Command::Filter(args) => filter_cmd(args),
        Command::Bench(args) => bench_cmd(args),
    }
}

/// Parses `std::env::args`, runs the command, and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.status
        }
    }
}
