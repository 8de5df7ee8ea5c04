//! Command-line front end: construct, verify, and census
//! distinguishing 2-edge-colourings of connected regular graphs.
//!
//! Exit codes: 0 success, 2 exception graph (no 2-colouring exists),
//! 1 any other failure. Machine output (`--json`) carries no
//! timestamps; identical invocations produce byte-identical output.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use disticolor::colouring::EdgeColouring;
use disticolor::engine::{
    self, distinguishing_two_colouring_with, EngineConfig, EngineError, Method,
};
use disticolor::families::{self, Family, FamilySpec};
use disticolor::graph::Graph;
use disticolor::graph6::{parse_graph6, write_graph6};
use disticolor::oracle::{self, OracleError};
use disticolor::symmetry::{nontrivial_colour_preserver, DEFAULT_AUT_CAP};

const ENV_AUT_CAP: &str = "DISTICOLOR_AUT_CAP";

#[derive(Parser)]
#[command(
    name = "disticolor",
    about = "Distinguishing 2-edge-colourings of connected regular graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a verified distinguishing 2-colouring.
    Colour(ColourArgs),
    /// Check a colouring file against its graph.
    Verify(VerifyArgs),
    /// Compute the distinguishing index by exhaustive search.
    Dindex(DindexArgs),
    /// Generate a named family member as graph6.
    Gen(GenArgs),
    /// Census of all connected regular graphs up to a vertex count.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct GraphInput {
    /// File containing one graph6 line.
    #[arg(long, value_name = "FILE", conflicts_with = "g6")]
    r#in: Option<String>,
    /// Inline graph6 string.
    #[arg(long, value_name = "STRING")]
    g6: Option<String>,
}

#[derive(Args)]
struct ColourArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Root vertex tried first by the orbit procedure.
    #[arg(long)]
    root: Option<usize>,
    /// Bound on explicitly enumerated automorphism groups.
    #[arg(long)]
    aut_cap: Option<usize>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the colouring file here.
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// File containing one graph6 line.
    #[arg(long, value_name = "FILE")]
    r#in: String,
    /// Colouring file to check.
    #[arg(long, value_name = "FILE")]
    colouring: String,
}

#[derive(Args)]
struct DindexArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Largest number of colours to try.
    #[arg(long, default_value_t = 6)]
    max_k: usize,
    /// Search node budget.
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Family: complete, complete-bipartite, cycle, circulant,
    /// petersen, hypercube, prism, random-regular.
    family: String,
    /// Family parameters (circulant: n followed by the offsets).
    params: Vec<usize>,
    /// Seed for random-regular.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Largest vertex count, 3..=10.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Emit the census as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    aut_cap: Option<usize>,
    /// Search node budget per graph.
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(1, format!("I/O: {e}"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Colour(args) => cmd_colour(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Dindex(args) => cmd_dindex(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Corpus(args) => cmd_corpus(args),
    }
}

fn aut_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(ENV_AUT_CAP)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_AUT_CAP)
}

fn load_graph(input: &GraphInput) -> Result<Graph, Failure> {
    let text = match (&input.r#in, &input.g6) {
        (Some(path), None) => fs::read_to_string(path)
            .map_err(|e| Failure::new(1, format!("cannot read {path}: {e}")))?,
        (None, Some(g6)) => g6.clone(),
        _ => return Err(Failure::new(1, "provide exactly one of --in or --g6")),
    };
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Failure::new(1, "no graph6 line in the input"))?;
    parse_graph6(line.trim()).map_err(|e| Failure::new(1, format!("graph6: {e}")))
}

#[derive(Serialize)]
struct ColourDocument<'a> {
    graph6: String,
    n: usize,
    degree: Option<usize>,
    #[serde(flatten)]
    report: &'a engine::ColouringReport,
    colouring_file: String,
}

fn cmd_colour(args: ColourArgs) -> Result<(), Failure> {
    let g = load_graph(&args.input)?;
    let config = EngineConfig {
        aut_cap: aut_cap(args.aut_cap),
        preferred_root: args.root,
        ..EngineConfig::default()
    };
    let report = distinguishing_two_colouring_with(&g, &config).map_err(|e| match e {
        EngineError::Exception(name) => Failure::new(
            2,
            format!("exception graph {name}: no distinguishing 2-colouring exists"),
        ),
        other => Failure::new(1, other.to_string()),
    })?;
    let file = report.colouring.to_file_string(&g);
    if let Some(path) = &args.out {
        fs::write(path, &file)?;
    }
    if args.json {
        let doc = ColourDocument {
            graph6: write_graph6(&g),
            n: g.n(),
            degree: g.regular_degree(),
            report: &report,
            colouring_file: file,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("report serializes")
        );
    } else {
        print!("{}", report.to_text(&g));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let graph_text = fs::read_to_string(&args.r#in)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", args.r#in)))?;
    let line = graph_text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Failure::new(1, "no graph6 line in the input"))?;
    let g = parse_graph6(line.trim()).map_err(|e| Failure::new(1, format!("graph6: {e}")))?;

    let colouring_text = fs::read_to_string(&args.colouring)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", args.colouring)))?;
    let (host, colouring) = EdgeColouring::from_file_string(&colouring_text)
        .map_err(|e| Failure::new(1, format!("colouring file: {e}")))?;
    if host != g {
        return Err(Failure::new(1, "colouring is for a different graph"));
    }
    match nontrivial_colour_preserver(&g, &colouring) {
        None => {
            println!("distinguishing");
            Ok(())
        }
        Some(witness) => Err(Failure::new(
            1,
            format!("not distinguishing: preserved by {}", witness.cycle_string()),
        )),
    }
}

fn cmd_dindex(args: DindexArgs) -> Result<(), Failure> {
    let g = load_graph(&args.input)?;
    if !g.is_connected() {
        return Err(Failure::new(1, "graph is not connected"));
    }
    match oracle::distinguishing_index(&g, args.max_k, args.budget) {
        Ok(k) => {
            println!("{k}");
            Ok(())
        }
        Err(OracleError::UndefinedForK2) => {
            Err(Failure::new(1, "distinguishing index undefined for K2"))
        }
        Err(e) => Err(Failure::new(1, e.to_string())),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let family = match args.family.as_str() {
        "complete" => Family::Complete,
        "complete-bipartite" | "complete_bipartite" => Family::CompleteBipartite,
        "cycle" => Family::Cycle,
        "circulant" => Family::Circulant,
        "petersen" => Family::Petersen,
        "hypercube" => Family::Hypercube,
        "prism" => Family::Prism,
        "random-regular" | "random_regular" => Family::RandomRegular,
        other => return Err(Failure::new(1, format!("unknown family {other:?}"))),
    };
    let spec = FamilySpec { family, params: args.params, seed: args.seed };
    let g = families::generate(&spec).map_err(|e| Failure::new(1, e.to_string()))?;
    println!("{}", write_graph6(&g));
    Ok(())
}

#[derive(Serialize)]
struct CorpusRow {
    graph6: String,
    n: usize,
    degree: usize,
    method: String,
    two_colourable: String,
    verified: bool,
}

#[derive(Serialize)]
struct CorpusDocument {
    max_n: usize,
    rows: Vec<CorpusRow>,
    exceptions: Vec<String>,
    fallbacks: usize,
}

fn cmd_corpus(args: CorpusArgs) -> Result<(), Failure> {
    if !(3..=10).contains(&args.max_n) {
        return Err(Failure::new(1, "corpus supports --max-n 3..=10"));
    }
    let cap = aut_cap(args.aut_cap);
    let config = EngineConfig {
        aut_cap: cap,
        search_budget: args.budget,
        ..EngineConfig::default()
    };
    let mut rows = Vec::new();
    let mut exceptions = Vec::new();
    let mut fallbacks = 0usize;
    for g in oracle::regular_corpus(args.max_n) {
        if g.n() < 3 {
            continue;
        }
        let g6 = write_graph6(&g);
        let degree = g.regular_degree().expect("corpus graphs are regular");
        let engine_result = distinguishing_two_colouring_with(&g, &config);
        let two_colourable =
            match oracle::find_distinguishing_colouring_capped(&g, 2, args.budget, cap) {
                Ok(Some(_)) => "yes",
                Ok(None) => "no",
                Err(OracleError::BudgetExceeded { .. }) => "budget-exceeded",
                Err(OracleError::Symmetry(_)) => "group-too-large",
                Err(e) => return Err(Failure::new(1, e.to_string())),
            };
        let (method, verified) = match &engine_result {
            Ok(report) => {
                if report.method == Method::SearchFallback {
                    fallbacks += 1;
                }
                let independently_ok =
                    nontrivial_colour_preserver(&g, &report.colouring).is_none();
                (report.method.to_string(), independently_ok)
            }
            Err(EngineError::Exception(_)) => {
                exceptions.push(g6.clone());
                ("exception".to_string(), two_colourable == "no")
            }
            Err(e) => (format!("error({e})"), false),
        };
        rows.push(CorpusRow {
            graph6: g6,
            n: g.n(),
            degree,
            method,
            two_colourable: two_colourable.to_string(),
            verified,
        });
    }
    let doc = CorpusDocument { max_n: args.max_n, rows, exceptions, fallbacks };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("census serializes")
        );
    } else {
        for row in &doc.rows {
            println!(
                "{} n={} d={} method={} d2={} verified={}",
                row.graph6, row.n, row.degree, row.method, row.two_colourable, row.verified
            );
        }
        println!("graphs: {}", doc.rows.len());
        println!("exceptions: {}", doc.exceptions.join(" "));
        println!("fallbacks: {}", doc.fallbacks);
    }
    Ok(())
}
