//! `mposr`: verification suite, searches, automorphism groups and exports.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mposr_core::autgroup::{AutError, AutOptions, AutSolver, DEFAULT_NODE_BUDGET};
use mposr_core::catalog::{self, Classification, SuiteBudget, Tier, WitnessOrigin};
use mposr_core::io::{export, parse_edgelist, to_dot, to_edgelist, ExportFormat};
use mposr_core::search::{
    exists_antisymmetric_kregular_with, exists_mposr_with, Kind, Progress, Reduction, SearchOptions, SearchOutcome,
    SearchStatus, Witness,
};
use mposr_core::{build_cayley, named_group, validate_sets, ConnectionSets, Digraph, GroupSpec, GroupTable};

const EXIT_CLAIM_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "mposr", version)]
#[command(about = "m-partite oriented semiregular representations of valency 3: verify, search, export")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
    Dot,
    Edgelist,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the claim-verification suite.
    Verify {
        /// Suite tier; falls back to $MPOSR_TIER, then `default`.
        #[arg(long, env = "MPOSR_TIER", default_value = "default")]
        tier: Tier,
        #[arg(long, value_enum, default_value = "table")]
        output: Output,
        /// Include per-claim wall-clock times.
        #[arg(long)]
        timings: bool,
        /// Per-claim cap on exhaustive-search candidates.
        #[arg(long)]
        max_candidates: Option<u64>,
        /// Cap for searches confirming claims without a listed witness.
        #[arg(long, default_value_t = 1_000_000)]
        confirm_candidates: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Exhaustive search for an m-POSR / m-PDR, or for an antisymmetric regular digraph.
    Search(SearchArgs),
    /// Automorphism group of a digraph in edge-list format.
    Aut {
        /// Edge-list file, or `-` for standard input.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
        /// Print one line per search node to standard error.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Emit an m-Cayley digraph, or one of the fixed digraphs.
    Build {
        #[arg(long, required_unless_present = "fixed")]
        group: Option<GroupSpec>,
        #[arg(long, required_unless_present = "fixed")]
        m: Option<usize>,
        /// Connection sets as JSON `{"m": .., "sets": [[[word, ..], ..], ..]}`; found automatically if absent.
        #[arg(long, conflicts_with = "fixed")]
        sets: Option<PathBuf>,
        #[arg(long, default_value = "posr")]
        kind: Kind,
        /// One of fig1_9, fig1_10, gamma7, gamma8.
        #[arg(long)]
        fixed: Option<String>,
        #[arg(long, value_enum, default_value = "edgelist")]
        output: Output,
    },
    /// Existence verdict from the classification table.
    Classify {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "posr")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "table")]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, required_unless_present = "antisymmetric")]
    group: Option<GroupSpec>,
    /// Number of parts.
    #[arg(long, required_unless_present = "antisymmetric")]
    m: Option<usize>,
    #[arg(long, default_value = "posr")]
    kind: Kind,
    #[arg(long, default_value_t = 3)]
    valency: usize,
    /// Search k-regular digraphs with trivial automorphism group instead.
    #[arg(long, conflicts_with_all = ["group", "m"])]
    antisymmetric: bool,
    /// Vertex count for --antisymmetric.
    #[arg(long, requires = "antisymmetric")]
    order: Option<usize>,
    /// Allow digons in the antisymmetric search.
    #[arg(long, requires = "antisymmetric")]
    digons: bool,
    /// Start at this enumeration index.
    #[arg(long, default_value_t = 0)]
    cursor: u64,
    /// Stop after this many candidates (exit 3, resumable from `next_cursor`).
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Print a JSON progress line to standard error every N candidates.
    #[arg(long)]
    progress_every: Option<u64>,
    /// Quotient the m = 2 space by automorphisms of G and translations.
    #[arg(long, conflicts_with = "antisymmetric")]
    reduce: bool,
    /// Exit 1 if the outcome disagrees: `none` expects exhaustion, `witness` a witness.
    #[arg(long, value_parser = ["none", "witness"])]
    expect: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn require(output: Output, allowed: &[Output], command: &str) -> Result<()> {
    if !allowed.contains(&output) {
        let name = output.to_possible_value().expect("no skipped variants");
        bail!("`{command}` does not support --output {}", name.get_name());
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Verify {
            tier,
            output,
            timings,
            max_candidates,
            confirm_candidates,
            node_budget,
        } => {
            require(output, &[Output::Json, Output::Table], "verify")?;
            let budget = SuiteBudget {
                tier,
                max_candidates,
                confirm_candidates,
                aut: AutOptions {
                    node_budget,
                    trace: false,
                },
            };
            let report = catalog::verify_all(&budget);
            match output {
                Output::Json => print_json(&report.to_json(timings)),
                _ => print!("{}", report.to_table(timings)),
            }
            Ok(if report.is_success() { 0 } else { EXIT_CLAIM_FAILURE })
        }
        Command::Search(args) => search(args),
        Command::Aut {
            input,
            output,
            trace,
            node_budget,
        } => {
            require(output, &[Output::Json, Output::Table], "aut")?;
            let d = read_digraph(&input)?;
            let mut solver = AutSolver::new(&d, AutOptions { node_budget, trace });
            let result = solver.automorphism_group();
            for line in solver.trace_lines() {
                eprintln!("{line}");
            }
            let result = match result {
                Ok(r) => r,
                Err(AutError::BudgetExceeded(nodes)) => {
                    eprintln!("node budget exhausted after {nodes} nodes");
                    return Ok(EXIT_BUDGET);
                }
                Err(e) => return Err(e.into()),
            };
            match output {
                Output::Json => print_json(&serde_json::to_value(&result)?),
                _ => {
                    println!("order {}", result.order);
                    for g in &result.generators {
                        println!("generator {g}");
                    }
                }
            }
            Ok(0)
        }
        Command::Build {
            group,
            m,
            sets,
            kind,
            fixed,
            output,
        } => {
            require(output, &[Output::Json, Output::Dot, Output::Edgelist], "build")?;
            let d = match fixed {
                Some(name) => {
                    catalog::fixed_digraph(&name)
                        .with_context(|| format!("unknown fixed digraph {name:?}"))?
                        .digraph
                }
                None => {
                    let (group, m) = (group.expect("required by clap"), m.expect("required by clap"));
                    build(&group, m, sets, kind)?
                }
            };
            print!("{}", render(&d, output));
            Ok(0)
        }
        Command::Classify {
            group,
            m,
            kind,
            output,
        } => {
            require(output, &[Output::Json, Output::Table], "classify")?;
            let Classification { verdict, rule } = catalog::classify(&group, m, kind)?;
            match output {
                Output::Json => print_json(&json!({
                    "group": group.to_string(),
                    "m": m,
                    "kind": kind,
                    "verdict": verdict,
                    "rule": rule,
                })),
                _ => println!("{verdict}: {rule}"),
            }
            Ok(0)
        }
    }
}

fn render(d: &Digraph, output: Output) -> String {
    match output {
        Output::Dot => to_dot(d, "G"),
        Output::Json => export(d, ExportFormat::Json),
        _ => to_edgelist(d, &[]),
    }
}

fn read_digraph(path: &PathBuf) -> Result<Digraph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_edgelist(&text)?)
}

fn build(group: &GroupSpec, m: usize, sets: Option<PathBuf>, kind: Kind) -> Result<Digraph> {
    let g = named_group(group)?;
    let conn = match sets {
        Some(path) => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let conn = ConnectionSets::parse_json(&g, &text)?;
            if conn.m() != m {
                bail!("sets file has m = {} but --m is {m}", conn.m());
            }
            conn
        }
        None => {
            let (conn, origin) = catalog::find_witness(&g, m, kind, &SearchOptions::default())?
                .with_context(|| format!("{group} has no {m}-{kind} of valency 3"))?;
            match origin {
                WitnessOrigin::Construction(label) => eprintln!("connection sets: {label}"),
                WitnessOrigin::Search { index } => eprintln!("connection sets: search candidate {index}"),
            }
            conn
        }
    };
    let report = validate_sets(&g, &conn, conn.row_sum(0))?;
    eprintln!(
        "oriented {} partite {} regular {} connected {}",
        report.oriented, report.partite, report.regular, report.connected
    );
    Ok(build_cayley(&g, &conn)?.digraph)
}

fn search(args: SearchArgs) -> Result<u8> {
    let allowed: &[Output] = if args.antisymmetric {
        &[Output::Json, Output::Table, Output::Edgelist, Output::Dot]
    } else {
        &[Output::Json, Output::Table]
    };
    require(args.output, allowed, "search")?;
    let stderr_lock = Mutex::new(());
    let report = |p: &Progress| {
        let _guard = stderr_lock.lock();
        eprintln!("{}", serde_json::to_string(p).expect("plain data"));
    };
    let options = SearchOptions {
        start_cursor: args.cursor,
        max_candidates: args.max_candidates,
        progress_every: args.progress_every,
        progress: args.progress_every.map(|_| &report as &(dyn Fn(&Progress) + Sync)),
        aut: AutOptions {
            node_budget: args.node_budget,
            trace: false,
        },
        reduction: if args.reduce { Reduction::Isomorphism } else { Reduction::None },
        ..SearchOptions::default()
    };
    let (outcome, group): (SearchOutcome, Option<GroupTable>) = if args.antisymmetric {
        let order = args.order.context("--antisymmetric needs --order")?;
        (
            exists_antisymmetric_kregular_with(order, args.valency, !args.digons, &options)?,
            None,
        )
    } else {
        let spec = args.group.expect("required by clap");
        let g = named_group(&spec)?;
        let m = args.m.expect("required by clap");
        (exists_mposr_with(&g, m, args.valency, args.kind, &options)?, Some(g))
    };
    match (args.output, &outcome.witness) {
        (Output::Json, _) => print_json(&outcome.to_json(group.as_ref(), args.timings)),
        (Output::Edgelist | Output::Dot, Some(Witness::Digraph(d))) => print!("{}", render(d, args.output)),
        (Output::Edgelist | Output::Dot, _) => {}
        _ => {
            println!("status {:?}", outcome.status);
            println!("candidates {}/{}", outcome.candidates_examined, outcome.total_candidates);
            if let Some(c) = outcome.next_cursor {
                println!("next_cursor {c}");
            }
            if args.timings {
                println!("elapsed_ms {}", outcome.elapsed.as_millis());
            }
        }
    }
    Ok(match (outcome.status, args.expect.as_deref()) {
        (SearchStatus::Aborted, _) => EXIT_BUDGET,
        (SearchStatus::FoundWitness, Some("none")) | (SearchStatus::ExhaustedNone, Some("witness")) => {
            EXIT_CLAIM_FAILURE
        }
        _ => 0,
    })
}
