//! Command-line driver for `arc-cover`. Every command prints one JSON
//! report; see `schema/run-report.schema.json`.
//!
//! Exit codes: 0 success, 1 failed certificate or internal error,
//! 2 invalid input, 3 resource cap hit.

pub mod commands;
pub mod inputs;
pub mod report;

use std::time::Instant;

use arc_cover::{Caps, Error};
use clap::{Parser, Subcommand};

pub use report::RunReport;

/// Environment variable holding cap overrides, e.g. `copies=1000,oracle_nodes=5000`.
pub const CAPS_ENV: &str = "ARC_COVER_CAPS";

#[derive(Debug, Parser)]
#[command(name = "arc-cover", version, about = "Fractional packing, covering and LP-rounding covers of directed patterns")]
pub struct Cli {
    /// Solve LPs in floating point instead of exact rationals.
    #[arg(long, global = true)]
    pub float: bool,
    /// Seed for random generators; trial i of an experiment uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the report on one line.
    #[arg(long, global = true)]
    pub compact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the copies of H in a host digraph.
    Copies {
        #[arg(long)]
        host: String,
        #[arg(long = "h")]
        h: String,
        /// Include every copy in the report.
        #[arg(long)]
        list: bool,
    },
    /// Solve the fractional packing / cover LP pair.
    Lp {
        #[arg(long)]
        host: String,
        #[arg(long = "h")]
        h: String,
    },
    /// disc and f for a given L, and the searched bounds on f(H).
    Fparam {
        #[arg(long = "h")]
        h: String,
        #[arg(long = "l")]
        l: Option<String>,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
        #[arg(long, default_value_t = 12)]
        catalog_max: usize,
    },
    /// Run the peel-and-partition cover algorithm.
    Cover {
        #[arg(long)]
        host: String,
        #[arg(long = "h")]
        h: String,
        #[arg(long = "l")]
        l: String,
        /// Peel every heavy arc per LP solve (not certified).
        #[arg(long)]
        batch_peel: bool,
    },
    /// K_k-cover of an undirected graph with ratio floor(k^2/4).
    KkCover {
        /// Undirected graph file, `complete:n` or `matching:m`.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        multigraph: bool,
    },
    /// Exact integral cover and packing numbers by branch and bound.
    Exact {
        #[arg(long)]
        host: String,
        #[arg(long = "h")]
        h: String,
    },
    /// Decompose K_n into k-cycles, orient them, and certify the packing.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 60_000)]
        time_cap_ms: u64,
        /// Write the decomposition to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Also compute the exact cover number of the oriented tournament.
        #[arg(long)]
        tau: bool,
    },
    /// Audit the certified ratio over a family of random or constructed hosts.
    ExperimentRatio {
        /// `random-digraph:n:p`, `random-tournament:n` or `constructed:n:k`.
        #[arg(long)]
        family: String,
        #[arg(long = "h")]
        h: String,
        #[arg(long = "l")]
        l: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Acyclic and bipartite subgraph sizes of random orientations of G.
    ExperimentOrientation {
        /// Undirected graph file, `complete:n` or `matching:m`.
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        multigraph: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Copies { .. } => "copies",
            Command::Lp { .. } => "lp",
            Command::Fparam { .. } => "fparam",
            Command::Cover { .. } => "cover",
            Command::KkCover { .. } => "kk-cover",
            Command::Exact { .. } => "exact",
            Command::Construct { .. } => "construct",
            Command::ExperimentRatio { .. } => "experiment-ratio",
            Command::ExperimentOrientation { .. } => "experiment-orientation",
        }
    }
}

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_resource_cap() {
        3
    } else if err.is_validation() {
        2
    } else {
        1
    }
}

/// Caps from [`CAPS_ENV`] if set, defaults otherwise.
pub fn caps_from_env() -> Result<Caps, Error> {
    match std::env::var(CAPS_ENV) {
        Ok(spec) => Caps::default().with_overrides(&spec),
        Err(_) => Ok(Caps::default()),
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("arc-cover".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let text = err.render().to_string();
            return match code {
                0 => Invocation { exit_code: 0, stdout: text, stderr: String::new() },
                _ => Invocation { exit_code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let caps = match caps_from_env() {
        Ok(caps) => caps,
        Err(err) => return failure(&cli, &err),
    };
    let started = Instant::now();
    match commands::execute(&cli, &caps) {
        Ok(outcome) => {
            let report = RunReport {
                command: cli.command.name().to_string(),
                args,
                seed: cli.seed,
                exact: !cli.float,
                inputs: outcome.inputs,
                result: outcome.result,
                status: if outcome.passed { "ok" } else { "certificate_failed" },
                elapsed: started.elapsed(),
            };
            let json = report.to_json();
            let stdout = if cli.compact { json.to_string() } else { serde_json::to_string_pretty(&json).expect("report serializes") };
            Invocation { exit_code: if outcome.passed { 0 } else { 1 }, stdout: stdout + "\n", stderr: String::new() }
        }
        Err(err) => failure(&cli, &err),
    }
}

fn failure(cli: &Cli, err: &Error) -> Invocation {
    let code = exit_code(err);
    let kind = match code {
        3 => "resource_cap",
        2 => "validation",
        _ => "internal",
    };
    let body = serde_json::json!({
        "schema": report::SCHEMA_ID,
        "command": cli.command.name(),
        "error": { "kind": kind, "message": err.to_string() },
    });
    Invocation { exit_code: code, stdout: String::new(), stderr: body.to_string() + "\n" }
}
