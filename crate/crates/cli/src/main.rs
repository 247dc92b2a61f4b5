//! `kleisli`: saturation, bisimilarity, traces and property suites from the
//! command line.
//!
//! Exit codes: 0 success, 1 property failure (pair not equivalent, suite
//! failure), 2 unreadable input, 3 operation not available for the input's
//! monad, 4 unknown state name, 5 unknown suite.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "kleisli", version, about = "Saturation, weak bisimulation and weak traces for systems with internal moves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InFormat {
    Json,
    Aut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Aut,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Star,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
    Dot,
}

#[derive(Args, Clone, Copy)]
pub struct InputOpts {
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    input_format: Option<InFormat>,
}

#[derive(Args)]
pub struct OutputOpts {
    /// Output format; inferred from the output extension, else JSON.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Re-encode a system in another format.
    Convert {
        input: PathBuf,
        #[command(flatten)]
        input_opts: InputOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Saturate a system: finite star closure or the symbolic word-path saturation.
    Saturate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "star")]
        strategy: Strategy,
        #[command(flatten)]
        input_opts: InputOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Strong or weak bisimilarity of one system, or between two.
    Bisim {
        first: PathBuf,
        second: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "strong")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "star")]
        via: Strategy,
        /// Query a pair `X,Y` (with two inputs, X names a state of the first
        /// and Y of the second). Repeatable. Exit 1 unless all pairs are related.
        #[arg(long = "pair", value_name = "X,Y")]
        pairs: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        #[command(flatten)]
        input_opts: InputOpts,
    },
    /// Weak trace of one state: shortest words, or a minimal DFA.
    Trace {
        input: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, conflicts_with = "exact", required_unless_present = "exact")]
        max_len: Option<usize>,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        input_opts: InputOpts,
    },
    /// Exit 0 iff two states have the same weak trace.
    TraceEquiv {
        /// `FILE:STATE`
        first: String,
        /// `FILE:STATE`
        second: String,
        #[command(flatten)]
        input_opts: InputOpts,
    },
    /// Quotient by strong or weak bisimilarity.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        kind: Kind,
        #[command(flatten)]
        input_opts: InputOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run a property suite on seeded random systems.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, env = "KLEISLI_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 8)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long)]
        transition_density: Option<f64>,
        #[arg(long)]
        tau_density: Option<f64>,
        #[arg(long)]
        final_density: Option<f64>,
        /// Print the machine-readable report.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert { input, input_opts, out } => commands::convert(&input, input_opts, &out),
        Command::Saturate { input, strategy, input_opts, out } => commands::saturate(&input, strategy, input_opts, &out),
        Command::Bisim { first, second, kind, via, pairs, format, input_opts } => {
            commands::bisim(&first, second.as_deref(), kind, via, &pairs, format, input_opts)
        }
        Command::Trace { input, state, max_len, exact: _, input_opts } => commands::trace(&input, &state, max_len, input_opts),
        Command::TraceEquiv { first, second, input_opts } => commands::trace_equiv(&first, &second, input_opts),
        Command::Minimize { input, kind, input_opts, out } => commands::minimize(&input, kind, input_opts, &out),
        Command::Check {
            suite,
            seed,
            cases,
            max_states,
            alphabet_size,
            transition_density,
            tau_density,
            final_density,
            json,
        } => {
            let defaults = kleisli_core::harness::GenConfig::default();
            let cfg = kleisli_core::harness::GenConfig {
                seed,
                cases,
                max_states,
                alphabet_size,
                transition_density: transition_density.unwrap_or(defaults.transition_density),
                tau_density: tau_density.unwrap_or(defaults.tau_density),
                final_density: final_density.unwrap_or(defaults.final_density),
            };
            commands::check(&suite, &cfg, json)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kleisli: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
