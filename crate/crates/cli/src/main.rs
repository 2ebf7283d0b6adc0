//! `rccs`: parse, encode, step, compare and discriminate finite processes.
//!
//! Exit codes: 0 related or success, 1 not related, 2 usage or
//! precondition error.

mod commands;
mod input;
mod script;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::Terms;

#[derive(Parser, Debug)]
#[command(
    name = "rccs",
    version,
    about = "Reversible CCS and configuration structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

/// Settings shared by every command.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest combined event count for the brute-force oracle.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_events: u64,
    /// Largest number of observers in a synthesised or generated context.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_context: u64,
    /// Turn off the rule `α.P | α.P ↦ α.P` when judging collapse.
    #[arg(long, global = true)]
    pub no_par_collapse: bool,
    /// Extra contexts, one per line, added to the generated family.
    #[arg(long, global = true, value_name = "FILE")]
    pub contexts: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Hereditary history-preserving bisimilarity of the encodings.
    Hhpb,
    /// Barbed back-and-forth bisimilarity of the encodings.
    Bfbarb,
    /// Strong bisimilarity of the forward CCS transition systems.
    Strong,
    /// The brute-force hhpb search, bounded by `--max-events`.
    Oracle,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the syntax tree of each term.
    Parse {
        #[command(flatten)]
        terms: Terms,
    },
    /// Print the configuration structure of a term.
    Encode {
        #[command(flatten)]
        terms: Terms,
    },
    /// Replay a script of forward and backward steps.
    Step {
        #[command(flatten)]
        terms: Terms,
        /// Commands separated by `;`: `fwd α`, `fwd i:α`, `bwd`, `bwd i`.
        #[arg(long, default_value = "")]
        script: String,
    },
    /// Decide an equivalence between two terms.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        terms: Terms,
    },
    /// Build a context that separates two terms.
    Discriminate {
        #[command(flatten)]
        terms: Terms,
    },
    /// Check that hhpb is preserved by the context family.
    Congruence {
        #[command(flatten)]
        terms: Terms,
    },
    /// Check many pairs in parallel.
    Batch {
        #[arg(value_enum, long, default_value_t = CheckKind::Hhpb)]
        kind: CheckKind,
        /// Terms whose pairs are checked; defaults to a generated corpus.
        #[command(flatten)]
        terms: Terms,
        /// Seed of the generated corpus.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Number of generated pairs.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
