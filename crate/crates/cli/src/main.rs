//! `mdsr`: solve, check and generate multidimensional stable roommates
//! instances from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "mdsr", version, about = "Multidimensional stable roommates toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, env = "MDSR_WORKERS")]
    pub workers: Option<usize>,
    /// Cap on candidate groups in one blocking scan.
    #[arg(long, global = true)]
    pub max_groups: Option<u128>,
    /// Cap on agents for brute-force enumeration.
    #[arg(long, global = true)]
    pub max_brute_agents: Option<usize>,
    /// Cap on agents per dynamic-programming window.
    #[arg(long, global = true)]
    pub window_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether an instance has a stable matching.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Write the matching document here when one is found.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Replace the dynamic program's window size (below the proven
        /// bound a negative answer is no longer a proof).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Check a matching and report the least blocking set.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        matching: PathBuf,
    },
    /// Instance parameters and the solver the dispatcher would pick.
    Stats {
        #[arg(long)]
        instance: PathBuf,
        /// Also compute the deletion distance, up to this many deletions.
        #[arg(long)]
        lambda_budget: Option<usize>,
    },
    /// Emit a generated instance document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write to this file instead of standard output.
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
    /// Build reduced instances and convert witnesses.
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Auto,
    Brute,
    Strict,
    Dp,
    Greedy,
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Six agents, master list of pairs, no stable matching.
    Instable,
    /// A cut-off gadget on its own.
    Cutoff,
    /// A tie gadget on its own.
    Tie,
    /// A strict order `a1 ≻ a2 ≻ …`.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// A random master poset with canonical tiebreak.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Probability that a pair of agents is comparable.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReduceKind {
    /// From 1-in-3 SAT with every variable in three clauses.
    Sat {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, requires = "emit_matching")]
        assignment: Option<PathBuf>,
        /// Emit the matching built from `--assignment`.
        #[arg(long, requires = "assignment")]
        emit_matching: bool,
        /// Read an assignment off a matching of the reduced instance.
        #[arg(long, conflicts_with = "assignment")]
        extract: Option<PathBuf>,
    },
    /// From perfect stable marriage with ties under master lists.
    Smti {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, requires = "emit_matching")]
        matching: Option<PathBuf>,
        #[arg(long, requires = "matching")]
        emit_matching: bool,
        #[arg(long, conflicts_with = "matching")]
        extract: Option<PathBuf>,
    },
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
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Guard(_) => 3,
        }
    }
}
