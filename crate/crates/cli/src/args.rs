use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "cjet", version, about = "Solve polynomial systems whose unknowns are truncated power series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the system comes from: a description file or a built-in fixture.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Description file; `-` reads standard input.
    #[arg(value_name = "FILE", required_unless_present = "fixture", conflicts_with = "fixture")]
    pub file: Option<PathBuf>,
    /// Built-in fixture, e.g. `enum-trap:p=5` or `nested-linear:n=3,c=4,p=7`.
    #[arg(long, value_name = "SPEC")]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Search {
    /// Node budget for each search.
    #[arg(long, env = "CJET_BUDGET", default_value_t = 50_000_000)]
    pub budget: u64,
    /// Worker threads for exhaustive search.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Height bound for rational candidates when branching over Q.
    #[arg(long, default_value_t = 8)]
    pub height_bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Elimination for affine systems, exhaustive search over F_p, branching over Q.
    Auto,
    Linear,
    Exhaustive,
    Branching,
    /// Order-by-order lifting with backtracking.
    Lift,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Flatten a system to coefficient equations.
    Flatten {
        #[command(flatten)]
        source: Source,
        /// Truncation order; overrides the description's `order`.
        #[arg(long)]
        order: Option<u32>,
        /// Include the full flattened system in the report.
        #[arg(long)]
        emit_system: bool,
    },
    /// Solve a system modulo (x)^order.
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        search: Search,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Report every satisfying assignment instead of the first.
        #[arg(long)]
        all: bool,
        /// Solve every order-witness branch instead of stopping at the first solvable one.
        #[arg(long)]
        witness_all: bool,
        #[arg(long)]
        emit_system: bool,
    },
    /// Decide a countable system by projection chains over F_p.
    Decide {
        #[command(flatten)]
        source: Source,
        /// Order used to flatten a description into an equation stream.
        #[arg(long)]
        order: Option<u32>,
        /// Longest prefix examined.
        #[arg(long, default_value_t = 24)]
        max: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Least approximation order ν for the prescribed unknown orders.
    Nu {
        /// Description file with an `ord` statement for every unknown.
        file: PathBuf,
        /// Reference order standing in for exact solvability.
        #[arg(long)]
        cmax: u32,
        /// Largest ν tried; defaults to `--cmax`.
        #[arg(long)]
        max: Option<u32>,
        #[command(flatten)]
        search: Search,
    },
    /// Least approximation order τ for a differential system.
    Tau {
        /// Description file with an `ord` statement for every function and derivative term.
        file: PathBuf,
        #[arg(long)]
        cmax: u32,
        #[arg(long)]
        max: Option<u32>,
        #[command(flatten)]
        search: Search,
    },
    /// Solve a differential system modulo (x)^order.
    Pde {
        file: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        emit_system: bool,
    },
    /// Print a built-in fixture.
    Fixture {
        /// Fixture spec, e.g. `enum-trap:p=5`.
        spec: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Flatten { .. } => "flatten",
            Command::Solve { .. } => "solve",
            Command::Decide { .. } => "decide",
            Command::Nu { .. } => "nu",
            Command::Tau { .. } => "tau",
            Command::Pde { .. } => "pde",
            Command::Fixture { .. } => "fixture",
        }
    }
}
