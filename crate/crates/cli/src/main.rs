//! `wsat`: generate, close, solve and verify weak saturation instances.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wsat_core::solver::DEFAULT_BUDGET;

/// Exit statuses beyond plain success.
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "wsat", version, about = "Weak saturation of uniform hypergraphs")]
pub struct Cli {
    /// Write graphs, certificates and reports into this directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every sampled procedure.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Percolation checks allowed to the exact solver.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
}

/// A pattern given by name or file, or a template `T_{r,h,s}`.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Engine {
    /// Pattern file or shorthand (`K3`, `K4^3`, `edge^2`, `triangle+pendant`).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Use template saturation with parameters `h s`.
    #[arg(long, num_args = 2, value_names = ["H", "S"])]
    pub template: Option<Vec<u32>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the saturation process from a graph file.
    Closure {
        graph: PathBuf,
        #[command(flatten)]
        engine: Engine,
    },
    /// Build a construction, check it with the engine and report its bounds.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
    /// Compute or bound wsat(n, H): `wsat N PATTERN`, or `wsat PATTERN --table N1..N2`.
    Wsat {
        #[arg(num_args = 1..=2, required = true, value_names = ["N", "PATTERN"])]
        operands: Vec<String>,
        /// Exhaustive search.
        #[arg(long, conflicts_with = "upper")]
        exact: bool,
        /// Best verified construction.
        #[arg(long)]
        upper: bool,
        /// Normalised values for every n in an inclusive range `N1..N2`.
        #[arg(long, value_name = "N1..N2")]
        table: Option<String>,
        /// Disable isomorphism pruning in the exact search.
        #[arg(long)]
        no_pruning: bool,
    },
    /// Replay a certificate independently of the engine.
    Verify {
        graph: PathBuf,
        certificate: PathBuf,
        #[command(flatten)]
        engine: Engine,
    },
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    /// The template `T_{r,h,s}`.
    Template { r: u32, h: u32, s: u32 },
    /// `K_A^r` plus the cone edges towards `B`.
    Cone {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        s: u32,
        /// `|A|`.
        #[arg(long)]
        a: u32,
        /// `|B|`.
        #[arg(long)]
        b: u32,
    },
    /// The s-partite gadget.
    Spartite {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        s: u32,
        /// Part sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<u32>,
    },
    /// The percolation gadget on `l` clusters of `t` vertices.
    Percolate {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        t: u32,
    },
    /// `K_h^r` on `n` vertices, for patterns of sparseness 1.
    S1 { pattern: String, n: u32 },
    /// The composite construction on `n` vertices.
    Main {
        pattern: String,
        n: u32,
        /// Base graph file; defaults to the clique construction on `m` vertices.
        #[arg(long, required_unless_present = "base")]
        m: Option<u32>,
        #[arg(long)]
        base: Option<PathBuf>,
        /// Cover file over the clusters; a greedy cover is built otherwise.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Slack for the design bound, as `p/q`.
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
    /// All r-sets meeting the first `t - r` vertices.
    CliqueExtremal { n: u32, t: u32, r: u32 },
    /// Greedy covering design of the `t`-subsets of `0..n` by `k`-sets.
    Cover { n: u32, k: u32, t: u32 },
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
    let run = || commands::run(&cli);
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(anyhow::anyhow!("thread pool: {e}")),
        },
        None => run(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
