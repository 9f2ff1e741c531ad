//! Command-line front end: argument parsing, exit codes and dispatch.
//!
//! Exit codes are `0` on success, `1` when a result breaks one of its
//! contracts and `2` for usage errors, which include unreadable or
//! malformed input files and invalid parameters.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use planarize::separator::SolverChoice;
use planarize::Backend;

pub mod commands;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRACT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Inputs above this many vertices are refused: all-pairs work is quadratic.
pub const MAX_VERTICES: usize = 5000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: String,
        source: planarize::Error,
    },
    #[error(transparent)]
    Core(#[from] planarize::Error),
    /// Report was produced but shows a broken invariant.
    #[error("contract violation [{invariant}]: {detail}")]
    Failed {
        invariant: &'static str,
        detail: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use planarize::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input { .. } => EXIT_USAGE,
            CliError::Failed { .. } => EXIT_CONTRACT,
            CliError::Core(e) => match e {
                E::Contract { .. } | E::RemainderNotPlanar | E::IncompleteDecomposition => EXIT_CONTRACT,
                _ => EXIT_USAGE,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "planarize",
    version,
    about = "Planarizing shortest paths and planar host sampling for graph files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph family to a graph file.
    Gen(GenArgs),
    /// Test a graph for planarity.
    Planarity(InputArgs),
    /// Compute a planarizing set of shortest root paths.
    Planarize(PlanarizeArgs),
    /// Find a balanced separator made of root paths.
    Separator(SeparatorArgs),
    /// Sample planar host graphs and write them to files.
    Embed(EmbedArgs),
    /// Estimate the expected distortion of the sampled hosts.
    Distortion(DistortionArgs),
    /// Compare MST cost on the graph with its mean over sampled hosts.
    MstDemo(SampleArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Graph file.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlanarizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Recorded in the report; planarization itself is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Solver {
    Auto,
    Exact,
    Heuristic,
}

impl From<Solver> for SolverChoice {
    fn from(s: Solver) -> Self {
        match s {
            Solver::Auto => SolverChoice::Auto,
            Solver::Exact => SolverChoice::Exact,
            Solver::Heuristic => SolverChoice::Heuristic,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeparatorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Solver::Auto)]
    pub solver: Solver,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: planarize::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `star` or `greedy-augment`.
    #[arg(long, default_value = "greedy-augment", value_parser = parse_backend)]
    pub backend: Backend,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Directory receiving one host graph file per sample.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Include the per-pair statistics in the report.
    #[arg(long)]
    pub pair_stats: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum FamilyCommand {
    /// Product of cycles C_m x C_k.
    ToroidalGrid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// g toroidal grids joined in a path by bridges.
    GenusChain {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Complete graph K_n.
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// m x k grid.
    PlanarGrid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: FamilyCommand,
    /// Output graph file; the graph goes to stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Draw edge lengths uniformly from [min-length, max-length].
    #[arg(long, global = true, requires = "max_length")]
    pub min_length: Option<f64>,
    #[arg(long, global = true, requires = "min_length")]
    pub max_length: Option<f64>,
    /// Seed for random lengths.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `argv` (program name first), runs the command, prints the report
/// to stdout and diagnostics to stderr, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match commands::execute(cli.command, echo) {
        Ok(out) => {
            print!("{}", out.stdout);
            match out.failure {
                None => EXIT_OK,
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
