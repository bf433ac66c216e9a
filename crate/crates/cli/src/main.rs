//! `hodge`: command-line access to clique complexes, Hodge Laplacians and
//! their applications.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a numerical
//! routine fails to converge (a diagnostic report is still written).

mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hodge",
    version,
    about = "Combinatorial Hodge theory on graphs"
)]
pub struct Cli {
    /// Kernel threshold for spectra, or relative residual tolerance for
    /// least-squares solves.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tolerance: Option<f64>,
    /// Iteration cap for least-squares solves (default: 10 × unknowns).
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
    /// Clique weights as TSV (vertex ids then weight); unlisted cliques get 1.
    #[arg(long, global = true)]
    pub weights: Option<PathBuf>,
    /// Seed for randomized helpers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list: `u v` per line, 1-indexed, optional `p <n> <m>` header.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OperatorKind {
    Coboundary,
    Adjoint,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    TwoSolve,
    LaplacianResidual,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Mean,
    Logodds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the cliques of the graph by level.
    Cliques {
        #[command(flatten)]
        graph: GraphInput,
        /// Largest clique order to enumerate (default: all).
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Matrix of the coboundary δ_k or its weighted adjoint.
    Operator {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, short)]
        k: usize,
        #[arg(long, value_enum, default_value = "coboundary")]
        kind: OperatorKind,
        /// Emit MatrixMarket text instead of JSON.
        #[arg(long)]
        export: bool,
    },
    /// Matrix of the Hodge Laplacian Δ_k.
    Laplacian {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, short)]
        k: usize,
        #[arg(long)]
        export: bool,
    },
    /// Eigenvalues of Δ_k.
    Spectrum {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, short)]
        k: usize,
        /// Emit `index eigenvalue` TSV.
        #[arg(long)]
        plot: bool,
    },
    /// Betti numbers dim ker Δ_k (all computable levels when --k is omitted).
    Betti {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, short)]
        k: Option<usize>,
    },
    /// Hodge decomposition of a cochain.
    Decompose {
        #[command(flatten)]
        graph: GraphInput,
        /// Cochain TSV: vertex ids then value.
        #[arg(long)]
        cochain: PathBuf,
        /// Degree of the cochain (default: from the column count).
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "two-solve")]
        method: MethodArg,
        /// Emit per-clique TSV rows `x exact harmonic coexact`.
        #[arg(long)]
        plot: bool,
    },
    /// Global ranking from voter data.
    Rank {
        /// CSV of `voter,item,score` or `voter,item_i,item_j,value`.
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "mean")]
        model: ModelArg,
        /// Emit `rank item score` TSV.
        #[arg(long)]
        plot: bool,
    },
    /// Game flow, potential/harmonic split and pure equilibria.
    Game {
        /// JSON with `strategies` and per-player `utilities`.
        #[arg(long, short)]
        input: PathBuf,
        /// Emit the flow as `from to value` TSV.
        #[arg(long)]
        plot: bool,
    },
    /// Cheeger constant by exhaustive cuts, with the spectral bounds.
    Cheeger {
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Apply the graph p-Laplacian to a vertex function.
    Plap {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long)]
        p: f64,
        /// Vertex function TSV: `vertex value` per line.
        #[arg(long)]
        f: PathBuf,
    },
    /// Compare Hodge Laplacian spectra of two graphs for k = 0..=max-k.
    Isospectral {
        #[arg(long, default_value_t = 2)]
        max_k: usize,
        a: PathBuf,
        b: PathBuf,
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
        Ok(out) => match commands::emit(&cli, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Numerical { message, report }) => {
            eprintln!("error: {message}");
            if let Err(e) = commands::emit(&cli, &report) {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
