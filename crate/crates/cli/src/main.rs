//! `treelat`: boundary invariants of a finite graph from the command line.

mod commands;
mod input;

use std::io::Write;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use treelattice::graph::DEFAULT_CIRCUIT_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "treelat", version, about = "Boundary invariants of the free lattice of a finite graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Maximal word length L for Busemann spectra [default: max(6, diam + maxCircuit + 2)].
    #[arg(long, global = true)]
    pub word_bound: Option<NonZeroUsize>,

    /// Maximal ray prefix length in the ray catalog.
    #[arg(long, global = true, default_value = "3")]
    pub catalog_prefix: NonZeroUsize,

    /// Maximal ray period length in the ray catalog.
    #[arg(long, global = true, default_value = "4")]
    pub catalog_period: NonZeroUsize,

    /// Pairing rounds.
    #[arg(long, global = true, default_value = "3")]
    pub rounds: NonZeroUsize,

    /// Step budget of the longest-circuit search.
    #[arg(long, global = true, default_value_t = DEFAULT_CIRCUIT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check connectivity and minimum degree 3.
    Validate { graph: PathBuf },
    /// Vertex and edge counts, rank, bipartiteness, diameter, circuits.
    Invariants { graph: PathBuf },
    /// The Cuntz-Krieger matrix of the free group on the graph's generators.
    CkMatrix {
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        gamma: Option<usize>,
    },
    /// K-groups of the boundary crossed product.
    Ktheory {
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        gamma: Option<usize>,
    },
    /// The cylinder partition attached to the generators and its relations.
    CkPartition { graph: PathBuf },
    /// Ratio set and type of the boundary action.
    RatioSet { graph: PathBuf },
    /// Realised Busemann values.
    DeltaSpectrum { graph: PathBuf },
    /// Busemann value, Radon-Nikodym derivative and axis of a word.
    Busemann {
        graph: PathBuf,
        /// Word in the generators, e.g. `e2 e3^-1`.
        #[arg(long)]
        word: String,
        /// Eventually periodic ray `prefix | period`.
        #[arg(long)]
        ray: String,
    },
    /// Approximate full-group map between two cylinders of equal depth.
    Pairing {
        graph: PathBuf,
        /// Dart path from the base vertex.
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Complete two proper paths of equal length to proper cycles of equal length.
    CompleteCycles {
        graph: PathBuf,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
    },
    /// Shortest proper loop at the end of a dart avoiding its edge.
    AttachLoop {
        graph: PathBuf,
        #[arg(long)]
        dart: String,
    },
}

/// A failed run: exit code, short kind and message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

pub const EXIT_IO: u8 = 3;
pub const EXIT_PARSE: u8 = 4;
pub const EXIT_VALIDATION: u8 = 5;
pub const EXIT_INAPPLICABLE: u8 = 6;
pub const EXIT_BUDGET: u8 = 7;
pub const EXIT_INTERNAL: u8 = 8;

impl From<treelattice::Error> for Failure {
    fn from(e: treelattice::Error) -> Failure {
        use treelattice::Error as E;
        let (code, kind) = match &e {
            E::Parse { .. }
            | E::InvalidPath(_)
            | E::UnknownGenerator(_)
            | E::UnknownDart(_)
            | E::InvalidRay(_)
            | E::DepthMismatch(..) => (EXIT_PARSE, "input"),
            E::NotRegular(_) | E::RankTooSmall(_) | E::IdentityWord => (EXIT_INAPPLICABLE, "inapplicable"),
            E::BudgetExceeded { .. } => (EXIT_BUDGET, "budget"),
            E::CkIdentity { .. } | E::Internal(_) => (EXIT_INTERNAL, "internal"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    let mut stdout = std::io::stdout().lock();
    match outcome {
        Ok(report) => {
            if stdout.write_all(report.as_bytes()).is_err() {
                return ExitCode::from(EXIT_IO);
            }
            ExitCode::SUCCESS
        }
        Err((report, failure)) => {
            if let Some(report) = report {
                let _ = stdout.write_all(report.as_bytes());
            }
            let line = match cli.format {
                Format::Text => format!("error ({}): {}", failure.kind, failure.message),
                Format::Json => serde_json::json!({
                    "error": { "kind": failure.kind, "code": failure.code, "message": failure.message }
                })
                .to_string(),
            };
            eprintln!("{line}");
            ExitCode::from(failure.code)
        }
    }
}
