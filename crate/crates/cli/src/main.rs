use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "lie-inv", version, about = "Invariants of Lie algebras by algebraic moving frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra file and check the Jacobi identity
    Validate { file: PathBuf },
    /// Dimension, coadjoint rank, number of invariants and center
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print B(t) and the lifted invariants
    Lifted {
        file: PathBuf,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        json: bool,
    },
    /// Compute a basis of invariants by normalization
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Replace invariants by polynomial ones where possible
        #[arg(long)]
        polynomial: bool,
        #[arg(long)]
        json: bool,
    },
    /// Certify a list of invariants; exit 0 iff they form a basis
    Verify {
        file: PathBuf,
        #[arg(long = "invariant", required = true)]
        invariants: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Symmetrize polynomial invariants into the enveloping algebra
    Casimir {
        file: PathBuf,
        /// Use these expressions instead of computing invariants
        #[arg(long = "invariant")]
        invariants: Vec<String>,
        /// Skip reordering into the ordered basis
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        json: bool,
    },
    /// Triangular matrix families
    Family {
        kind: FamilyKind,
        #[arg(long)]
        n: usize,
        /// Parameter matrix for tgamma
        #[arg(long)]
        gamma_file: Option<PathBuf>,
        /// Print the determinant basis instead of the algebra
        #[arg(long)]
        emit_theorem_basis: bool,
        #[arg(long)]
        json: bool,
    },
    /// Built-in algebras
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args)]
struct OrderArgs {
    /// Generator order, e.g. 1,2,3,4
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    /// Signs, e.g. +,+,+,-
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    signs: Option<Vec<String>>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Seed for witness points (default: LIE_INV_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    T0,
    T,
    St,
    Tgamma,
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        name: String,
        /// NAME=VALUE, e.g. b=-1
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        /// Print the known invariant basis instead of the algebra
        #[arg(long)]
        basis: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            if !e.stdout.is_empty() {
                print!("{}", e.stdout);
            }
            eprintln!("error: {}", e.message);
            for line in &e.detail {
                eprintln!("{line}");
            }
            ExitCode::from(e.code)
        }
    }
}
