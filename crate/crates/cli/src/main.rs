use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bredon_cli::{cmd_compute, cmd_table, cmd_torsion, cmd_validate, Format, Mode};
use bredon_core::Prime;
use clap::{Parser, Subcommand};

/// Bredon homology and equivariant K-homology of 2-dimensional quotient complexes.
#[derive(Parser)]
#[command(name = "bredon", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a quotient complex.
    Validate { file: PathBuf },
    /// Compute H0..H2 and K0, K1.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Show the l-torsion subcomplex, its reduction and classification.
    Torsion {
        file: PathBuf,
        #[arg(long, value_parser = ["2", "3"])]
        ell: String,
        /// Skip the reduction step.
        #[arg(long)]
        raw: bool,
    },
    /// Evaluate the inventory table and compare against expected values.
    Table {
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().cmd {
        Cmd::Validate { file } => cmd_validate(&file),
        Cmd::Compute { file, mode, format } => cmd_compute(&file, mode, format),
        Cmd::Torsion { file, ell, raw } => {
            let ell = if ell == "2" { Prime::Two } else { Prime::Three };
            cmd_torsion(&file, ell, raw)
        }
        Cmd::Table { dataset } => cmd_table(dataset.as_deref()),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code)
}
