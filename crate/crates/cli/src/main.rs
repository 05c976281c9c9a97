//! `gkm`: batch front end over graph files and builder specs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gkm", version, about = "Equivariant cohomology of GKM graphs")]
pub struct Cli {
    /// Seed for every pseudorandom choice (generic directions).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Graph in the JSON interchange format.
    #[arg(conflicts_with = "builder", required_unless_present = "builder")]
    pub file: Option<PathBuf>,
    /// Builder spec such as `projective:2` or `bundle:toric:1,1@1,0,1`.
    #[arg(long)]
    pub builder: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the action axioms.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Betti vector for a seeded generic direction.
    Betti {
        #[command(flatten)]
        input: Input,
    },
    /// Solver dimensions against the Betti formula, optionally with a fiber.
    Cohom {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// Poincaré coefficients of the fixed component, e.g. `1,0,1`.
        /// Defaults to the fiber recorded in the file, if any.
        #[arg(long)]
        fiber: Option<String>,
        /// Also print a basis of each graded piece.
        #[arg(long)]
        basis: bool,
    },
    /// Compatible connection tables.
    Connection {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        strict: bool,
    },
    /// Check that the connection carries the Chern labels.
    ChernCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        strict: bool,
    },
    /// Transport the symplectic class along a vertex path.
    Transport {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertex names.
        #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
        path: Option<String>,
        /// Comma-separated vertex names, first equal to last.
        #[arg(long)]
        cycle: Option<String>,
        /// Starting class as comma-separated rationals; zero by default.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Cycle defects, for one cycle or for a fundamental cycle basis.
    Defect {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cycle: Option<String>,
    },
    /// Write a builder's graph as JSON.
    Generate {
        /// `family:params`, or the family and parameters as two words.
        #[arg(required = true, num_args = 1..=2)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GKM_LOG", "warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", report.body);
            ExitCode::from(if report.violation { 1 } else { 0 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
