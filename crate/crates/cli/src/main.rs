mod betti_input;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bikoszul",
    version,
    about = "Minimal graded resolutions, Koszul-type classification and resolution decomposition"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Internal degree bound D of the window.
    #[arg(long, global = true, default_value_t = 8, value_name = "D")]
    degree_bound: usize,

    /// Homological length L of the window.
    #[arg(long, global = true, default_value_t = 5, value_name = "L")]
    length: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Module presentation file (defaults to the trivial module).
    #[arg(long, global = true, value_name = "FILE")]
    module: Option<PathBuf>,

    /// Parameter d of the resolution map.
    #[arg(long, global = true, value_name = "INT")]
    d: Option<usize>,

    /// Block partition file (JSON) for `decompose`.
    #[arg(long, global = true, value_name = "FILE")]
    partition: Option<PathBuf>,

    /// Seed for sampled checks.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree-bounded Gröbner basis.
    Gb { algebra: PathBuf },
    /// Dimensions of the algebra in degrees 0..=D.
    Hilbert { algebra: PathBuf },
    /// Minimal resolution of the module (or of k) with its certificate.
    Resolve { algebra: PathBuf },
    /// Betti table of the minimal resolution.
    Betti { algebra: PathBuf },
    /// Match a resolution against the Koszul-type degree patterns.
    Classify {
        algebra: Option<PathBuf>,
        /// Betti support (`0;1;3,4;6;7`, `j:count` for multiplicities) or
        /// Betti records as JSON; `-` reads standard input.
        #[arg(long, value_name = "FILE|-")]
        betti: Option<String>,
    },
    /// Yoneda product ranks, generation in degree 0, sampled associativity.
    Yoneda { algebra: PathBuf },
    /// Strongly bi-Koszul obstruction for every n in the window.
    Obstruction { algebra: PathBuf },
    /// Bi-Koszul and strongly bi-Koszul checks for a module.
    CheckModule { algebra: PathBuf },
    /// Split the resolution of a module into two pure resolutions.
    Decompose { algebra: PathBuf },
    /// Free product of two connected algebras with the Ext direct-sum check.
    FreeProduct { first: PathBuf, second: PathBuf },
    /// Free product of a δ′- and a δ″-Koszul algebra, checked strongly bi-Koszul.
    ConstructStrongly { first: PathBuf, second: PathBuf },
}

/// Whether the command's verdict was positive.
pub enum Outcome {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(err) => {
            let (code, status) = match err.downcast_ref::<bikoszul::Error>() {
                Some(e) if e.is_negative_verdict() => (e.code(), 1),
                Some(e) if e.is_window_or_resource() => (e.code(), 3),
                Some(e) => (e.code(), 2),
                None => ("E-INPUT", 2),
            };
            eprintln!("error[{code}]: {err:#}");
            ExitCode::from(status)
        }
    }
}
