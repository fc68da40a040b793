use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use crolab_cli::commands::{self, DEFAULT_CLASSIFY_TOL, DEFAULT_GAME_TOL, DEFAULT_SOLVER_TOL};
use crolab_cli::{threads_from_env, ChannelSpec, CliError};

/// Classical replaceability of quantum channels.
#[derive(Debug, Parser)]
#[command(name = "crolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Channel specification file (JSON).
    spec: PathBuf,
    /// Default seed for `random` channel specs.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// cqCRO / qqCRO / qcCRO / DIO membership, PPT test and replacement matrix.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Residual threshold for the membership identities.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Robustness and relative entropy of irreplaceability.
    Measures {
        #[command(flatten)]
        common: Common,
        /// Solver duality-gap tolerance.
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
    },
    /// Both measures along a one-parameter gate family, as CSV.
    Sweep {
        /// Gate family; only `u-theta` (cos θ Z + sin θ X on [0, π/2]).
        family: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Solver duality-gap tolerance.
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness game and the advantage identity `ratio = 1 + R`.
    Game {
        #[command(flatten)]
        common: Common,
        /// Largest accepted gap in the advantage identity.
        #[arg(long, default_value_t = DEFAULT_GAME_TOL)]
        tol: f64,
    },
    /// Membership in the set replaceable before Pauli measurements.
    VqaCheck {
        #[command(flatten)]
        common: Common,
        /// Pauli strings of the observable decomposition, e.g. `ZZI,XXI`.
        #[arg(long, required = true, value_delimiter = ',')]
        observable: Vec<String>,
        /// Residual threshold for the replaceability identities.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
}

fn load(common: &Common) -> Result<crolab::Channel64, CliError> {
    ChannelSpec::from_path(&common.spec)?.build(common.seed)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialise");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = threads_from_env()?;
    match cli.command {
        Command::Classify { common, tol } => {
            let report = commands::classify(&load(&common)?, tol)?;
            emit(&json_text(&report), common.out.as_deref())
        }
        Command::Measures { common, tol } => {
            let report = commands::measures(&load(&common)?, tol)?;
            emit(&json_text(&report), common.out.as_deref())
        }
        Command::Sweep {
            family,
            points,
            tol,
            out,
        } => {
            let csv = commands::sweep(&family, points, threads, tol)?;
            emit(&csv, out.as_deref())
        }
        Command::Game { common, tol } => {
            let report = commands::game(&load(&common)?, tol)?;
            emit(&json_text(&report), common.out.as_deref())
        }
        Command::VqaCheck {
            common,
            observable,
            tol,
        } => {
            let report = commands::vqa_check(&load(&common)?, &observable, threads, tol)?;
            emit(&json_text(&report), common.out.as_deref())
        }
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return fail(&CliError {
                kind: "usage",
                ..CliError::parse(msg.trim())
            });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
