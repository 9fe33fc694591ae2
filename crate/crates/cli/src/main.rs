use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conestab_cli::commands::{self, Format};
use conestab_cli::{parse_levels, CliError, EXIT_VALIDATION};
use conestab_core::exactgeom::parse_rational;
use conestab_core::Q;

#[derive(Parser)]
#[command(
    name = "conestab",
    version,
    about = "Exact stability invariants of toric cone singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputFlags {
    /// Machine-readable JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

impl OutputFlags {
    fn format(&self) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the singularity, Reeb vector and filtrations of a document.
    Validate { path: String },
    /// Closed-form invariants, optionally for one named filtration.
    Invariants {
        path: String,
        #[arg(long)]
        filtration: Option<String>,
        /// Duality-gap tolerance for the reduced J-norm, as p/q.
        #[arg(long, value_parser = rational)]
        tol: Option<Q>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// δ_T, the Futaki certificate and the semistability verdict.
    Stability {
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Minimize the normalized volume over the Reeb cone.
    Nvolmin {
        path: String,
        #[arg(long, value_parser = rational)]
        tol: Option<Q>,
        #[arg(long)]
        json: bool,
    },
    /// Finite-level estimator sweep as CSV.
    Estimate {
        path: String,
        #[arg(long)]
        filtration: String,
        /// Levels such as `1..200` or `1,5,10`.
        #[arg(long, value_parser = levels)]
        levels: Option<Levels>,
        /// Sweep the approximating filtration F_M instead.
        #[arg(long, value_name = "M")]
        approx: Option<u64>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        output: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Okounkov body vertices and Γ_m point clouds as JSON.
    Okounkov {
        path: String,
        #[arg(long)]
        filtration: Option<String>,
        #[arg(long, value_parser = levels)]
        levels: Option<Levels>,
        /// Slope t of Γ_{m,mt}, as p/q.
        #[arg(long, value_parser = rational)]
        t: Option<Q>,
    },
}

fn rational(s: &str) -> Result<Q, String> {
    parse_rational(s).ok_or_else(|| format!("cannot parse {s:?} as p/q"))
}

#[derive(Clone, Debug)]
struct Levels(Vec<u64>);

fn levels(s: &str) -> Result<Levels, String> {
    parse_levels(s).map(Levels)
}

fn run(cli: Cli) -> Result<(String, i32), CliError> {
    let load = |path: &str| commands::read_document(path)?.build();
    let out = match cli.command {
        Command::Validate { path } => {
            let raw = commands::read_document(&path)?;
            let (text, ok) = commands::validate(&raw);
            return Ok((text, if ok { 0 } else { EXIT_VALIDATION }));
        }
        Command::Invariants {
            path,
            filtration,
            tol,
            output,
        } => commands::invariants(
            &load(&path)?,
            filtration.as_deref(),
            tol.as_ref(),
            output.format(),
        )?,
        Command::Stability { path, json } => {
            commands::stability(&load(&path)?, json_or_text(json))?
        }
        Command::Nvolmin { path, tol, json } => {
            commands::nvolmin(&load(&path)?, tol.as_ref(), json_or_text(json))?
        }
        Command::Estimate {
            path,
            filtration,
            levels,
            approx,
            output,
            json,
        } => {
            let text = commands::estimate(
                &load(&path)?,
                &filtration,
                levels.as_ref().map(|l| l.0.as_slice()),
                approx,
                json_or_text(json),
            )?;
            match output {
                Some(file) => {
                    std::fs::write(&file, &text)
                        .map_err(|e| CliError::Io(format!("{file}: {e}")))?;
                    format!("wrote {file}\n")
                }
                None => text,
            }
        }
        Command::Okounkov {
            path,
            filtration,
            levels,
            t,
        } => commands::okounkov(
            &load(&path)?,
            filtration.as_deref(),
            levels.as_ref().map(|l| l.0.as_slice()),
            t.as_ref(),
        )?,
    };
    Ok((out, 0))
}

fn json_or_text(json: bool) -> Format {
    if json {
        Format::Json
    } else {
        Format::Text
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
