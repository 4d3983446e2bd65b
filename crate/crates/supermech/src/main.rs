use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use supermech::analyze::analyze;
use supermech::atlas_check::atlas_check;
use supermech::atlas_file::parse_atlas;
use supermech::model::parse_model;
use supermech::report::Format;
use supermech::{bundled, resolve_seed, verify, CliError};

#[derive(Parser)]
#[command(name = "supermech", version, about = "Lagrangian and Hamiltonian mechanics on supermanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a model file: Cartan forms, regularity, Legendre map, dynamics.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append per-stage wall-clock times.
        #[arg(long)]
        timing: bool,
    },
    /// Run the built-in verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Falls back to SUPERMECH_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Atlas tools.
    Atlas {
        #[command(subcommand)]
        command: AtlasCommand,
    },
    /// Print a bundled model or atlas, or list them.
    Bundled { name: Option<String> },
}

#[derive(Subcommand)]
enum AtlasCommand {
    /// Check transitions, induced cocycles and structural cocycles.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze { file, format, out, timing } => {
            let model = parse_model(&read(&file)?).map_err(|source| CliError::Parse {
                path: file.display().to_string(),
                source,
            })?;
            let a = analyze(&model, timing);
            emit(&a.report.render(format), out.as_ref())?;
            Ok(a.exit_code())
        }
        Command::Verify { suite, seed, format } => {
            let seed = resolve_seed(seed).map_err(CliError::BadSeed)?;
            let checks = verify::run(&suite, seed).ok_or(CliError::UnknownSuite(suite))?;
            print!("{}", verify::report(&checks, seed).render(format));
            Ok(if checks.iter().all(|c| c.passed()) { 0 } else { 4 })
        }
        Command::Atlas {
            command: AtlasCommand::Check { file, format },
        } => {
            let atlas = parse_atlas(&read(&file)?).map_err(|source| CliError::Parse {
                path: file.display().to_string(),
                source,
            })?;
            let c = atlas_check(&atlas)?;
            print!("{}", c.report.render(format));
            Ok(if c.passed { 0 } else { 4 })
        }
        Command::Bundled { name: None } => {
            for (n, _) in bundled::MODELS.iter().chain(bundled::ATLASES) {
                println!("{n}");
            }
            Ok(0)
        }
        Command::Bundled { name: Some(n) } => match bundled::source(&n) {
            Some(s) => {
                print!("{s}");
                Ok(0)
            }
            None => {
                eprintln!("no bundled file named `{n}`");
                Ok(2)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
