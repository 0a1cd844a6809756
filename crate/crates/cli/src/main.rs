mod commands;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser)]
#[command(name = "sinvar", version, about = "Spectra of the x^(2/3)-confined shape-invariant potential")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (overrides the rayon default).
    #[arg(long, env = "SINVAR_THREADS", hide_env_values = true, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate V, its partner and the intermediate potential.
    Potential(commands::PotentialArgs),
    /// Tabulate the regularized spectrum generating equation.
    SgeScan(commands::SgeScanArgs),
    /// Compute the discrete spectrum.
    Spectrum(commands::SpectrumArgs),
    /// Tabulate a normalized bound state.
    Wavefunction(commands::WavefunctionArgs),
    /// Run the invariant suites.
    Verify(commands::VerifyArgs),
}

#[derive(Args, Clone, Copy)]
pub struct EtaArgs {
    /// η = −√(2a) < 0.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    /// Self-adjoint extension at the origin: minus (U = −I) or plus (U = +I).
    #[arg(long, default_value = "minus")]
    pub extension: sinvar::model::ExtensionChoice,
}

pub enum Failure {
    Usage(String),
    Validation(String),
}

impl From<sinvar::Error> for Failure {
    fn from(e: sinvar::Error) -> Self {
        match e {
            sinvar::Error::Domain(_) | sinvar::Error::LevelNotFound { .. } | sinvar::Error::GridTooSmall { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("SINVAR_THREADS must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))?;
    }
    let (doc, ok) = match cli.command {
        Command::Potential(a) => (commands::potential(&a)?, true),
        Command::SgeScan(a) => (commands::sge_scan(&a)?, true),
        Command::Spectrum(a) => commands::spectrum(&a)?,
        Command::Wavefunction(a) => (commands::wavefunction(&a)?, true),
        Command::Verify(a) => commands::verify(&a)?,
    };
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    doc.write(cli.format, &mut sink)?;
    sink.flush()?;
    Ok(ok)
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
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
