//! `cubesff`: command line runner for the exact experiments.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, ExperimentConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Cap(String),
    Identity(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Identity(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Cap(_) => "cap_exceeded",
            CliError::Identity(_) => "identity",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Cap(m) | CliError::Identity(m) | CliError::Io(m) => m,
        }
    }
}

impl From<cubesff::Error> for CliError {
    fn from(e: cubesff::Error) -> Self {
        use cubesff::Error::*;
        match e {
            TooLarge { .. } | FactorizationCapExceeded(_) => CliError::Cap(e.to_string()),
            NotFoundWithin { .. } => CliError::Identity(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Ok(v) = std::env::var("CUBESFF_CAP_BITS") {
        let bits: u32 = v.parse().map_err(|_| CliError::Config(format!("CUBESFF_CAP_BITS={v:?} is not an integer")))?;
        cubesff::limits::set_cap_bits(bits);
    }
    let cfg = ExperimentConfig::from_flags(&cli.flags)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let report = match cli.command {
        Command::Gauss => commands::gauss(&cfg)?,
        Command::Certificate => commands::certificate(&cfg)?,
        Command::Localdensity => commands::localdensity(&cfg)?,
        Command::Sigma => commands::sigma(&cfg)?,
        Command::Scan => commands::scan(&cfg)?,
        Command::Variance => commands::variance_cmd(&cfg)?,
        Command::Manin => commands::manin(&cfg)?,
        Command::Selftest => commands::selftest(&cfg)?,
    };
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => output::write_atomic(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(CliError::Io(e.to_string())),
                _ => {}
            }
        }
    }
    if !report.failures.is_empty() {
        return Err(CliError::Identity(report.failures.join("; ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({ "error": e.kind(), "message": e.message() });
            eprintln!("{msg}");
            ExitCode::from(e.code())
        }
    }
}
