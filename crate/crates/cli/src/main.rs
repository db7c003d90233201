use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use seqdensity_cli::{emit, load_config, run, CliError, Command, Format, RunConfig};

/// Densities, distribution functions and polyadic analysis of integer sequences.
///
/// Exit status: 0 on success, 1 when a precondition or gate fails (including an
/// experiment missing its tolerance), 2 on a configuration error.
#[derive(Parser)]
#[command(name = "seqdensity", version)]
struct Cli {
    /// Seed for sampling commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker thread cap
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the default tolerance of the command
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Run from a JSON config (a bare config or any previous JSON output)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let mut config = match (&cli.config, cli.command) {
        (Some(path), None) => load_config(path)?,
        (None, Some(command)) => RunConfig {
            command,
            seed: 0,
            format: Format::Json,
            out: None,
            tolerance: None,
            threads: None,
        },
        (Some(_), Some(_)) => return Err(CliError::Config("give either a subcommand or --config, not both".into())),
        (None, None) => return Err(CliError::Config("a subcommand or --config is required".into())),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    if cli.out.is_some() {
        config.out = cli.out;
    }
    if cli.tolerance.is_some() {
        config.tolerance = cli.tolerance;
    }
    if cli.threads.is_some() {
        config.threads = cli.threads;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = resolve(cli).and_then(|config| {
        let outcome = run(&config)?;
        emit(&config, &outcome)?;
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
