mod args;
mod commands;
mod config;
mod error;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use error::{CliError, CliResult};
use std::process::ExitCode;

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("BSQ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "BSQ_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn dispatch(argv: Vec<String>, nested: bool) -> CliResult<()> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => {
            let _ = e.print();
            return Err(CliError::Config(format!("invalid arguments: {}", e.kind())));
        }
    };
    let prov = std::iter::once("bsq")
        .chain(argv.iter().skip(1).map(String::as_str))
        .collect::<Vec<_>>()
        .join(" ");
    match &cli.command {
        Command::Soliton(a) => commands::soliton(a, &prov),
        Command::Breather(a) => commands::breather_cmd(a, &prov),
        Command::Nsoliton(a) => commands::nsoliton(a, &prov),
        Command::Scatter(a) => commands::scatter_cmd(a, &prov),
        Command::Roundtrip(a) => commands::roundtrip(a),
        Command::Verify(a) => commands::verify(a),
        Command::Jumps(a) => commands::jumps(a, &prov),
        Command::Evolve(a) => commands::evolve(a, &prov),
        Command::Run(_) if nested => Err(CliError::Config("jobs cannot run other jobs".into())),
        Command::Run(a) => dispatch(config::read_job(&a.config)?, true),
    }
}

fn main() -> ExitCode {
    match init_threads().and_then(|()| dispatch(std::env::args().collect(), false)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
