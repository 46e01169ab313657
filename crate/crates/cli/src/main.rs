mod args;
mod commands;
mod output;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use output::{usage, UsageError};

/// 2 for bad input or flags, 1 for failures inside a computation.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<pairrank_core::Error>() {
            return match e {
                pairrank_core::Error::NotConverged { .. } | pairrank_core::Error::BootstrapExhausted { .. } => 1,
                _ => 2,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<UsageError>() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return usage("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting worker threads")?;
    }
    match &cli.command {
        Command::Aggregate(a) => commands::aggregate(a),
        Command::Compare(a) => commands::compare(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Plot(a) => commands::plot(a),
        Command::Scan(a) => commands::scan(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
