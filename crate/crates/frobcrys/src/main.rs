use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frobcrys::{run_config, table, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "frobcrys", version, about = "Run a frobcrys scenario config and emit a report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config.
    Run {
        config: PathBuf,
        /// Write the output here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest filtered-piece dimension a scenario may build.
        #[arg(long)]
        cap_dim: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn fail(err: CliError, config: &std::path::Path) -> ExitCode {
    match &err {
        CliError::Schema { .. } => eprintln!("error: {}: {err}", config.display()),
        _ => eprintln!("error: {err}"),
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let Command::Run { config, out, format, seed, cap_dim } = Cli::parse().command;
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return fail(CliError::Io(e), &config),
    };
    let report = match run_config(&text, RunOptions { seed, cap_dim }) {
        Ok(r) => r,
        Err(e) => return fail(e, &config),
    };
    let body = match format {
        Format::Json => report.to_json_text() + "\n",
        Format::Csv => table::to_csv(&report.table),
    };
    let written = match &out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        return fail(CliError::Io(e), &config);
    }
    if report.all_met() {
        ExitCode::SUCCESS
    } else {
        for e in report.failed() {
            eprintln!("expectation failed: {}: expected {}, got {}", e.name, e.expected, e.actual);
        }
        ExitCode::from(1)
    }
}
