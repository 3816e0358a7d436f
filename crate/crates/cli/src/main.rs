use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use commands::{exit_code, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "sobolev-flow",
    version,
    about = "Sobolev gradient flow of closed planar curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scalar functionals of a curve snapshot.
    Evaluate {
        curve: PathBuf,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the flow for one or more configuration files.
    Flow(commands::flow::FlowArgs),
    /// Sample the gradient inequality around an equilibrium.
    Probe(commands::probe::ProbeArgs),
    /// Isoperimetry report for a finished run directory.
    Report {
        run_dir: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Defaults to `RUN_DIR/report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate { curve, json } => commands::evaluate::run(&curve, json).map(|_| EXIT_OK),
        Command::Flow(args) => commands::flow::run(&args),
        Command::Probe(args) => commands::probe::run(&args).map(|_| EXIT_OK),
        Command::Report { run_dir, n, m, out } => {
            commands::report::run(&run_dir, n, m, out.as_deref()).map(|_| EXIT_OK)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
