use boundary_triples::job::{run_file, Format, RunOptions};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Boundary-triple computations driven by JSON job files.
#[derive(Parser)]
#[command(name = "btriple", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job specification and write results.json plus artifacts.
    Run {
        /// Job specification (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Directory for results.json, CSV dumps and plots.
        #[arg(long, default_value = ".")]
        output: PathBuf,
        /// Relative acceptance tolerance for roots and checks.
        #[arg(long)]
        tol: Option<f64>,
        /// Number of scan grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Worker threads for parallel scans.
        #[arg(long)]
        threads: Option<usize>,
        /// Write SVG plots of scans and classification constants.
        #[arg(long)]
        plot: bool,
        /// Also write the result tables as CSV.
        #[arg(long, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let Command::Run { input, output, tol, grid, threads, plot, format } = Cli::parse().command;
    let opts = RunOptions { output, tol, grid, threads, plot, format };
    let outcome = run_file(&input, &opts);
    if let Some(err) = outcome.document.get("error") {
        eprintln!("btriple: {}", err["message"].as_str().unwrap_or("failed"));
    }
    for f in &outcome.files {
        println!("{}", f.display());
    }
    ExitCode::from(outcome.exit_code as u8)
}
