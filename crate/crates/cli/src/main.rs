use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use radial_psh_cli::{run_file, Options};

/// Radial plurisubharmonic experiments from scenario files.
#[derive(Parser)]
#[command(name = "radpsh", version)]
struct Cli {
    #[command(subcommand)]
    command: Mode,
    /// Relative tolerance for the invariant checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Point count of default grids.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Mode {
    /// Run one scenario.
    Run { file: PathBuf },
    /// Run a scenario with one ranged parameter, one row per value.
    Sweep { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = Options { tol: cli.tol, out: cli.out, grid: cli.grid };
    let (file, sweeping) = match &cli.command {
        Mode::Run { file } => (file, false),
        Mode::Sweep { file } => (file, true),
    };
    match run_file(file, &options, sweeping) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("radpsh: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
