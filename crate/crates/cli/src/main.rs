use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use esdg::TolPair;
use esdg_cli::commands::{self, CliError};
use esdg_cli::{DiagnoseConfig, RunConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "esdg", version, about = "Entropy stable DG experiments for the 2D Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute and relative integrator tolerance (overrides the config).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation.
    Run(Common),
    /// Crash-time matrix over variants, degrees, meshes and Atwood numbers.
    Sweep(Common),
    /// Entropy-projection gap metrics of the 1D illustration state.
    DiagnoseEp(Common),
    /// Run a periodic problem and write power spectra.
    Spectra(Common),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn required(c: &Common) -> Result<String, CliError> {
    let path = c.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    read(path)
}

fn tol(c: &Common) -> Result<Option<TolPair>, CliError> {
    c.tol
        .map(|t| TolPair::uniform(t).map_err(|e| CliError::Usage(format!("--tol: {e}"))))
        .transpose()
}

fn run_config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::parse(&required(c)?)?;
    if let Some(out) = &c.out {
        cfg.out_dir = out.clone();
    }
    if let Some(t) = tol(c)? {
        cfg.tol = t;
    }
    Ok(cfg)
}

fn print_run(outcome: &commands::RunOutcome) {
    let r = &outcome.report;
    println!(
        "end_time = {:.6} crashed = {} cause = {} steps = {} wall = {:.1}s",
        r.end_time, r.crashed, r.crash_cause, r.steps_accepted, outcome.wall_time
    );
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(c) => print_run(&commands::run(&run_config(&c)?)?),
        Command::Spectra(c) => print_run(&commands::spectra(&run_config(&c)?)?),
        Command::Sweep(c) => {
            let mut cfg = SweepConfig::parse(&required(&c)?)?;
            if let Some(out) = &c.out {
                cfg.out_dir = out.clone();
            }
            if let Some(t) = tol(&c)? {
                cfg.tol = t;
            }
            let rows = commands::sweep(&cfg, commands::sweep_workers()?)?;
            println!("{} rows written to {}", rows.len(), cfg.out_dir.join("sweep.csv").display());
        }
        Command::DiagnoseEp(c) => {
            let mut cfg = match &c.config {
                Some(p) => DiagnoseConfig::parse(&read(p)?)?,
                None => DiagnoseConfig::default(),
            };
            if let Some(out) = &c.out {
                cfg.out_dir = out.clone();
            }
            if c.tol.is_some() {
                return Err(CliError::Usage("diagnose-ep does not integrate; --tol does not apply".into()));
            }
            for r in commands::diagnose_ep(&cfg)? {
                println!("k = {} p_min = {} interface_jump = {:e}", r.k, r.p_min, r.interface_jump);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
