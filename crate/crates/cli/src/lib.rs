//! Command-line front end: parameter sweeps as CSV/TSV tables and the
//! Fock-oracle verification report.

pub mod commands;
pub mod grid;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_eof_decay, cmd_eof_pure, cmd_oracle_check, cmd_teleport, Level};
use crate::grid::{parse_value, Axis, AxisRange, SweepGrid};
use crate::output::{Format, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] ecs_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "ecs",
    version,
    about = "Entangled coherent states: entanglement sweeps, teleportation, oracle checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement of formation of the pure state.
    EofPure(SweepArgs),
    /// Entanglement of formation after vacuum decay.
    EofDecay(SweepArgs),
    /// Success probability and mean fidelity of one-bit teleportation.
    Teleport(SweepArgs),
    /// Cross-check closed forms against the truncated Fock-space oracle.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sets both amplitudes.
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    /// Input-state amplitude for teleportation.
    #[arg(long = "alpha-prime", value_parser = parse_value)]
    pub alpha_prime: Option<f64>,
    /// Relative phase; accepts forms like `pi/2`.
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Degree of decay `sqrt(1 - exp(-gamma t))`.
    #[arg(long, value_parser = parse_value)]
    pub d: Option<f64>,
    #[arg(long = "gamma-t", value_parser = parse_value)]
    pub gamma_t: Option<f64>,
    /// Swept axis, repeatable up to twice.
    #[arg(long = "grid", value_name = "AXIS=START:STOP:STEP")]
    pub grid: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    pub level: Level,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number-basis truncation per mode.
    #[arg(long = "fock-dim", default_value_t = ecs_core::oracle::DEFAULT_DIM)]
    pub fock_dim: usize,
    /// Monte-Carlo samples (default: 2000 fast, 10000 full).
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SweepArgs {
    pub fn sweep_grid(&self) -> Result<SweepGrid, CliError> {
        let axes = self.grid.iter().map(|g| g.parse::<AxisRange>()).collect::<Result<Vec<_>, _>>()?;
        let fixed = [
            (Axis::Alpha, self.alpha),
            (Axis::Alpha1, self.alpha1),
            (Axis::Alpha2, self.alpha2),
            (Axis::AlphaPrime, self.alpha_prime),
            (Axis::Phi, self.phi),
            (Axis::D, self.d),
            (Axis::GammaT, self.gamma_t),
        ]
        .into_iter()
        .filter_map(|(a, v)| v.map(|v| (a, v)))
        .collect();
        SweepGrid::new(axes, fixed)
    }
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Success,
    OracleFailure,
}

fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::InvalidArgument("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::InvalidArgument(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn emit(out: &OutputArgs, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<RunStatus, CliError> {
    match cli.command {
        Command::EofPure(a) => run_sweep(&a, cmd_eof_pure),
        Command::EofDecay(a) => run_sweep(&a, cmd_eof_decay),
        Command::Teleport(a) => run_sweep(&a, cmd_teleport),
        Command::OracleCheck(a) => {
            let report = with_workers(a.output.workers, || cmd_oracle_check(a.level, a.seed, a.fock_dim, a.samples))?;
            emit(&a.output, |w| writeln!(w, "{report}"))?;
            Ok(if report.hard_failures() == 0 { RunStatus::Success } else { RunStatus::OracleFailure })
        }
    }
}

fn run_sweep(args: &SweepArgs, cmd: fn(&SweepGrid) -> Result<Table, CliError>) -> Result<RunStatus, CliError> {
    let grid = args.sweep_grid()?;
    let table = with_workers(args.output.workers, || cmd(&grid))??;
    emit(&args.output, |w| table.write_to(w, args.output.format))?;
    Ok(RunStatus::Success)
}
