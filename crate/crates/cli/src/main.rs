//! `thz-alphaf`: sweeps of exact, asymptotic and Monte Carlo link metrics.

mod config;
mod run;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use config::{Axis, Command, ConfigFile, McMetric, McSpec, Overrides, Params, RunSpec, SweepSpec, ABSORPTION_ENV};
use run::Row;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {msg}", path.display())]
    Config { path: PathBuf, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("evaluation failed at {axis} = {value}: {source}")]
    Point { axis: &'static str, value: f64, source: thz_alphaf::Error },
}

impl CliError {
    pub fn config(path: &Path, e: impl Display) -> Self {
        CliError::Config { path: path.to_path_buf(), msg: e.to_string() }
    }

    fn exit_code(&self) -> u8 {
        use thz_alphaf::Error as E;
        match self {
            CliError::Point { source: E::Convergence(_) | E::Consistency { .. } | E::PoleOnContour(_), .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "thz-alphaf", version, about = "THz link metrics over alpha-F fading with pointing error and RWP mobility")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Outage probability at the threshold `gamma_th_db`.
    Op(RunArgs),
    /// Average symbol error probability for the (a, b) binary family.
    Asep(RunArgs),
    /// Average capacity in bits/s/Hz.
    Capacity(RunArgs),
    /// SNR density at `gamma_th_db`.
    Pdf(RunArgs),
    /// SNR distribution function at `gamma_th_db`.
    Cdf(RunArgs),
    /// SNR moment generating function at `s_db`.
    Mgf(RunArgs),
    /// Real-order SNR moment.
    Moment(RunArgs),
    /// Monte Carlo estimate of one metric.
    Mc {
        #[arg(long, value_enum, default_value = "op")]
        metric: McMetric,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rerun from a JSON sidecar.
    Replay {
        sidecar: PathBuf,
        /// Output CSV (default: `<sidecar stem>.replay.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML parameter file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sweep as `start:stop:points`.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<SweepSpec>,
    #[arg(long, value_enum, default_value = "snr_db")]
    axis: Axis,
    /// Add the high-SNR asymptote column.
    #[arg(long)]
    asymptotic: bool,
    /// Monte Carlo sample count, e.g. `1e6`.
    #[arg(long, value_parser = config::parse_count)]
    mc: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo worker streams (default: available cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV; the sidecar goes next to it with a `.json` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

impl RunArgs {
    fn into_spec(self, command: Command) -> Result<(RunSpec, PathBuf), CliError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let env_table = std::env::var_os(ABSORPTION_ENV).map(PathBuf::from);
        let params = Params::resolve(&file, &self.overrides, env_table);
        let mc_samples = match command {
            Command::Mc(_) => Some(self.mc.unwrap_or(1_000_000)),
            _ => self.mc,
        };
        let workers = self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let spec = RunSpec {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            axis: self.axis,
            sweep: self.sweep,
            asymptotic: self.asymptotic,
            mc: mc_samples.map(|samples| McSpec { samples, seed: self.seed, workers }),
            params,
        };
        let out = self.out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name())));
        Ok((spec, out))
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn write_outputs(spec: &RunSpec, rows: &[Row], out: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(out).map_err(|e| CliError::config(out, e))?;
    let io = |e: csv::Error| CliError::config(out, e);
    w.write_record([spec.axis.column(), "exact", "asymptotic", "mc", "mc_stderr"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.axis.to_string(),
            fmt_opt(r.exact),
            fmt_opt(r.asymptotic),
            fmt_opt(r.mc.map(|m| m.value)),
            fmt_opt(r.mc.map(|m| m.stderr)),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::config(out, e))?;

    let sidecar = out.with_extension("json");
    let json = serde_json::to_string_pretty(spec).map_err(|e| CliError::config(&sidecar, e))?;
    std::fs::write(&sidecar, json + "\n").map_err(|e| CliError::config(&sidecar, e))
}

fn load_sidecar(path: &Path) -> Result<RunSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(path, e))
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let (spec, out) = match cli.command {
        Cmd::Op(a) => a.into_spec(Command::Op)?,
        Cmd::Asep(a) => a.into_spec(Command::Asep)?,
        Cmd::Capacity(a) => a.into_spec(Command::Capacity)?,
        Cmd::Pdf(a) => a.into_spec(Command::Pdf)?,
        Cmd::Cdf(a) => a.into_spec(Command::Cdf)?,
        Cmd::Mgf(a) => a.into_spec(Command::Mgf)?,
        Cmd::Moment(a) => a.into_spec(Command::Moment)?,
        Cmd::Mc { metric, run } => run.into_spec(Command::Mc(metric))?,
        Cmd::Replay { sidecar, out } => {
            let spec = load_sidecar(&sidecar)?;
            let out = out.unwrap_or_else(|| sidecar.with_extension("replay.csv"));
            (spec, out)
        }
    };
    let rows = run::execute(&spec)?;
    write_outputs(&spec, &rows, &out)?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
