//! Configuration files, command-line overrides and the resolved run description.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use thz_alphaf::mobility::Topology;

use crate::CliError;

/// Environment variable naming an absorption table that replaces the one in
/// the config file.
pub const ABSORPTION_ENV: &str = "THZ_ABSORPTION_PATH";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub link: LinkSection,
    #[serde(default)]
    pub fading: FadingSection,
    #[serde(default)]
    pub misalignment: MisalignmentSection,
    #[serde(default)]
    pub absorption: AbsorptionSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub modulation: ModulationSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub frequency_ghz: Option<f64>,
    pub d0: Option<f64>,
    pub delta: Option<f64>,
    pub r_max: Option<f64>,
    pub topology: Option<Topology>,
    pub gamma_bar_db: Option<f64>,
    pub gamma_th_db: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
    pub m: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MisalignmentSection {
    pub beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorptionSection {
    /// CSV table of `frequency_GHz,kappa0_dB_per_km`, relative to the config file.
    pub table: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub nodes: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationSection {
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(path, e))?;
        let mut cfg: ConfigFile = toml::from_str(&text).map_err(|e| CliError::config(path, e))?;
        if let Some(table) = cfg.absorption.table.take() {
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.absorption.table = Some(base.join(table));
        }
        Ok(cfg)
    }
}

/// Flags that replace individual config values.
#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    #[arg(long)]
    pub frequency_ghz: Option<f64>,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub topology: Option<Topology>,
    /// Reference SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_bar_db: Option<f64>,
    /// Outage threshold, and the evaluation point of pdf/cdf, in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_th_db: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Gauss-Legendre order of the distance average.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Absorption table CSV.
    #[arg(long)]
    pub absorption: Option<PathBuf>,
    #[arg(long)]
    pub mod_a: Option<f64>,
    #[arg(long)]
    pub mod_b: Option<f64>,
    /// MGF argument in dB (default: 1/γ̄).
    #[arg(long, allow_hyphen_values = true)]
    pub s_db: Option<f64>,
    /// Moment order.
    #[arg(long, allow_hyphen_values = true)]
    pub order: Option<f64>,
}

/// Fully resolved model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub frequency_ghz: f64,
    pub d0: f64,
    pub delta: f64,
    pub r_max: f64,
    pub topology: Topology,
    pub gamma_bar_db: f64,
    pub gamma_th_db: f64,
    pub alpha: f64,
    pub mu: f64,
    pub m: f64,
    pub beta: f64,
    pub nodes: usize,
    /// `None` selects the bundled standard-atmosphere table.
    pub absorption_table: Option<PathBuf>,
    pub mod_a: f64,
    pub mod_b: f64,
    pub s_db: Option<f64>,
    pub order: f64,
}

impl Params {
    pub fn resolve(file: &ConfigFile, o: &Overrides, env_table: Option<PathBuf>) -> Self {
        let l = &file.link;
        Params {
            frequency_ghz: o.frequency_ghz.or(l.frequency_ghz).unwrap_or(300.0),
            d0: o.d0.or(l.d0).unwrap_or(1.0),
            delta: o.delta.or(l.delta).unwrap_or(2.0),
            r_max: o.r_max.or(l.r_max).unwrap_or(50.0),
            topology: o.topology.or(l.topology).unwrap_or(Topology::OneD),
            gamma_bar_db: o.gamma_bar_db.or(l.gamma_bar_db).unwrap_or(150.0),
            gamma_th_db: o.gamma_th_db.or(l.gamma_th_db).unwrap_or(0.0),
            alpha: o.alpha.or(file.fading.alpha).unwrap_or(3.0),
            mu: o.mu.or(file.fading.mu).unwrap_or(3.0),
            m: o.m.or(file.fading.m).unwrap_or(1.5),
            beta: o.beta.or(file.misalignment.beta).unwrap_or(3.0),
            nodes: o.nodes.or(file.quadrature.nodes).unwrap_or(thz_alphaf::snrstats::DEFAULT_ORDER),
            absorption_table: o.absorption.clone().or(env_table).or_else(|| file.absorption.table.clone()),
            mod_a: o.mod_a.or(file.modulation.a).unwrap_or(1.0),
            mod_b: o.mod_b.or(file.modulation.b).unwrap_or(2.0),
            s_db: o.s_db,
            order: o.order.unwrap_or(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Reference SNR γ̄ in dB.
    #[value(name = "snr_db", alias = "snr")]
    SnrDb,
    /// γ̄/γ_th in dB, threshold held fixed.
    #[value(name = "ratio_db", alias = "ratio")]
    RatioDb,
    /// Carrier frequency in GHz.
    #[value(name = "frequency_ghz", alias = "frequency")]
    FrequencyGhz,
    /// Threshold or evaluation point γ in dB.
    #[value(name = "gamma_db", alias = "gamma")]
    GammaDb,
    /// MGF argument s in dB.
    #[value(name = "s_db", alias = "s")]
    SDb,
    /// Moment order.
    Order,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::RatioDb => "ratio_db",
            Axis::FrequencyGhz => "frequency_ghz",
            Axis::GammaDb => "gamma_db",
            Axis::SDb => "s_db",
            Axis::Order => "order",
        }
    }

    /// Current value of this axis in `p`.
    pub fn value(self, p: &Params) -> f64 {
        match self {
            Axis::SnrDb => p.gamma_bar_db,
            Axis::RatioDb => p.gamma_bar_db - p.gamma_th_db,
            Axis::FrequencyGhz => p.frequency_ghz,
            Axis::GammaDb => p.gamma_th_db,
            Axis::SDb => p.s_db.unwrap_or(-p.gamma_bar_db),
            Axis::Order => p.order,
        }
    }

    /// Copy of `p` with this axis set to `x`.
    pub fn apply(self, p: &Params, x: f64) -> Params {
        let mut q = p.clone();
        match self {
            Axis::SnrDb => q.gamma_bar_db = x,
            Axis::RatioDb => q.gamma_bar_db = p.gamma_th_db + x,
            Axis::FrequencyGhz => q.frequency_ghz = x,
            Axis::GammaDb => q.gamma_th_db = x,
            Axis::SDb => q.s_db = Some(x),
            Axis::Order => q.order = x,
        }
        q
    }

    /// Whether moving along this axis only rescales the SNR.
    pub fn is_snr_scale(self) -> bool {
        matches!(self, Axis::SnrDb | Axis::RatioDb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum McMetric {
    Op,
    Asep,
    Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Op,
    Asep,
    Capacity,
    Pdf,
    Cdf,
    Mgf,
    Moment,
    Mc(McMetric),
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Op => "op",
            Command::Asep => "asep",
            Command::Capacity => "capacity",
            Command::Pdf => "pdf",
            Command::Cdf => "cdf",
            Command::Mgf => "mgf",
            Command::Moment => "moment",
            Command::Mc(_) => "mc",
        }
    }

    fn has_asymptote(self) -> bool {
        matches!(self, Command::Op | Command::Asep | Command::Capacity | Command::Cdf)
    }

    fn allows_axis(self, axis: Axis) -> bool {
        match axis {
            Axis::SnrDb | Axis::FrequencyGhz => true,
            Axis::RatioDb | Axis::GammaDb => {
                matches!(self, Command::Op | Command::Pdf | Command::Cdf | Command::Mc(McMetric::Op))
            }
            Axis::SDb => self == Command::Mgf,
            Axis::Order => self == Command::Moment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl std::str::FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts[..] else {
            return Err(format!("expected start:stop:points, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let spec = SweepSpec { start: num(start)?, stop: num(stop)?, points: parse_count(points)? };
        if spec.start >= spec.stop || spec.start.is_nan() || spec.stop.is_nan() {
            return Err(format!("sweep start {} must be below stop {}", spec.start, spec.stop));
        }
        if spec.points < 2 {
            return Err(format!("sweep needs at least 2 points, got {}", spec.points));
        }
        Ok(spec)
    }
}

/// Parse a positive count, accepting forms like `1e6`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v < 1.0 || v.fract() != 0.0 || v > 1e15 {
        return Err(format!("{s:?} is not a positive whole number"));
    }
    Ok(v as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSpec {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Everything needed to reproduce one output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub tool_version: String,
    pub command: Command,
    pub axis: Axis,
    pub sweep: Option<SweepSpec>,
    pub asymptotic: bool,
    pub mc: Option<McSpec>,
    pub params: Params,
}

impl RunSpec {
    /// Reject combinations the command cannot evaluate.
    pub fn check(&self) -> Result<(), CliError> {
        let name = self.command.name();
        if !self.command.allows_axis(self.axis) {
            return Err(CliError::Usage(format!("axis {} is not available for {name}", self.axis.column())));
        }
        if self.asymptotic && !self.command.has_asymptote() {
            return Err(CliError::Usage(format!("{name} has no asymptotic form")));
        }
        if self.command == Command::Pdf && self.mc.is_some() {
            return Err(CliError::Usage("pdf has no Monte Carlo estimator".into()));
        }
        if matches!(self.command, Command::Mc(_)) && self.mc.is_none() {
            return Err(CliError::Usage("mc needs a sample count".into()));
        }
        Ok(())
    }

    /// Axis values of every output row.
    pub fn axis_values(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => s.values(),
            None => vec![self.axis.value(&self.params)],
        }
    }
}
