//! Physical-layer parameterization: α-F fading constants, pointing-error
//! statistics, path loss and molecular absorption.
//!
//! The α-F scale `λ` is pinned by the normalization `E[H_p² H_f²] = 1`.
//! The pointing loss has `E[Z] = β²/(β+2)²`, so the fading power must carry
//! `E[X] = (β+2)²/β²`. This choice makes the fading constant `K` of the α-F
//! density coincide with `c2`, and `X^{α/2}/c2` is then beta-prime(μ, m).

use std::f64::consts::{LN_10, PI};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mobility::Topology;
use crate::specfun::{beta_fn, ln_beta};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Beam misalignment severity `β = w_B²/σ_θ²`; smaller is worse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisalignmentParams {
    pub beta: f64,
}

impl MisalignmentParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 2.0) || !beta.is_finite() {
            return domain(format!("misalignment beta must exceed 2, got {beta}"));
        }
        Ok(Self { beta })
    }

    /// `E[Z] = β²/(β+2)²`.
    pub fn mean_power(&self) -> f64 {
        let b = self.beta;
        b * b / ((b + 2.0) * (b + 2.0))
    }
}

/// α-F fading parameters and the derived constants of the composite
/// fading/pointing density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    pub alpha: f64,
    pub mu: f64,
    pub m: f64,
    /// Misalignment parameter the constants were derived for.
    pub beta: f64,
    /// `E[H_f²] = (β+2)²/β²`.
    pub mean_power: f64,
    pub lambda_scale: f64,
    pub c1: f64,
    pub c2: f64,
}

impl FadingParams {
    /// Natural log of `c1`, computed without forming `c2^m`.
    pub fn ln_c1(&self) -> f64 {
        let b = self.beta;
        (b * b * self.alpha / 8.0).ln() - ln_beta(self.mu, self.m).unwrap_or(f64::NAN)
            + self.m * self.c2.ln()
    }
}

/// `(c1, c2)` for an explicit scale `λ`.
///
/// `c2 = (m-1)(β+2)^α / (λ^{α/2} μ β^α)` and
/// `c1 = β²α/(8 B(μ,m)) · c2^m`.
pub fn shape_constants(alpha: f64, mu: f64, m: f64, beta: f64, lambda: f64) -> Result<(f64, f64)> {
    let c2 = (m - 1.0) * (beta + 2.0).powf(alpha) / (lambda.powf(alpha / 2.0) * mu * beta.powf(alpha));
    let c1 = beta * beta * alpha / (8.0 * beta_fn(mu, m)?) * c2.powf(m);
    Ok((c1, c2))
}

/// `λ = ((m-1)/μ)^{2/α} · B(μ + 2/α, m - 2/α) / B(μ, m)`.
pub fn lambda_scale(alpha: f64, mu: f64, m: f64) -> Result<f64> {
    let two_over_alpha = 2.0 / alpha;
    let ratio = (ln_beta(mu + two_over_alpha, m - two_over_alpha)? - ln_beta(mu, m)?).exp();
    Ok(((m - 1.0) / mu).powf(two_over_alpha) * ratio)
}

/// Derive `λ`, `c1`, `c2` from `(α, μ, m, β)`.
///
/// Requires `m > max(2/α, 1)` and `β > 2`.
pub fn derive_constants(alpha: f64, mu: f64, m: f64, beta: f64) -> Result<FadingParams> {
    if !(alpha > 0.0 && mu > 0.0) || !alpha.is_finite() || !mu.is_finite() {
        return domain(format!("alpha and mu must be positive, got ({alpha}, {mu})"));
    }
    let floor = (2.0 / alpha).max(1.0);
    if !(m > floor) || !m.is_finite() {
        return domain(format!("shadowing m = {m} must exceed max(2/alpha, 1) = {floor}"));
    }
    let mis = MisalignmentParams::new(beta)?;
    let two_over_alpha = 2.0 / alpha;
    let lambda = lambda_scale(alpha, mu, m)?;
    // (m-1) cancels between λ^{α/2} and the numerator of c2; use the
    // cancelled form so m -> 1+ stays well conditioned.
    let ln_ratio = ln_beta(mu + two_over_alpha, m - two_over_alpha)? - ln_beta(mu, m)?;
    let ln_c2 = alpha * ((beta + 2.0) / beta).ln() - alpha / 2.0 * ln_ratio;
    let c2 = ln_c2.exp();
    let ln_c1 = (beta * beta * alpha / 8.0).ln() - ln_beta(mu, m)? + m * ln_c2;
    Ok(FadingParams {
        alpha,
        mu,
        m,
        beta,
        mean_power: 1.0 / mis.mean_power(),
        lambda_scale: lambda,
        c1: ln_c1.exp(),
        c2,
    })
}

/// Pointing-error power density `f_Z(z) = -(β²/4) ln(z) z^{β/2-1}` on `(0, 1)`.
pub fn pointing_pdf(z: f64, beta: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return domain(format!("pointing loss {z} outside (0, 1)"));
    }
    Ok(-(beta * beta / 4.0) * z.ln() * z.powf(beta / 2.0 - 1.0))
}

/// α-F fading power density at `x > 0`, normalized to `E[X] = (β+2)²/β²`.
pub fn alphaf_power_pdf(x: f64, fading: &FadingParams) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("fading power {x} must be positive"));
    }
    let FadingParams { alpha, mu, m, c2, .. } = *fading;
    let ln_pdf = (alpha / 2.0).ln() - ln_beta(mu, m)? + m * c2.ln() + (alpha * mu / 2.0 - 1.0) * x.ln()
        - (m + mu) * (x.powf(alpha / 2.0) + c2).ln();
    Ok(ln_pdf.exp())
}

/// Specific-attenuation samples `(frequency [Hz], κ0 [dB/km])`, ascending in
/// frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable {
    samples: Vec<(f64, f64)>,
}

const BUNDLED_TABLE: &str = include_str!("../data/absorption_std_atmosphere.csv");

impl AbsorptionTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Table("no samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Table(format!(
                    "frequencies must be strictly increasing ({} Hz then {} Hz)",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(f, k)) = samples.iter().find(|(f, k)| !(*k >= 0.0) || !f.is_finite() || !k.is_finite()) {
            return Err(Error::Table(format!("invalid sample ({f} Hz, {k} dB/km)")));
        }
        Ok(Self { samples })
    }

    /// Table with zero absorption over `[lo_hz, hi_hz]`.
    pub fn transparent(lo_hz: f64, hi_hz: f64) -> Self {
        Self { samples: vec![(lo_hz, 0.0), (hi_hz, 0.0)] }
    }

    /// Standard-atmosphere table shipped with the crate (50–1000 GHz).
    pub fn bundled() -> Self {
        Self::from_csv_reader(BUNDLED_TABLE.as_bytes()).expect("bundled absorption table is valid")
    }

    /// Two-column CSV `frequency_GHz,kappa0_dB_per_km` with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::Table(e.to_string()))?.clone();
        if header.len() != 2 || header.iter().any(|h| h.parse::<f64>().is_ok()) {
            return Err(Error::Table(format!(
                "expected header 'frequency_GHz,kappa0_dB_per_km', found '{}'",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table(e.to_string()))?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Table(format!("row {}: cannot parse column {}", line + 2, i + 1)))
            };
            samples.push((parse(0)? * 1e9, parse(1)?));
        }
        Self::new(samples)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file).map_err(|e| match e {
            Error::Table(msg) => Error::Table(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Frequency range covered, in Hz.
    pub fn range(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    /// κ0 (dB/km) at `f_hz`, linearly interpolated.
    pub fn kappa0_db_per_km(&self, f_hz: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(f_hz >= lo && f_hz <= hi) {
            return Err(Error::Range { freq_ghz: f_hz * 1e-9, lo_ghz: lo * 1e-9, hi_ghz: hi * 1e-9 });
        }
        let idx = self.samples.partition_point(|&(f, _)| f <= f_hz);
        if idx == self.samples.len() {
            return Ok(self.samples[idx - 1].1);
        }
        let (f0, k0) = self.samples[idx - 1];
        let (f1, k1) = self.samples[idx];
        Ok(k0 + (k1 - k0) * (f_hz - f0) / (f1 - f0))
    }
}

/// Molecular absorption coefficient `κ(f) = ln(10) · 1e-5 · κ0(f)` in m⁻¹.
pub fn kappa_of_f(table: &AbsorptionTable, f_hz: f64) -> Result<f64> {
    Ok(LN_10 * 1e-5 * table.kappa0_db_per_km(f_hz)?)
}

/// Link geometry, propagation and channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub frequency_hz: f64,
    /// Reference distance `d0` in meters.
    pub d0: f64,
    /// Path-loss exponent `δ`.
    pub delta: f64,
    /// Maximum transmitter–receiver separation `R_M` in meters.
    pub r_max: f64,
    pub topology: Topology,
    /// Reference SNR `P_t G_0 / σ_w²`, linear.
    pub gamma_bar: f64,
    pub misalignment: MisalignmentParams,
    pub fading: FadingParams,
}

impl LinkConfig {
    /// Build a configuration, deriving the fading constants for `beta`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        frequency_hz: f64,
        d0: f64,
        delta: f64,
        r_max: f64,
        topology: Topology,
        gamma_bar: f64,
        beta: f64,
        alpha: f64,
        mu: f64,
        m: f64,
    ) -> Result<Self> {
        let cfg = LinkConfig {
            frequency_hz,
            d0,
            delta,
            r_max,
            topology,
            gamma_bar,
            misalignment: MisalignmentParams::new(beta)?,
            fading: derive_constants(alpha, mu, m, beta)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 2.0 && self.delta <= 6.0) {
            return domain(format!("path-loss exponent {} outside [2, 6]", self.delta));
        }
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return domain(format!("maximum distance must be positive, got {}", self.r_max));
        }
        if !(self.d0 > 0.0) || !self.d0.is_finite() {
            return domain(format!("reference distance must be positive, got {}", self.d0));
        }
        if !(self.gamma_bar > 0.0) || !self.gamma_bar.is_finite() {
            return domain(format!("reference SNR must be positive, got {}", self.gamma_bar));
        }
        if !(self.frequency_hz > 0.0) || !self.frequency_hz.is_finite() {
            return domain(format!("frequency must be positive, got {}", self.frequency_hz));
        }
        MisalignmentParams::new(self.misalignment.beta)?;
        if self.fading.beta != self.misalignment.beta {
            return domain(format!(
                "fading constants derived for beta = {} but misalignment beta = {}",
                self.fading.beta, self.misalignment.beta
            ));
        }
        Ok(())
    }

    pub fn with_gamma_bar(mut self, gamma_bar: f64) -> Self {
        self.gamma_bar = gamma_bar;
        self
    }

    /// Carrier wavelength in meters.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }
}

/// `γ0 = γ̄ (λ0/(4π d0))² exp(κ(f) d0)`.
pub fn gamma0_of(config: &LinkConfig, table: &AbsorptionTable) -> Result<f64> {
    let kappa = kappa_of_f(table, config.frequency_hz)?;
    let free_space = config.wavelength() / (4.0 * PI * config.d0);
    Ok(config.gamma_bar * free_space * free_space * (kappa * config.d0).exp())
}
