//! Outage probability, average symbol error probability of binary
//! constellations and ergodic capacity, exact and at high SNR.
//!
//! The high-SNR forms keep the dominant residue of each Mellin–Barnes
//! integrand. When `β > αμ` that is the simple pole at the origin and the
//! metrics decay with diversity order `αμ/2`. When `β < αμ` a double pole at
//! `ζ* = μ - β/α` dominates, giving order `β/2` with a logarithmic factor.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::snrstats::{snr_cdf, SnrModel};
use crate::specfun::{digamma, ln_beta, ln_gamma_pos};

/// Coefficients `(a, b)` of the conditional error probability
/// `(a/2) erfc(√(bγ/2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationCoeffs {
    pub a: f64,
    pub b: f64,
}

impl ModulationCoeffs {
    pub const BPSK: Self = Self { a: 1.0, b: 2.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return domain(format!("modulation coefficients must be positive, got ({a}, {b})"));
        }
        Ok(Self { a, b })
    }
}

impl Default for ModulationCoeffs {
    fn default() -> Self {
        Self::BPSK
    }
}

/// Which residue dominates at high SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BetaGtAlphaMu,
    BetaLeAlphaMu,
}

impl Regime {
    /// Fails with [`Error::Degenerate`] at `β = αμ`, where the two pole
    /// families collide.
    pub fn of(model: &SnrModel) -> Result<Self> {
        let f = model.fading();
        let am = f.alpha * f.mu;
        if (f.beta - am).abs() <= 1e-12 * am {
            return Err(Error::Degenerate(format!("beta = alpha*mu = {am}: triple pole at the origin")));
        }
        Ok(if f.beta > am { Regime::BetaGtAlphaMu } else { Regime::BetaLeAlphaMu })
    }

    /// High-SNR decay exponent of outage and error probability.
    pub fn diversity_order(&self, model: &SnrModel) -> f64 {
        let f = model.fading();
        match self {
            Regime::BetaGtAlphaMu => f.alpha * f.mu / 2.0,
            Regime::BetaLeAlphaMu => f.beta / 2.0,
        }
    }
}

/// Exact metric value with its high-SNR approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub exact: f64,
    pub asymptotic: Option<f64>,
    pub regime: Regime,
}

/// Outage probability `P(Γ < γ_th)`.
pub fn outage(model: &SnrModel, gamma_th: f64) -> Result<f64> {
    snr_cdf(model, gamma_th)
}

/// Which of the two probability metrics a residue belongs to.
#[derive(Clone, Copy)]
enum Kind {
    Outage,
    Asep,
}

/// Non-polar part of the reduced Mellin–Barnes kernel after the double pole
/// `1/(α(ζ - ζ*))²` is split off.
fn ln_residue_kernel(model: &SnrModel, kind: Kind, zeta: f64) -> Result<f64> {
    let f = model.fading();
    // Γ(ζ) Γ(μ+m-ζ) / (μ - ζ), and for ASEP also Γ(1/2 + αμ/2 - αζ/2)
    let mut v = ln_gamma_pos(f.mu + f.m - zeta)? - (f.mu - zeta).ln();
    if zeta > 0.0 {
        v += ln_gamma_pos(zeta)?;
    }
    if let Kind::Asep = kind {
        v += ln_gamma_pos(0.5 + f.alpha * f.mu / 2.0 - f.alpha * zeta / 2.0)?;
    }
    Ok(v)
}

/// Dominant-residue approximation shared by outage and ASEP.
///
/// `ln_pref` multiplies `Σ_k W_k R_k` where `R_k` is the residue of the
/// kernel at the node argument `exp(ln_z_k)`.
fn residue_sum(model: &SnrModel, kind: Kind, ln_pref: f64, ln_z_shift: f64) -> Result<f64> {
    let f = model.fading();
    let regime = Regime::of(model)?;
    let e = f.beta - f.alpha * f.mu;
    let mut total = 0.0;
    match regime {
        Regime::BetaGtAlphaMu => {
            let ln_r = ln_residue_kernel(model, kind, 0.0)? - 2.0 * e.ln();
            for node in model.nodes() {
                total += (node.ln_weight(f.mu) + ln_r + ln_pref).exp();
            }
        }
        Regime::BetaLeAlphaMu => {
            let zs = f.mu - f.beta / f.alpha;
            let ln_r = ln_residue_kernel(model, kind, zs)? - 2.0 * f.alpha.ln();
            for node in model.nodes() {
                let ln_w = node.ln_phi2 - f.c2.ln() + ln_z_shift;
                total += (node.ln_weight(f.mu) + ln_r + ln_pref - zs * ln_w).exp() * (-ln_w);
            }
        }
    }
    Ok(total)
}

/// High-SNR outage approximation.
pub fn outage_asymptote(model: &SnrModel, gamma_th: f64) -> Result<f64> {
    if !(gamma_th > 0.0) {
        return domain(format!("threshold must be positive, got {gamma_th}"));
    }
    let f = model.fading();
    let ln_x = (gamma_th / model.gamma0).ln();
    let ln_pref = model.ln_common() + (2.0 / f.alpha).ln() + f.alpha * f.mu / 2.0 * ln_x;
    residue_sum(model, Kind::Outage, ln_pref, f.alpha / 2.0 * ln_x)
}

/// Exact outage together with its high-SNR approximation.
pub fn outage_asymptotic(model: &SnrModel, gamma_th: f64) -> Result<MetricResult> {
    let regime = Regime::of(model)?;
    Ok(MetricResult {
        exact: outage(model, gamma_th)?,
        asymptotic: Some(outage_asymptote(model, gamma_th)?),
        regime,
    })
}

fn asep_shift(model: &SnrModel, coeffs: ModulationCoeffs) -> f64 {
    (coeffs.b * model.gamma0 / 2.0).ln()
}

fn asep_ln_pref(model: &SnrModel, coeffs: ModulationCoeffs) -> f64 {
    let f = model.fading();
    model.ln_common() + coeffs.a.ln() - 0.5 * PI.ln() - f.alpha.ln() - f.alpha * f.mu / 2.0 * asep_shift(model, coeffs)
}

/// Average symbol error probability for `(a/2) erfc(√(bγ/2))`.
pub fn asep(model: &SnrModel, coeffs: ModulationCoeffs) -> Result<f64> {
    let f = model.fading();
    let shift = asep_shift(model, coeffs);
    let sum = model.node_sum(
        &model.specs().asep,
        |n| n.ln_weight(f.mu),
        |n| n.ln_phi2 - f.c2.ln() - f.alpha / 2.0 * shift,
    )?;
    Ok(sum.value_times(asep_ln_pref(model, coeffs)).clamp(0.0, coeffs.a / 2.0))
}

/// High-SNR ASEP approximation.
pub fn asep_asymptote(model: &SnrModel, coeffs: ModulationCoeffs) -> Result<f64> {
    let f = model.fading();
    residue_sum(model, Kind::Asep, asep_ln_pref(model, coeffs), -f.alpha / 2.0 * asep_shift(model, coeffs))
}

pub fn asep_asymptotic(model: &SnrModel, coeffs: ModulationCoeffs) -> Result<MetricResult> {
    let regime = Regime::of(model)?;
    Ok(MetricResult { exact: asep(model, coeffs)?, asymptotic: Some(asep_asymptote(model, coeffs)?), regime })
}

/// Ergodic capacity `E[log2(1 + Γ)]` in bits/s/Hz.
pub fn capacity(model: &SnrModel) -> Result<f64> {
    let f = model.fading();
    let ln_g0 = model.gamma0.ln();
    let sum = model.node_sum(
        &model.specs().capacity,
        |n| n.ln_weight(f.mu),
        |n| n.ln_phi2 - f.c2.ln() - f.alpha / 2.0 * ln_g0,
    )?;
    let ln_pref = model.ln_common() - LN_2.ln() - f.alpha * f.mu / 2.0 * ln_g0;
    Ok(sum.value_times(ln_pref).max(0.0))
}

/// High-SNR capacity `E[log2 Γ]`.
pub fn capacity_asymptote(model: &SnrModel) -> Result<f64> {
    let f = model.fading();
    let ln_pref = (4.0 * model.config.r_max / (f.alpha * model.config.d0 * LN_2 * f.beta * f.beta)).ln()
        + ln_beta(f.mu, f.m)?
        + f.ln_c1()
        - f.m * f.c2.ln();
    let constant = 2.0 / f.alpha * (digamma(f.mu)? - digamma(f.m)?) - 4.0 / f.beta
        + 2.0 / f.alpha * f.c2.ln()
        + model.gamma0.ln();
    let total: f64 = model
        .nodes()
        .iter()
        .map(|n| (n.ln_density_weight + ln_pref).exp() * (constant - 2.0 / f.alpha * n.ln_phi2))
        .sum();
    Ok(total)
}

pub fn capacity_asymptotic(model: &SnrModel) -> Result<MetricResult> {
    Ok(MetricResult {
        exact: capacity(model)?,
        asymptotic: Some(capacity_asymptote(model)?),
        regime: Regime::of(model)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LinkConfig;
    use crate::mobility::Topology;
    use crate::snrstats::snr_moment;

    const KAPPA_4DB: f64 = 4.0 * std::f64::consts::LN_10 * 1e-5;

    fn db(x: f64) -> f64 {
        10f64.powf(x / 10.0)
    }

    fn fig3(beta: f64, gamma_bar_db: f64) -> SnrModel {
        let cfg = LinkConfig::new(300e9, 1.0, 2.3, 50.0, Topology::TwoD, db(gamma_bar_db), beta, 3.0, 2.5, 1.5).unwrap();
        SnrModel::with_kappa(cfg, KAPPA_4DB).unwrap()
    }

    fn fig4(r_max: f64, gamma_bar_db: f64) -> SnrModel {
        let cfg = LinkConfig::new(300e9, 1.0, 2.5, r_max, Topology::ThreeD, db(gamma_bar_db), 4.0, 2.5, 3.0, 1.01).unwrap();
        SnrModel::with_kappa(cfg, KAPPA_4DB).unwrap()
    }

    #[test]
    fn modulation_presets() {
        assert_eq!(ModulationCoeffs::default(), ModulationCoeffs { a: 1.0, b: 2.0 });
        assert!(ModulationCoeffs::new(0.0, 2.0).is_err());
    }

    #[test]
    fn regime_selection() {
        assert_eq!(Regime::of(&fig3(10.0, 100.0)).unwrap(), Regime::BetaGtAlphaMu);
        assert_eq!(Regime::of(&fig3(3.0, 100.0)).unwrap(), Regime::BetaLeAlphaMu);
        assert!(matches!(Regime::of(&fig3(7.5, 100.0)), Err(Error::Degenerate(_))));
        assert!(matches!(outage_asymptote(&fig3(7.5, 100.0), 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn outage_monotone_in_threshold_and_snr() {
        let model = fig3(10.0, 100.0);
        let mut prev = 0.0;
        for i in 0..8 {
            let p = outage(&model, 10f64.powf(-2.0 + 0.5 * i as f64)).unwrap();
            assert!(p >= prev);
            prev = p;
        }
        let mut prev = 1.0;
        for g in [80.0, 90.0, 100.0, 110.0] {
            let p = outage(&fig3(10.0, g), 1.0).unwrap();
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn asep_limits_and_monotone() {
        let low = asep(&fig3(10.0, 20.0), ModulationCoeffs::BPSK).unwrap();
        assert!((low - 0.5).abs() < 0.02, "{low}");
        let mut prev = 0.5;
        for g in [60.0, 80.0, 100.0, 120.0] {
            let p = asep(&fig3(10.0, g), ModulationCoeffs::BPSK).unwrap();
            assert!(p < prev, "{g} dB: {p}");
            prev = p;
        }
    }

    #[test]
    fn capacity_limits_and_monotone() {
        assert!(capacity(&fig4(10.0, 20.0)).unwrap() < 1e-6);
        let a = capacity(&fig4(10.0, 100.0)).unwrap();
        let b = capacity(&fig4(10.0, 120.0)).unwrap();
        let c = capacity(&fig4(50.0, 120.0)).unwrap();
        assert!(a < b && c < b, "{a} {b} {c}");
    }

    #[test]
    fn capacity_asymptote_matches_moment_derivative() {
        // E[log2 Γ] = d/dn E[Γ^n] at n = 0, divided by ln 2
        let model = fig4(10.0, 120.0);
        let h = 1e-5;
        let fd = (snr_moment(&model, h).unwrap() - snr_moment(&model, -h).unwrap()) / (2.0 * h * LN_2);
        let asym = capacity_asymptote(&model).unwrap();
        assert!((fd - asym).abs() < 1e-6 * asym.abs(), "{fd} vs {asym}");
    }

    #[test]
    fn capacity_asymptote_slope_per_db() {
        let a = capacity_asymptote(&fig4(10.0, 150.0)).unwrap();
        let b = capacity_asymptote(&fig4(10.0, 151.0)).unwrap();
        assert!((b - a - 10f64.log2() / 10.0).abs() < 1e-9);
    }

    #[test]
    fn capacity_asymptote_digamma_term() {
        // μ = m removes the digamma difference and nothing else.
        let mk = |m: f64| {
            let cfg = LinkConfig::new(300e9, 1.0, 2.5, 10.0, Topology::ThreeD, db(120.0), 4.0, 2.5, 3.0, m).unwrap();
            SnrModel::with_kappa(cfg, KAPPA_4DB).unwrap()
        };
        let model = mk(3.0);
        let f = model.fading();
        let without = capacity_asymptote(&model).unwrap();
        assert_eq!(digamma(f.mu).unwrap() - digamma(f.m).unwrap(), 0.0);
        // The node weights carry the full RWP mass, so every constant inside
        // the braces passes through unchanged.
        let mass: f64 = model.nodes().iter().map(|n| n.ln_density_weight.exp()).sum::<f64>()
            * model.config.r_max
            / (2.0 * model.config.d0);
        assert!((mass - 1.0).abs() < 1e-10);
        let expected_shift = 2.0 / f.alpha * (digamma(3.0).unwrap() - digamma(2.0).unwrap()) / LN_2;
        let other = mk(2.0);
        let direct = capacity_asymptote(&other).unwrap();
        // c2 also depends on m; remove its contribution before comparing.
        let c2_shift = 2.0 / f.alpha * (other.fading().c2.ln() - f.c2.ln()) / LN_2;
        assert!((direct - without - expected_shift - c2_shift).abs() < 1e-9, "{direct} {without}");
    }

    #[test]
    fn outage_asymptote_slope_beta_above() {
        let model = fig3(10.0, 100.0);
        let a = outage_asymptote(&model, 1.0).unwrap();
        let b = outage_asymptote(&model.with_gamma_bar(db(110.0)).unwrap(), 1.0).unwrap();
        let slope = (b / a).log10();
        assert!((slope + 3.0 * 2.5 / 2.0).abs() < 1e-9, "{slope}");
    }

    #[test]
    fn asymptotes_approach_exact() {
        let model = fig3(10.0, 170.0);
        let r = asep_asymptotic(&model, ModulationCoeffs::BPSK).unwrap();
        let ratio = r.exact / r.asymptotic.unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "asep ratio {ratio}");
        let r = outage_asymptotic(&model, 1.0).unwrap();
        let ratio = r.exact / r.asymptotic.unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "op ratio {ratio}");
        let r = capacity_asymptotic(&fig4(10.0, 160.0)).unwrap();
        assert!((r.exact - r.asymptotic.unwrap()).abs() < 0.05, "{r:?}");
    }
}
