//! Exact SNR statistics: density, distribution, moment generating function
//! and real-order moments.
//!
//! Conditioned on the normalized distance `d`, the SNR is
//! `Γ = γ0 (d-1)^{-δ} e^{-κ d0 d} Z X`. The product `Z X` has a Fox H
//! density, and averaging over the RWP law with an `N`-point Gauss–Legendre
//! rule leaves a sum of `N` Fox H terms per statistic. The RWP polynomial
//! terms are folded into one weight per node, so the term count does not grow
//! with the topology.

use serde::Serialize;

use crate::channel::{gamma0_of, kappa_of_f, AbsorptionTable, FadingParams, LinkConfig};
use crate::error::{domain, Error, Result};
use crate::foxh::{evaluate_scaled, make_spec, ContourConfig, FoxHSpec};
use crate::mobility::{gauss_legendre, kernel_vectors, ln_phi_kernel, rwp_pdf, QuadratureRule, TopologyParams};
use crate::specfun::{ln_gamma_pos, ln_gamma_real_signed};

/// Gauss–Legendre order used unless overridden.
pub const DEFAULT_ORDER: usize = 30;

/// Band outside `[0, 1]` tolerated before a CDF value is rejected.
pub const CDF_SLACK: f64 = 1e-6;

/// Per-node quantities of the mobility average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Node {
    /// `ln w_k + ln f_D(d_k)`.
    pub ln_density_weight: f64,
    /// `ln Φ(x_k; v2)`.
    pub ln_phi2: f64,
}

impl Node {
    /// `ln(w_k Σ_i B_i (d0/R_M)^{β_i+1} Φ(x_k; v1(i)))`, equal to
    /// `ln w_k f_D(d_k) Φ(x_k; v2)^μ`.
    pub fn ln_weight(&self, mu: f64) -> f64 {
        self.ln_density_weight + mu * self.ln_phi2
    }
}

/// The Fox H parameter sets shared by every evaluation of one model.
#[derive(Debug, Clone)]
pub(crate) struct Specs {
    pub pdf: FoxHSpec,
    pub cdf: FoxHSpec,
    pub mgf: FoxHSpec,
    pub asep: FoxHSpec,
    pub capacity: FoxHSpec,
}

impl Specs {
    fn new(f: &FadingParams) -> Result<Self> {
        let FadingParams { alpha: a, mu, m, beta: b, .. } = *f;
        let e = b - a * mu;
        let am2 = a * mu / 2.0;
        Ok(Self {
            pdf: make_spec(3, 1, &[(1.0 - mu - m, 1.0), (1.0 + e, a), (1.0 + e, a)], &[(0.0, 1.0), (e, a), (e, a)])?,
            cdf: make_spec(
                3,
                2,
                &[(1.0 - mu - m, 1.0), (1.0 - mu, 1.0), (1.0 + e, a), (1.0 + e, a)],
                &[(0.0, 1.0), (e, a), (e, a), (-mu, 1.0)],
            )?,
            mgf: make_spec(
                3,
                2,
                &[(1.0, a / 2.0), (1.0 - m, 1.0), (1.0 + b, a), (1.0 + b, a)],
                &[(mu, 1.0), (b, a), (b, a)],
            )?,
            asep: make_spec(
                3,
                3,
                &[(1.0 - mu - m, 1.0), (1.0 - mu, 1.0), (0.5 - am2, a / 2.0), (1.0 + e, a), (1.0 + e, a)],
                &[(0.0, 1.0), (e, a), (e, a), (-mu, 1.0)],
            )?,
            capacity: make_spec(
                5,
                2,
                &[(1.0 - mu - m, 1.0), (-am2, a / 2.0), (1.0 + e, a), (1.0 + e, a), (1.0 - am2, a / 2.0)],
                &[(0.0, 1.0), (e, a), (e, a), (-am2, a / 2.0), (-am2, a / 2.0)],
            )?,
        })
    }
}

/// Everything needed to evaluate the SNR statistics of one link.
#[derive(Debug, Clone)]
pub struct SnrModel {
    pub config: LinkConfig,
    pub topo: TopologyParams,
    pub rule: QuadratureRule,
    /// Absorption coefficient in m⁻¹.
    pub kappa: f64,
    pub gamma0: f64,
    pub contour: ContourConfig,
    nodes: Vec<Node>,
    specs: Specs,
}

impl SnrModel {
    /// Model with absorption looked up in `table` and the default rule order.
    pub fn new(config: LinkConfig, table: &AbsorptionTable) -> Result<Self> {
        config.validate()?;
        let kappa = kappa_of_f(table, config.frequency_hz)?;
        let gamma0 = gamma0_of(&config, table)?;
        Self::build(config, kappa, gamma0, DEFAULT_ORDER, ContourConfig::default())
    }

    /// Model with an explicit absorption coefficient (m⁻¹).
    pub fn with_kappa(config: LinkConfig, kappa: f64) -> Result<Self> {
        config.validate()?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return domain(format!("absorption coefficient must be non-negative, got {kappa}"));
        }
        let table = AbsorptionTable::new(vec![(config.frequency_hz, kappa / (std::f64::consts::LN_10 * 1e-5))])?;
        let gamma0 = gamma0_of(&config, &table)?;
        Self::build(config, kappa, gamma0, DEFAULT_ORDER, ContourConfig::default())
    }

    /// Same link with an `n`-point Gauss–Legendre rule.
    pub fn with_order(self, n: usize) -> Result<Self> {
        Self::build(self.config, self.kappa, self.gamma0, n, self.contour)
    }

    pub fn with_contour(mut self, contour: ContourConfig) -> Self {
        self.contour = contour;
        self
    }

    /// Same link at another reference SNR; `γ0` scales linearly.
    pub fn with_gamma_bar(&self, gamma_bar: f64) -> Result<Self> {
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return domain(format!("reference SNR must be positive, got {gamma_bar}"));
        }
        let mut out = self.clone();
        out.gamma0 = self.gamma0 / self.config.gamma_bar * gamma_bar;
        out.config.gamma_bar = gamma_bar;
        Ok(out)
    }

    fn build(config: LinkConfig, kappa: f64, gamma0: f64, order: usize, contour: ContourConfig) -> Result<Self> {
        let topo = TopologyParams::preset(config.topology);
        let rule = gauss_legendre(order)?;
        let (_, v2) = kernel_vectors(0, &config, kappa)?;
        let half_span = config.r_max / (2.0 * config.d0);
        let mut nodes = Vec::with_capacity(order);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let d = 1.0 + half_span * (x + 1.0);
            let fd = rwp_pdf(d, &topo, config.d0, config.r_max)?;
            nodes.push(Node { ln_density_weight: w.ln() + fd.ln(), ln_phi2: ln_phi_kernel(x, v2) });
        }
        let specs = Specs::new(&config.fading)?;
        Ok(Self { config, topo, rule, kappa, gamma0, contour, nodes, specs })
    }

    pub fn fading(&self) -> &FadingParams {
        &self.config.fading
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub(crate) fn specs(&self) -> &Specs {
        &self.specs
    }

    /// `ln(2 R_M c1 / (d0 c2^{μ+m} Γ(μ+m)))`, the constant shared by the
    /// density, distribution, error-rate and capacity sums.
    pub(crate) fn ln_common(&self) -> f64 {
        let f = self.fading();
        (2.0 * self.config.r_max / self.config.d0).ln() + f.ln_c1()
            - (f.mu + f.m) * f.c2.ln()
            - ln_gamma_pos(f.mu + f.m).unwrap_or(f64::NAN)
    }

    /// `Σ_k exp(ln_w_k) H(exp(ln_z_k))` with log-domain accumulation.
    pub(crate) fn node_sum<W, Z>(&self, spec: &FoxHSpec, ln_w: W, ln_z: Z) -> Result<LogSum>
    where
        W: Fn(&Node) -> f64,
        Z: Fn(&Node) -> f64,
    {
        let mut acc = LogSum::default();
        for node in &self.nodes {
            let lw = ln_w(node);
            if lw == f64::NEG_INFINITY {
                continue;
            }
            let h = evaluate_scaled(spec, ln_z(node), &self.contour)?;
            acc.push(h.mantissa, lw + h.log_scale);
        }
        Ok(acc)
    }
}

/// Signed sum of `mantissa · exp(ln_scale)` terms, kept in scaled form.
#[derive(Debug, Clone, Default)]
pub(crate) struct LogSum {
    terms: Vec<(f64, f64)>,
}

impl LogSum {
    pub fn push(&mut self, mantissa: f64, ln_scale: f64) {
        if mantissa != 0.0 && ln_scale.is_finite() {
            self.terms.push((mantissa, ln_scale));
        }
    }

    /// `exp(ln_factor) · Σ`, evaluated without intermediate overflow.
    pub fn value_times(&self, ln_factor: f64) -> f64 {
        let Some(top) = self.terms.iter().map(|t| t.1).reduce(f64::max) else {
            return 0.0;
        };
        let s: f64 = self.terms.iter().map(|&(m, l)| m * (l - top).exp()).sum();
        s * (top + ln_factor).exp()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

/// SNR density `f_Γ(γ)`.
pub fn snr_pdf(model: &SnrModel, gamma: f64) -> Result<f64> {
    check_positive("SNR", gamma)?;
    let f = model.fading();
    let ln_x = (gamma / model.gamma0).ln();
    let sum = model.node_sum(
        &model.specs.pdf,
        |n| n.ln_weight(f.mu),
        |n| n.ln_phi2 - f.c2.ln() + f.alpha / 2.0 * ln_x,
    )?;
    let ln_pref = model.ln_common() - model.gamma0.ln() + (f.alpha * f.mu / 2.0 - 1.0) * ln_x;
    Ok(sum.value_times(ln_pref).max(0.0))
}

/// Unclamped SNR distribution function.
pub fn snr_cdf_raw(model: &SnrModel, gamma: f64) -> Result<f64> {
    check_positive("SNR threshold", gamma)?;
    let f = model.fading();
    let ln_x = (gamma / model.gamma0).ln();
    let sum = model.node_sum(
        &model.specs.cdf,
        |n| n.ln_weight(f.mu),
        |n| n.ln_phi2 - f.c2.ln() + f.alpha / 2.0 * ln_x,
    )?;
    let ln_pref = model.ln_common() + (2.0 / f.alpha).ln() + f.alpha * f.mu / 2.0 * ln_x;
    Ok(sum.value_times(ln_pref))
}

/// SNR distribution function `F_Γ(γ)`.
///
/// Raw values within [`CDF_SLACK`] of `[0, 1]` are clamped; anything further
/// out is reported as [`Error::Consistency`].
pub fn snr_cdf(model: &SnrModel, gamma: f64) -> Result<f64> {
    let raw = snr_cdf_raw(model, gamma)?;
    if !(-CDF_SLACK..=1.0 + CDF_SLACK).contains(&raw) {
        return Err(Error::Consistency { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Moment generating function `M_Γ(s) = E[e^{-sΓ}]` for real `s > 0`.
pub fn snr_mgf(model: &SnrModel, s: f64) -> Result<f64> {
    check_positive("MGF argument", s)?;
    let f = model.fading();
    let ln_sg = (s * model.gamma0).ln();
    let sum = model.node_sum(
        &model.specs.mgf,
        |n| n.ln_density_weight,
        |n| n.ln_phi2 - f.c2.ln() - f.alpha / 2.0 * ln_sg,
    )?;
    let ln_pref = (2.0 * model.config.r_max / model.config.d0).ln() + f.ln_c1() - f.m * f.c2.ln()
        - ln_gamma_pos(f.mu + f.m)?;
    Ok(sum.value_times(ln_pref))
}

/// Admissible open interval of moment orders.
pub fn moment_window(f: &FadingParams) -> (f64, f64) {
    (-(f.alpha * f.mu).min(f.beta) / 2.0, f.alpha * f.m / 2.0)
}

/// Real-order moment `E[Γ^n]` in closed form.
///
/// The distance average is the same Gauss–Legendre sum as for the other
/// statistics. For `n > 0` the exact average is finite only when
/// `n δ < β_1 + 1` (the lowest RWP exponent), since the SNR of a user at the
/// reference point is unbounded; beyond that the sum is a finite-rule value
/// of a divergent integral.
pub fn snr_moment(model: &SnrModel, n: f64) -> Result<f64> {
    let f = model.fading();
    let (lo, hi) = moment_window(f);
    if !(n > lo && n < hi) {
        return domain(format!("moment order {n} outside the admissible window ({lo}, {hi})"));
    }
    let t = 2.0 * n / f.alpha;
    let lg = |x: f64| ln_gamma_real_signed(x).map(|v| v.0);
    let ln_gammas = lg(t + f.mu)? + 2.0 * lg(f.beta + 2.0 * n)? + lg(f.m - t)?
        - lg(f.mu + f.m)?
        - 2.0 * lg(1.0 + f.beta + 2.0 * n)?;
    let ln_pref = (4.0 * model.config.r_max / (f.alpha * model.config.d0)).ln() + f.ln_c1() + n * model.gamma0.ln()
        - (f.m - t) * f.c2.ln()
        + ln_gammas;
    let mut acc = LogSum::default();
    for node in &model.nodes {
        // Σ_i B_i (d0/R)^{β_i+1} Φ(v1(i)) / Φ(v2)^{2n/α+μ}
        acc.push(1.0, node.ln_density_weight - t * node.ln_phi2);
    }
    Ok(acc.value_times(ln_pref))
}
