//! Random-waypoint distance statistics and the Gauss–Legendre machinery that
//! turns the average over user positions into a finite weighted sum.
//!
//! Distances are handled through the normalized variable `d = 1 + R_t/d0`,
//! which lives on `(1, 1 + R_M/d0)`. The RWP density is a short polynomial in
//! `d - 1`; in the unit variable `u = (d - 1) d0 / R_M` it is simply
//! `Σ B_i u^{β_i}` on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::channel::LinkConfig;
use crate::error::{domain, Error, Result};

/// Spatial dimension of the random-waypoint topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    #[serde(rename = "1d", alias = "1D")]
    OneD,
    #[serde(rename = "2d", alias = "2D")]
    TwoD,
    #[serde(rename = "3d", alias = "3D")]
    ThreeD,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Topology::OneD => "1d",
            Topology::TwoD => "2d",
            Topology::ThreeD => "3d",
        })
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1d" | "1" => Ok(Topology::OneD),
            "2d" | "2" => Ok(Topology::TwoD),
            "3d" | "3" => Ok(Topology::ThreeD),
            other => domain(format!("unknown topology '{other}' (expected 1d, 2d or 3d)")),
        }
    }
}

/// One monomial `B_i (d0/R_M)^{β_i+1} (d-1)^{β_i}` of the RWP density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwpTerm {
    pub coef: f64,
    pub exponent: f64,
}

/// Polynomial coefficients of the RWP distance density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyParams {
    pub terms: Vec<RwpTerm>,
}

impl TopologyParams {
    pub fn preset(topology: Topology) -> Self {
        let (coefs, exps): (Vec<f64>, Vec<f64>) = match topology {
            Topology::OneD => (vec![6.0, -6.0], vec![1.0, 2.0]),
            Topology::TwoD => (
                vec![324.0 / 73.0, -420.0 / 73.0, 96.0 / 73.0],
                vec![1.0, 3.0, 5.0],
            ),
            Topology::ThreeD => (
                vec![735.0 / 72.0, -1190.0 / 72.0, 455.0 / 72.0],
                vec![2.0, 4.0, 6.0],
            ),
        };
        TopologyParams {
            terms: coefs
                .into_iter()
                .zip(exps)
                .map(|(coef, exponent)| RwpTerm { coef, exponent })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Density of the unit variable `u` on `[0, 1]`.
    pub fn unit_pdf(&self, u: f64) -> f64 {
        self.terms.iter().map(|t| t.coef * pow(u, t.exponent)).sum()
    }

    /// Closed-form CDF of the unit variable, `Σ B_i u^{β_i+1}/(β_i+1)`.
    pub fn unit_cdf(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * pow(u, t.exponent + 1.0) / (t.exponent + 1.0))
            .sum()
    }
}

// The presets have integer exponents; powi is several times cheaper and the
// Monte Carlo distance sampler evaluates the CDF ~40 times per draw.
fn pow(u: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        u.powi(e as i32)
    } else {
        u.powf(e)
    }
}

/// RWP density of the normalized distance `d` on `(1, 1 + R_M/d0)`.
pub fn rwp_pdf(d: f64, topo: &TopologyParams, d0: f64, r_max: f64) -> Result<f64> {
    let upper = 1.0 + r_max / d0;
    if !(d >= 1.0 && d <= upper) {
        return domain(format!("distance {d} outside RWP support [1, {upper}]"));
    }
    let ratio = d0 / r_max;
    Ok(topo
        .terms
        .iter()
        .map(|t| t.coef * ratio.powf(t.exponent + 1.0) * (d - 1.0).powf(t.exponent))
        .sum())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_{-1}^{1} f(x) dx` by the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Largest supported rule order.
pub const MAX_RULE_ORDER: usize = 200;

/// `N`-point Gauss–Legendre rule, nodes ascending.
///
/// Roots of `P_N` by Newton iteration from Chebyshev-type initial guesses,
/// stopped once the step falls below `1e-14`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_RULE_ORDER {
        return domain(format!("Gauss-Legendre order must be in 1..={MAX_RULE_ORDER}, got {n}"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-14 {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `Φ(x; a) = [a1 (x+1)]^{a2} exp{a3 [a1 (x+1) + 1]}`.
pub fn phi_kernel(x: f64, a: [f64; 3]) -> f64 {
    ln_phi_kernel(x, a).exp()
}

/// Natural log of [`phi_kernel`].
pub fn ln_phi_kernel(x: f64, a: [f64; 3]) -> f64 {
    let r = a[0] * (x + 1.0);
    a[1] * r.ln() + a[2] * (r + 1.0)
}

/// Kernel vectors `v1(i)` and `v2` for topology term `i` (zero-based).
pub fn kernel_vectors(
    i: usize,
    config: &LinkConfig,
    kappa: f64,
) -> Result<([f64; 3], [f64; 3])> {
    let topo = TopologyParams::preset(config.topology);
    let term = topo.terms.get(i).ok_or(Error::Index { index: i, len: topo.len() })?;
    let f = &config.fading;
    let half_span = config.r_max / (2.0 * config.d0);
    let v1 = [
        half_span,
        term.exponent + f.alpha * f.mu * config.delta / 2.0,
        f.alpha / 2.0 * kappa * f.mu * config.d0,
    ];
    let v2 = [half_span, f.alpha * config.delta / 2.0, f.alpha / 2.0 * kappa * config.d0];
    Ok((v1, v2))
}

/// `E[g(D)]` under the RWP law, with the distance integral mapped onto
/// `[-1, 1]` and evaluated by `rule`.
pub fn mobility_average<F: FnMut(f64) -> f64>(
    topo: &TopologyParams,
    rule: &QuadratureRule,
    d0: f64,
    r_max: f64,
    mut g: F,
) -> f64 {
    let half_span = r_max / (2.0 * d0);
    half_span
        * rule.integrate(|x| {
            let u = (x + 1.0) / 2.0;
            let d = 1.0 + half_span * (x + 1.0);
            topo.unit_pdf(u) * (d0 / r_max) * g(d)
        })
}
