//! Fox H-function of a positive real argument by Mellin–Barnes contour
//! integration.
//!
//! ```text
//! H(z) = 1/(2πi) ∫_L Θ(s) z^{-s} ds
//! Θ(s) = Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//!        / (Π_{j>m} Γ(1 - b_j - B_j s) Π_{j>n} Γ(a_j + A_j s))
//! ```
//!
//! `L` is the vertical line `Re s = c` inside the strip separating the left
//! poles (from `Γ(b_j + B_j s)`) and the right poles (from
//! `Γ(1 - a_j - A_j s)`). The integrand is evaluated as one exponential of a
//! sum of log-gammas, normalized by its value at `s = c` so that very small or
//! very large results are carried as `mantissa · exp(log_scale)`.
//!
//! The default abscissa is the minimum of `ln|Θ(c)| - c ln z` over the strip,
//! i.e. the real saddle of the integrand. At extreme arguments this keeps the
//! contour close to the dominant poles and limits cancellation along the
//! line, where a fixed midpoint would lose all significant digits.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mobility::gauss_legendre;
use crate::specfun::{ln_gamma, ln_gamma_real_signed};

/// Coefficient pair `(a, A)` or `(b, B)`.
pub type Coeff = (f64, f64);

/// One factor `Γ(offset + slope·s)^power` of `Θ(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GammaTerm {
    offset: f64,
    slope: f64,
    power: i32,
}

/// A validated Fox H parameter set `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    m: usize,
    n: usize,
    upper: Vec<Coeff>,
    lower: Vec<Coeff>,
    terms: Vec<GammaTerm>,
    strip: (f64, f64),
}

/// Build and validate `H^{m,n}_{p,q}` with `p = upper.len()`, `q = lower.len()`.
pub fn make_spec(m: usize, n: usize, upper: &[Coeff], lower: &[Coeff]) -> Result<FoxHSpec> {
    FoxHSpec::new(m, n, upper, lower)
}

impl FoxHSpec {
    pub fn new(m: usize, n: usize, upper: &[Coeff], lower: &[Coeff]) -> Result<Self> {
        let (p, q) = (upper.len(), lower.len());
        if m > q || n > p {
            return Err(Error::InvalidSpec(format!("orders (m={m}, n={n}) exceed (p={p}, q={q})")));
        }
        for &(v, w) in upper.iter().chain(lower) {
            if !(w > 0.0) || !w.is_finite() || !v.is_finite() {
                return Err(Error::InvalidSpec(format!("coefficient ({v}, {w}) needs finite values and positive weight")));
            }
        }
        let left = lower[..m].iter().map(|&(b, bb)| -b / bb).fold(f64::NEG_INFINITY, f64::max);
        let right = upper[..n].iter().map(|&(a, aa)| (1.0 - a) / aa).fold(f64::INFINITY, f64::min);
        if !(left < right) {
            return Err(Error::InvalidSpec(format!("no pole-separating strip: left poles reach {left}, right poles start at {right}")));
        }

        let mut raw = Vec::with_capacity(p + q);
        raw.extend(lower[..m].iter().map(|&(b, bb)| GammaTerm { offset: b, slope: bb, power: 1 }));
        raw.extend(upper[..n].iter().map(|&(a, aa)| GammaTerm { offset: 1.0 - a, slope: -aa, power: 1 }));
        raw.extend(lower[m..].iter().map(|&(b, bb)| GammaTerm { offset: 1.0 - b, slope: -bb, power: -1 }));
        raw.extend(upper[n..].iter().map(|&(a, aa)| GammaTerm { offset: a, slope: aa, power: -1 }));
        let mut terms: Vec<GammaTerm> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.iter_mut().find(|u| u.offset == t.offset && u.slope == t.slope) {
                Some(u) => u.power += t.power,
                None => terms.push(t),
            }
        }
        terms.retain(|t| t.power != 0);

        Ok(Self { m, n, upper: upper.to_vec(), lower: lower.to_vec(), terms, strip: (left, right) })
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.upper.len(), self.lower.len())
    }

    pub fn upper(&self) -> &[Coeff] {
        &self.upper
    }

    pub fn lower(&self) -> &[Coeff] {
        &self.lower
    }

    /// Open interval of admissible abscissae; ends may be infinite.
    pub fn strip(&self) -> (f64, f64) {
        self.strip
    }

    /// Spec of `z^σ H(z)`: every `a_j` becomes `a_j + σA_j` and every `b_j`
    /// becomes `b_j + σB_j`.
    pub fn shifted(&self, sigma: f64) -> Result<Self> {
        let shift = |c: &[Coeff]| c.iter().map(|&(v, w)| (v + sigma * w, w)).collect::<Vec<_>>();
        Self::new(self.m, self.n, &shift(&self.upper), &shift(&self.lower))
    }

    /// `ln Θ(s)` (principal logs summed; the imaginary part is a phase).
    fn ln_theta(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            match ln_gamma(Complex64::new(t.offset, 0.0) + s * t.slope) {
                Ok(v) => acc += v * t.power as f64,
                Err(Error::Pole(_)) if t.power < 0 => return Ok(Complex64::new(f64::NEG_INFINITY, 0.0)),
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    }

    /// `ln|Θ(c)|` on the real axis, `-∞` where a reciprocal gamma vanishes.
    fn ln_abs_theta_real(&self, c: f64) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            match ln_gamma_real_signed(t.offset + t.slope * c) {
                Ok((v, _)) => acc += v * t.power as f64,
                Err(_) if t.power < 0 => return f64::NEG_INFINITY,
                Err(_) => return f64::INFINITY,
            }
        }
        acc
    }

    fn numerator_pole_at(&self, c: f64) -> bool {
        self.terms.iter().any(|t| {
            let x = t.offset + t.slope * c;
            t.power > 0 && x <= 1e-12 && (x - x.round()).abs() < 1e-12
        })
    }

    /// Approximate phase rate `|d/dt Im ln(Θ(c+it) z^{-c-it})|`, using
    /// `Re ψ(w) ≈ ln|w|`.
    fn phase_rate(&self, c: f64, t: f64, ln_z: f64) -> f64 {
        let r: f64 = self
            .terms
            .iter()
            .map(|g| {
                let w = Complex64::new(g.offset + g.slope * c, g.slope * t);
                g.power as f64 * g.slope * w.norm().max(1.0).ln()
            })
            .sum();
        (r - ln_z).abs()
    }
}

/// Placement of the vertical contour.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abscissa {
    /// Real saddle of the integrand (default).
    Saddle,
    /// Midpoint of the strip; requires a bounded strip.
    Midpoint,
    Fixed(f64),
}

/// Contour quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ContourConfig {
    pub abscissa: Abscissa,
    /// Initial truncation of `|Im s|`.
    pub half_height: f64,
    /// Tail criterion, relative to the accumulated absolute integral.
    pub tail_tol: f64,
    pub max_height: f64,
    /// Gauss–Legendre points per panel.
    pub panel_points: usize,
    /// Integrate `Im s ≥ 0` only and use conjugate symmetry.
    pub symmetric: bool,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            abscissa: Abscissa::Saddle,
            half_height: 8.0,
            tail_tol: 1e-12,
            max_height: 1024.0,
            panel_points: 16,
            symmetric: true,
        }
    }
}

impl ContourConfig {
    pub fn with_abscissa(mut self, abscissa: Abscissa) -> Self {
        self.abscissa = abscissa;
        self
    }
}

/// `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// `ln|value|`.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }
}

/// Bookkeeping from one contour evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub abscissa: f64,
    /// Final truncation height.
    pub height: f64,
    pub nodes: usize,
    /// `∫|integrand|` in the same scale as the mantissa; the ratio to
    /// `|mantissa|` measures cancellation.
    pub abs_integral: f64,
}

/// `H(z)` for `z > 0`.
pub fn evaluate(spec: &FoxHSpec, z: f64, cfg: &ContourConfig) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("Fox H argument must be positive and finite, got {z}")));
    }
    evaluate_scaled(spec, z.ln(), cfg).map(|v| v.value())
}

/// `H(e^{ln_z})`, returned in scaled form.
pub fn evaluate_scaled(spec: &FoxHSpec, ln_z: f64, cfg: &ContourConfig) -> Result<ScaledValue> {
    evaluate_with_diagnostics(spec, ln_z, cfg).map(|(v, _)| v)
}

pub fn evaluate_with_diagnostics(spec: &FoxHSpec, ln_z: f64, cfg: &ContourConfig) -> Result<(ScaledValue, Diagnostics)> {
    if !ln_z.is_finite() {
        return Err(Error::Domain(format!("Fox H log-argument must be finite, got {ln_z}")));
    }
    if !(cfg.tail_tol > 0.0) || !(cfg.half_height > 0.0) || cfg.panel_points == 0 {
        return Err(Error::InvalidSpec("contour config needs tail_tol > 0, half_height > 0, panel_points ≥ 1".into()));
    }
    let c = choose_abscissa(spec, ln_z, cfg.abscissa)?;
    let h = |x: f64| spec.ln_abs_theta_real(x) - x * ln_z;
    let mut s0 = h(c);
    if !s0.is_finite() {
        // Θ vanishes on the axis (reciprocal-gamma zero); normalize off-axis.
        s0 = (spec.ln_theta(Complex64::new(c, 1.0))? - Complex64::new(c, 1.0) * ln_z).re;
    }
    let integrand = |t: f64| -> Result<(f64, f64)> {
        let s = Complex64::new(c, t);
        let l = spec.ln_theta(s)? - s * ln_z - s0;
        if l.re < -745.0 || l.re == f64::NEG_INFINITY {
            return Ok((0.0, 0.0));
        }
        let v = l.exp();
        Ok((v.re, v.norm()))
    };

    let rule = gauss_legendre(cfg.panel_points)?;
    let width0 = initial_width(&h, c, spec.strip);
    let omega = |t: f64| spec.phase_rate(c, t, ln_z) + 1.0;

    let panel = |a: f64, b: f64, nodes: &mut usize| -> Result<(f64, f64)> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let (mut re, mut ab) = (0.0, 0.0);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (r, m) = integrand(mid + half * x)?;
            re += w * r;
            ab += w * m;
        }
        *nodes += rule.nodes.len();
        Ok((re * half, ab * half))
    };

    // Positive half of the line, panel by panel. Each panel's (value, |value|)
    // is recorded with its end point so the tail test can look back one unit.
    let mut nodes = 0usize;
    let mut upper_panels: Vec<(f64, f64, f64)> = Vec::new();
    let mut lower_panels: Vec<(f64, f64, f64)> = Vec::new();
    let mut t_end = 0.0;
    let mut width = width0;
    let mut target = cfg.half_height;
    loop {
        while t_end < target {
            let w = width.min(6.0 / omega(t_end)).min(1.0).min(target - t_end).max(1e-9);
            let (r, a) = panel(t_end, t_end + w, &mut nodes)?;
            if !cfg.symmetric {
                let (rl, al) = panel(-(t_end + w), -t_end, &mut nodes)?;
                lower_panels.push((t_end + w, rl, al));
            }
            upper_panels.push((t_end + w, r, a));
            t_end += w;
            width *= 1.5;
        }
        let total_abs: f64 = upper_panels.iter().chain(&lower_panels).map(|p| p.2).sum();
        let tail_abs: f64 = upper_panels
            .iter()
            .chain(&lower_panels)
            .filter(|p| p.0 > t_end - 1.0)
            .map(|p| p.2)
            .sum();
        if tail_abs <= cfg.tail_tol * total_abs || total_abs == 0.0 {
            break;
        }
        if target >= cfg.max_height {
            return Err(Error::Convergence(format!(
                "tail mass {:.3e} of {:.3e} at |Im s| = {target} (abscissa {c}, ln z = {ln_z})",
                tail_abs, total_abs
            )));
        }
        target = (2.0 * target).min(cfg.max_height);
    }

    let sum_re: f64 = upper_panels.iter().map(|p| p.1).sum::<f64>();
    let sum_abs: f64 = upper_panels.iter().map(|p| p.2).sum::<f64>();
    let (mantissa, abs_integral) = if cfg.symmetric {
        (sum_re / PI, sum_abs / PI)
    } else {
        let lo_re: f64 = lower_panels.iter().map(|p| p.1).sum();
        let lo_abs: f64 = lower_panels.iter().map(|p| p.2).sum();
        ((sum_re + lo_re) / (2.0 * PI), (sum_abs + lo_abs) / (2.0 * PI))
    };
    Ok((
        ScaledValue { mantissa, log_scale: s0 },
        Diagnostics { abscissa: c, height: t_end, nodes, abs_integral },
    ))
}

fn choose_abscissa(spec: &FoxHSpec, ln_z: f64, how: Abscissa) -> Result<f64> {
    let (left, right) = spec.strip;
    match how {
        Abscissa::Fixed(c) => {
            if spec.numerator_pole_at(c) {
                return Err(Error::PoleOnContour(c));
            }
            if !(c > left && c < right) {
                return Err(Error::InvalidSpec(format!("abscissa {c} outside strip ({left}, {right})")));
            }
            Ok(c)
        }
        Abscissa::Midpoint => match (left.is_finite(), right.is_finite()) {
            (true, true) => Ok(0.5 * (left + right)),
            (true, false) => Ok(left + 1.0),
            (false, true) => Ok(right - 1.0),
            (false, false) => Ok(0.0),
        },
        Abscissa::Saddle => Ok(saddle(spec, ln_z)),
    }
}

/// Minimizer of `h(c) = ln|Θ(c)| - c ln z` over the strip.
fn saddle(spec: &FoxHSpec, ln_z: f64) -> f64 {
    let h = |x: f64| {
        let v = spec.ln_abs_theta_real(x) - x * ln_z;
        if v.is_nan() { f64::INFINITY } else { v }
    };
    let (left, right) = spec.strip;
    let (lo, hi) = search_interval(&h, left, right);

    const SAMPLES: usize = 48;
    let xs: Vec<f64> = (0..SAMPLES).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / SAMPLES as f64).collect();
    let best = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, h(x)))
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let Some((i, _)) = best else {
        return 0.5 * (lo + hi);
    };
    let mut a = if i == 0 { lo } else { xs[i - 1] };
    let mut b = if i + 1 == SAMPLES { hi } else { xs[i + 1] };

    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..80 {
        if (b - a).abs() < 1e-10 * (1.0 + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = h(x2);
        }
    }
    let c = 0.5 * (a + b);
    if spec.numerator_pole_at(c) || !(c > left && c < right) {
        xs[i]
    } else {
        c
    }
}

/// Bounded search window inside the strip, walking outward on open sides
/// until `h` stops decreasing.
fn search_interval<F: Fn(f64) -> f64>(h: &F, left: f64, right: f64) -> (f64, f64) {
    let walk = |start: f64, dir: f64| {
        let mut x = start;
        let mut step = 1.0;
        let mut fx = h(x);
        for _ in 0..60 {
            let next = x + dir * step;
            let fn_ = h(next);
            if !(fn_ < fx) {
                return next;
            }
            x = next;
            fx = fn_;
            step *= 2.0;
        }
        x
    };
    match (left.is_finite(), right.is_finite()) {
        (true, true) => (left, right),
        (true, false) => (left, walk(left + 1.0, 1.0)),
        (false, true) => (walk(right - 1.0, -1.0), right),
        (false, false) => (walk(0.0, -1.0), walk(0.0, 1.0)),
    }
}

/// First panel width from the curvature of `h` at the abscissa, which is the
/// Gaussian width of the integrand around `t = 0`.
fn initial_width<F: Fn(f64) -> f64>(h: &F, c: f64, strip: (f64, f64)) -> f64 {
    let room = (c - strip.0).min(strip.1 - c);
    let e = (0.1 * room).clamp(1e-8, 1e-3);
    let d2 = (h(c + e) - 2.0 * h(c) + h(c - e)) / (e * e);
    if d2.is_finite() && d2 > 0.0 {
        (1.0 / d2.sqrt()).clamp(1e-6, 1.0)
    } else {
        1.0
    }
}
