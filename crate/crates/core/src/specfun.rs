//! Gamma-family special functions.
//!
//! Every closed form in this crate multiplies several gamma factors, so the
//! complex log-gamma is the workhorse: products become sums and a single
//! `exp` is taken at the end. The implementation is the Stirling series
//! applied after an upward shift `z -> z + n` far enough that `|z + n| >= 15`
//! and `Re(z + n) >= 1`; the shift is undone with a sum of principal logs,
//! which keeps the result on the principal branch of `ln Γ` (branch cut on
//! the negative real axis).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const POLE_TOL: f64 = 1e-12;
const STIRLING_MIN_ABS: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series
}

fn is_pole(z: Complex64) -> bool {
    z.im.abs() < POLE_TOL && z.re <= POLE_TOL && (z.re - z.re.round()).abs() < POLE_TOL
}

fn shift_count(re: f64, im: f64) -> usize {
    let mut n = (1.0 - re).max(0.0);
    if im.abs() < STIRLING_MIN_ABS {
        let needed = (STIRLING_MIN_ABS * STIRLING_MIN_ABS - im * im).sqrt() - re;
        n = n.max(needed);
    }
    n.ceil() as usize
}

/// Principal branch of `ln Γ(z)`.
///
/// Fails with [`Error::Pole`] when `z` lies within `1e-12` of a non-positive
/// integer.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain(format!("non-finite argument {z}"));
    }
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    let n = shift_count(z.re, z.im);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..n {
        acc += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - acc)
}

/// `ln |Γ(x)|` for real `x`, together with the sign of `Γ(x)`.
pub fn ln_gamma_real_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return domain(format!("non-finite argument {x}"));
    }
    if x <= POLE_TOL && (x - x.round()).abs() < POLE_TOL {
        return Err(Error::Pole(Complex64::new(x, 0.0)));
    }
    if x < 0.5 {
        // Γ(x) Γ(1 - x) = π / sin(πx)
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma_real_signed(1.0 - x)?;
        return Ok(((PI / s.abs()).ln() - lg, s.signum() * sg));
    }
    let n = shift_count(x, 0.0);
    let mut w = x;
    let mut prod = 1.0;
    for _ in 0..n {
        prod *= w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    let lg = (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - prod.ln();
    Ok((lg, 1.0))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_pos(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return domain(format!("ln_gamma_pos requires x > 0, got {x}"));
    }
    ln_gamma_real_signed(x).map(|(v, _)| v)
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("digamma requires finite x > 0, got {x}"));
    }
    let mut acc = 0.0;
    let mut w = x;
    while w < 10.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(acc + w.ln() - 0.5 / w - tail)
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("beta requires a, b > 0, got ({a}, {b})"));
    }
    Ok(ln_gamma_pos(a)? + ln_gamma_pos(b)? - ln_gamma_pos(a + b)?)
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    ln_beta(a, b).map(f64::exp)
}
