//! Independent numerical oracles for tests: adaptive Gauss–Kronrod (7/15)
//! quadrature on finite and semi-infinite intervals.
//!
//! Nothing in the library proper calls into this module. Integration tests
//! pull it in with `#[path]` so unit and integration tests share one copy.

#![allow(dead_code)]

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, err: f64, tol: f64, depth: u32) -> f64 {
    if err <= tol.max(1e-15 * whole.abs()) || depth == 0 || (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
        return whole;
    }
    let m = 0.5 * (a + b);
    let (l, el) = gk15(f, a, m);
    let (r, er) = gk15(f, m, b);
    adapt(f, a, m, l, el, 0.5 * tol, depth - 1) + adapt(f, m, b, r, er, 0.5 * tol, depth - 1)
}

/// Adaptive quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (whole, err) = gk15(&f, a, b);
    adapt(&f, a, b, whole, err, tol, 60)
}

/// Adaptive quadrature over `[a, ∞)` via `x = a + t / (1 - t)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        f(a + t / s) / (s * s)
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Integral over `(0, ∞)` split into log-spaced pieces, for integrands that
/// are spread over many decades.
pub fn integrate_log_decades<F: Fn(f64) -> f64>(f: F, lo_exp: i32, hi_exp: i32, tol: f64) -> f64 {
    let mut total = integrate(&f, 0.0, 10f64.powi(lo_exp), tol);
    for e in lo_exp..hi_exp {
        total += integrate(&f, 10f64.powi(e), 10f64.powi(e + 1), tol);
    }
    total + integrate_to_inf(&f, 10f64.powi(hi_exp), tol)
}

#[cfg(test)]
mod tests {
    // Unused when compiled into a harness-less test binary.
    #[allow(unused_imports)]
    use super::*;

    #[test]
    fn oracle_self_check() {
        let v = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate_to_inf(|x| (-x).exp(), 0.0, 1e-13);
        assert!((v - 1.0).abs() < 1e-11);
        let v = integrate(|x| x.sqrt().ln(), 0.0, 1.0, 1e-12);
        assert!((v + 0.5).abs() < 1e-9);
    }
}
