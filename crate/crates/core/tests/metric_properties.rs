mod common;

use common::*;
use thz_alphaf::metrics::{
    asep, asep_asymptote, asep_asymptotic, capacity, outage, outage_asymptotic, ModulationCoeffs, Regime,
};
use thz_alphaf::Error;

fn log_slope(f: impl Fn(f64) -> f64, lo_db: f64, hi_db: f64) -> f64 {
    (f(hi_db) / f(lo_db)).log10() / ((hi_db - lo_db) / 10.0)
}

#[test]
fn asep_asymptote_slope_beta_above() {
    let base = fig3(10.0, 0.0);
    let slope = log_slope(|g| asep_asymptote(&base.with_gamma_bar(db(g)).unwrap(), ModulationCoeffs::BPSK).unwrap(), 180.0, 190.0);
    assert!((slope + 3.75).abs() < 1e-9, "slope {slope}");
}

#[test]
fn asep_asymptote_slope_beta_below() {
    let base = fig3(BETA_NEAR_TWO, 0.0);
    let slope = log_slope(|g| asep_asymptote(&base.with_gamma_bar(db(g)).unwrap(), ModulationCoeffs::BPSK).unwrap(), 200.0, 210.0);
    let want = -BETA_NEAR_TWO / 2.0;
    // The logarithmic factor flattens the slope slightly.
    assert!(slope > want && slope < 0.95 * want, "slope {slope}");
}

#[test]
fn results_record_regime() {
    let r = outage_asymptotic(&fig2(2.0, 160.0), 1.0).unwrap();
    assert_eq!(r.regime, Regime::BetaLeAlphaMu);
    let r = asep_asymptotic(&fig3(10.0, 160.0), ModulationCoeffs::BPSK).unwrap();
    assert_eq!(r.regime, Regime::BetaGtAlphaMu);
    assert!(r.asymptotic.is_some());
}

#[test]
fn degenerate_boundary_is_rejected() {
    // α μ = 7.5
    let model = fig3(7.5, 150.0);
    assert!(matches!(outage_asymptotic(&model, 1.0), Err(Error::Degenerate(_))));
    assert!(outage(&model, 1.0).unwrap() > 0.0);
}

#[test]
fn asep_decreases_over_grid() {
    let base = fig3(3.0, 0.0);
    let mut prev = f64::INFINITY;
    for i in 0..30 {
        let p = asep(&base.with_gamma_bar(db(60.0 + 4.0 * i as f64)).unwrap(), ModulationCoeffs::BPSK).unwrap();
        assert!(p < prev, "step {i}: {p} ≥ {prev}");
        prev = p;
    }
}

#[test]
fn capacity_decreases_with_range() {
    let caps: Vec<f64> = [5.0, 10.0, 20.0, 35.0, 50.0].iter().map(|&r| capacity(&fig4(r, 120.0)).unwrap()).collect();
    assert!(caps.windows(2).all(|w| w[1] < w[0]), "{caps:?}");
}

#[test]
fn outage_falls_with_snr() {
    let base = fig2(3.0, 0.0);
    let ops: Vec<f64> = (0..15).map(|i| outage(&base.with_gamma_bar(db(100.0 + 5.0 * i as f64)).unwrap(), 1.0).unwrap()).collect();
    assert!(ops.windows(2).all(|w| w[1] <= w[0]), "{ops:?}");
}
