//! Fixtures and goodness-of-fit helpers shared by the integration tests.

#![allow(dead_code)]

#[path = "../../src/oracle.rs"]
pub mod oracle;

use thz_alphaf::channel::{AbsorptionTable, LinkConfig};
use thz_alphaf::mobility::Topology;
use thz_alphaf::snrstats::SnrModel;

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn table() -> AbsorptionTable {
    AbsorptionTable::bundled()
}

/// Outage figure: α=3, β=3, μ=3, m=1.5, 1-D, R_M=50 m.
pub fn fig2(delta: f64, gamma_bar_db: f64) -> SnrModel {
    let cfg = LinkConfig::new(300e9, 1.0, delta, 50.0, Topology::OneD, db(gamma_bar_db), 3.0, 3.0, 3.0, 1.5).unwrap();
    SnrModel::new(cfg, &table()).unwrap()
}

/// Error-rate figure: α=3, μ=2.5, m=1.5, δ=2.3, 2-D, R_M=50 m.
pub fn fig3(beta: f64, gamma_bar_db: f64) -> SnrModel {
    let cfg = LinkConfig::new(300e9, 1.0, 2.3, 50.0, Topology::TwoD, db(gamma_bar_db), beta, 3.0, 2.5, 1.5).unwrap();
    SnrModel::new(cfg, &table()).unwrap()
}

/// Capacity figure: β=4, μ=3, α=2.5, δ=2.5, 3-D, m=1.01.
pub fn fig4(r_max: f64, gamma_bar_db: f64) -> SnrModel {
    let cfg = LinkConfig::new(300e9, 1.0, 2.5, r_max, Topology::ThreeD, db(gamma_bar_db), 4.0, 2.5, 3.0, 1.01).unwrap();
    SnrModel::new(cfg, &table()).unwrap()
}

/// Smallest β admitted for the "β = 2" curves.
pub const BETA_NEAR_TWO: f64 = 2.0 + 1e-3;

/// KS critical value at the 1% level, asymptotic form.
pub const KS_C99: f64 = 1.628;

/// χ² 0.99 quantiles.
pub fn chi2_crit_99(df: usize) -> f64 {
    match df {
        9 => 21.666,
        19 => 36.191,
        39 => 62.428,
        49 => 74.919,
        _ => panic!("no tabulated χ² quantile for df={df}"),
    }
}

/// One-sample KS statistic. `increment(a, b)` returns `F(b) - F(a)`;
/// `lower` is the left end of the support.
pub fn ks_incremental<G: Fn(f64, f64) -> f64>(samples: &mut [f64], lower: f64, increment: G) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut cdf = 0.0;
    let mut prev = lower;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        cdf += increment(prev, x);
        prev = x;
        d = d.max((cdf - i as f64 / n).abs()).max(((i + 1) as f64 / n - cdf).abs());
    }
    d
}

/// One-sample KS statistic against a CDF obtained by integrating `pdf`.
pub fn ks_against_density<P: Fn(f64) -> f64>(samples: &mut [f64], lower: f64, pdf: P) -> f64 {
    ks_incremental(samples, lower, |a, b| if b > a { oracle::integrate(&pdf, a, b, 1e-13) } else { 0.0 })
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

pub fn ks_two_sample_crit(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_C99 * ((n + m) / (n * m)).sqrt()
}

/// Pearson χ² for `counts` against expected bin probabilities.
pub fn chi_square(counts: &[usize], probs: &[f64]) -> f64 {
    let total: usize = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}
