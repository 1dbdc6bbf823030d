//! Monte Carlo replica of the link model, drawn sample by sample.
//!
//! Each worker owns a ChaCha8 stream selected by its index under a common
//! seed, and fills a contiguous slice of the output. A fixed
//! `(seed, workers, samples)` therefore reproduces the batch bit for bit
//! regardless of thread scheduling.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::FadingParams;
use crate::error::{domain, Error, Result};
use crate::metrics::ModulationCoeffs;
use crate::mobility::TopologyParams;
use crate::snrstats::SnrModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(samples: usize, seed: u64, workers: usize) -> Result<Self> {
        if samples == 0 || workers == 0 {
            return domain(format!("need at least one sample and one worker, got ({samples}, {workers})"));
        }
        Ok(Self { samples, seed, workers })
    }
}

/// Simulated SNR realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub snr: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.snr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snr.is_empty()
    }

    /// Batch with every sample multiplied by `k`; the SNR is linear in `γ̄`,
    /// so one simulation serves a whole reference-SNR sweep.
    pub fn scaled(&self, k: f64) -> Self {
        Self { snr: self.snr.iter().map(|g| g * k).collect() }
    }
}

/// Pointing loss `Z = (U1 U2)^{2/β}`.
pub fn sample_pointing<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u1: f64 = rng.sample(Open01);
    let u2: f64 = rng.sample(Open01);
    (u1 * u2).powf(2.0 / beta)
}

/// Draws α-F fading power as `(c2 G_μ / G_m)^{2/α}`, the inverse of the
/// beta-prime representation of `X^{α/2}/c2`.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    g_mu: Gamma<f64>,
    g_m: Gamma<f64>,
    c2: f64,
    exponent: f64,
}

impl FadingSampler {
    pub fn new(f: &FadingParams) -> Result<Self> {
        let gamma = |shape: f64| Gamma::new(shape, 1.0).map_err(|e| Error::Domain(format!("gamma shape {shape}: {e}")));
        Ok(Self { g_mu: gamma(f.mu)?, g_m: gamma(f.m)?, c2: f.c2, exponent: 2.0 / f.alpha })
    }
}

impl Distribution<f64> for FadingSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let ratio = self.g_mu.sample(rng) / self.g_m.sample(rng);
        (self.c2 * ratio).powf(self.exponent)
    }
}

/// One α-F fading power draw. Build a [`FadingSampler`] for repeated use.
pub fn sample_fading<R: Rng + ?Sized>(fading: &FadingParams, rng: &mut R) -> Result<f64> {
    Ok(FadingSampler::new(fading)?.sample(rng))
}

/// Normalized RWP distance on `(1, 1 + R_M/d0)` by bisection on the unit CDF.
pub fn sample_distance<R: Rng + ?Sized>(topo: &TopologyParams, d0: f64, r_max: f64, rng: &mut R) -> f64 {
    let target: f64 = rng.sample(Open01);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if topo.unit_cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = (0.5 * (lo + hi)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    1.0 + u * r_max / d0
}

/// `(start, len)` of worker `w`'s slice.
fn chunk(samples: usize, workers: usize, w: usize) -> (usize, usize) {
    let base = samples / workers;
    let extra = samples % workers;
    let len = base + usize::from(w < extra);
    let start = w * base + w.min(extra);
    (start, len)
}

/// SNR realizations `γ0 (d-1)^{-δ} e^{-κ d0 d} Z X` for the model's link.
pub fn simulate(model: &SnrModel, sim: &SimConfig) -> Result<SampleBatch> {
    let sim = SimConfig::new(sim.samples, sim.seed, sim.workers)?;
    let cfg = model.config;
    let fading = FadingSampler::new(model.fading())?;
    let beta = cfg.misalignment.beta;
    let (gamma0, delta, kd0) = (model.gamma0, cfg.delta, model.kappa * cfg.d0);
    let mut snr = vec![0.0; sim.samples];
    let mut slices = Vec::with_capacity(sim.workers);
    let mut rest = snr.as_mut_slice();
    for w in 0..sim.workers {
        let (_, len) = chunk(sim.samples, sim.workers, w);
        let (head, tail) = rest.split_at_mut(len);
        slices.push((w, head));
        rest = tail;
    }
    slices.into_par_iter().for_each(|(w, out)| {
        let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
        rng.set_stream(w as u64);
        for g in out.iter_mut() {
            let d = sample_distance(&model.topo, cfg.d0, cfg.r_max, &mut rng);
            let z = sample_pointing(beta, &mut rng);
            let x = fading.sample(&mut rng);
            *g = gamma0 * (d - 1.0).powf(-delta) * (-kd0 * d).exp() * z * x;
        }
    });
    Ok(SampleBatch { snr })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimates {
    pub outage: MetricEstimate,
    pub asep: MetricEstimate,
    pub capacity: MetricEstimate,
}

/// Mean and standard error of `g` over the batch.
pub fn estimate_mean<F: Fn(f64) -> f64 + Sync>(batch: &SampleBatch, g: F) -> Result<MetricEstimate> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = batch.len() as f64;
    // Two-pass in f64 is accurate enough at 1e7 samples.
    let mean = batch.snr.par_iter().map(|&x| g(x)).sum::<f64>() / n;
    let ss = batch.snr.par_iter().map(|&x| (g(x) - mean).powi(2)).sum::<f64>();
    let var = if batch.len() > 1 { ss / (n - 1.0) } else { 0.0 };
    Ok(MetricEstimate { value: mean, stderr: (var / n).sqrt() })
}

/// Conditional error probability `(a/2) erfc(√(bγ/2))`.
pub fn conditional_sep(gamma: f64, coeffs: ModulationCoeffs) -> f64 {
    coeffs.a / 2.0 * libm::erfc((coeffs.b * gamma.max(0.0) / 2.0).sqrt())
}

pub fn estimate_metrics(batch: &SampleBatch, gamma_th: f64, coeffs: ModulationCoeffs) -> Result<MetricEstimates> {
    Ok(MetricEstimates {
        outage: estimate_cdf(batch, gamma_th)?,
        asep: estimate_mean(batch, |g| conditional_sep(g, coeffs))?,
        capacity: estimate_mean(batch, |g| g.ln_1p() / std::f64::consts::LN_2)?,
    })
}

/// Empirical `P(Γ < γ)`.
pub fn estimate_cdf(batch: &SampleBatch, gamma: f64) -> Result<MetricEstimate> {
    estimate_mean(batch, |g| if g < gamma { 1.0 } else { 0.0 })
}

/// Empirical `E[e^{-sΓ}]`.
pub fn estimate_mgf(batch: &SampleBatch, s: f64) -> Result<MetricEstimate> {
    estimate_mean(batch, |g| (-s * g).exp())
}

/// Empirical `E[Γ^n]`.
pub fn estimate_moment(batch: &SampleBatch, n: f64) -> Result<MetricEstimate> {
    estimate_mean(batch, |g| g.powf(n))
}
