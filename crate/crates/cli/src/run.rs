//! Sweep execution.

use rayon::prelude::*;
use thz_alphaf::channel::{AbsorptionTable, LinkConfig};
use thz_alphaf::mcsim::{
    conditional_sep, estimate_cdf, estimate_mean, estimate_mgf, estimate_moment, simulate, MetricEstimate, SampleBatch,
    SimConfig,
};
use thz_alphaf::metrics::{
    asep, asep_asymptote, capacity, capacity_asymptote, outage, outage_asymptote, ModulationCoeffs,
};
use thz_alphaf::snrstats::{snr_cdf, snr_mgf, snr_moment, snr_pdf, SnrModel};

use crate::config::{Axis, Command, McMetric, Params, RunSpec};
use crate::CliError;

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub axis: f64,
    pub exact: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<MetricEstimate>,
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn load_table(p: &Params) -> Result<AbsorptionTable, CliError> {
    match &p.absorption_table {
        None => Ok(AbsorptionTable::bundled()),
        Some(path) => AbsorptionTable::from_path(path).map_err(|e| CliError::config(path, e)),
    }
}

fn build_model(p: &Params, table: &AbsorptionTable) -> thz_alphaf::Result<SnrModel> {
    let cfg = LinkConfig::new(
        p.frequency_ghz * 1e9,
        p.d0,
        p.delta,
        p.r_max,
        p.topology,
        db(p.gamma_bar_db),
        p.beta,
        p.alpha,
        p.mu,
        p.m,
    )?;
    SnrModel::new(cfg, table)?.with_order(p.nodes)
}

fn coeffs(p: &Params) -> thz_alphaf::Result<ModulationCoeffs> {
    ModulationCoeffs::new(p.mod_a, p.mod_b)
}

fn mgf_arg(p: &Params) -> f64 {
    db(p.s_db.unwrap_or(-p.gamma_bar_db))
}

fn exact_point(cmd: Command, asymptotic: bool, p: &Params, m: &SnrModel) -> thz_alphaf::Result<(Option<f64>, Option<f64>)> {
    let th = db(p.gamma_th_db);
    let asym = |f: &dyn Fn() -> thz_alphaf::Result<f64>| if asymptotic { f().map(Some) } else { Ok(None) };
    Ok(match cmd {
        Command::Op | Command::Cdf => {
            let v = if cmd == Command::Op { outage(m, th)? } else { snr_cdf(m, th)? };
            (Some(v), asym(&|| outage_asymptote(m, th))?)
        }
        Command::Asep => {
            let c = coeffs(p)?;
            (Some(asep(m, c)?), asym(&|| asep_asymptote(m, c))?)
        }
        Command::Capacity => (Some(capacity(m)?), asym(&|| capacity_asymptote(m))?),
        Command::Pdf => (Some(snr_pdf(m, th)?), None),
        Command::Mgf => (Some(snr_mgf(m, mgf_arg(p))?), None),
        Command::Moment => (Some(snr_moment(m, p.order)?), None),
        Command::Mc(_) => (None, None),
    })
}

fn mc_point(cmd: Command, p: &Params, batch: &SampleBatch) -> thz_alphaf::Result<MetricEstimate> {
    let metric = match cmd {
        Command::Op | Command::Cdf | Command::Mc(McMetric::Op) => McMetric::Op,
        Command::Asep | Command::Mc(McMetric::Asep) => McMetric::Asep,
        Command::Capacity | Command::Mc(McMetric::Capacity) => McMetric::Capacity,
        Command::Mgf => return estimate_mgf(batch, mgf_arg(p)),
        Command::Moment => return estimate_moment(batch, p.order),
        Command::Pdf => unreachable!("rejected by RunSpec::check"),
    };
    match metric {
        McMetric::Op => estimate_cdf(batch, db(p.gamma_th_db)),
        McMetric::Asep => {
            let c = coeffs(p)?;
            estimate_mean(batch, |g| conditional_sep(g, c))
        }
        McMetric::Capacity => estimate_mean(batch, |g| (1.0 + g).log2()),
    }
}

fn at_point(axis: Axis, x: f64) -> impl Fn(thz_alphaf::Error) -> CliError {
    move |source| CliError::Point { axis: axis.column(), value: x, source }
}

/// Evaluate every sweep point. Rows come back in axis order.
pub fn execute(spec: &RunSpec) -> Result<Vec<Row>, CliError> {
    spec.check()?;
    let table = load_table(&spec.params)?;
    let xs = spec.axis_values();
    let points: Vec<Params> = xs.iter().map(|&x| spec.axis.apply(&spec.params, x)).collect();
    // Fail fast on parameters that are invalid everywhere.
    build_model(&points[0], &table).map_err(at_point(spec.axis, xs[0]))?;

    let mut rows: Vec<Row> = xs
        .par_iter()
        .zip(&points)
        .map(|(&x, p)| {
            let m = build_model(p, &table)?;
            let (exact, asymptotic) = exact_point(spec.command, spec.asymptotic, p, &m)?;
            Ok(Row { axis: x, exact, asymptotic, mc: None })
        })
        .collect::<Result<_, thz_alphaf::Error>>()
        .map_err(|e| locate(spec, &table, &xs, &points, e))?;

    if let Some(mc) = spec.mc {
        let sim = SimConfig::new(mc.samples, mc.seed, mc.workers).map_err(|e| CliError::Usage(e.to_string()))?;
        // Along SNR axes one unit-SNR batch is rescaled; elsewhere the batch
        // depends on the point only through the model.
        let shared = if spec.axis.is_snr_scale() {
            let mut unit = points[0].clone();
            unit.gamma_bar_db = 0.0;
            let m = build_model(&unit, &table).map_err(at_point(spec.axis, xs[0]))?;
            Some(simulate(&m, &sim).map_err(at_point(spec.axis, xs[0]))?)
        } else if spec.axis != Axis::FrequencyGhz {
            let m = build_model(&points[0], &table).map_err(at_point(spec.axis, xs[0]))?;
            Some(simulate(&m, &sim).map_err(at_point(spec.axis, xs[0]))?)
        } else {
            None
        };
        for (row, p) in rows.iter_mut().zip(&points) {
            let estimate = match &shared {
                Some(b) if spec.axis.is_snr_scale() => mc_point(spec.command, p, &b.scaled(db(p.gamma_bar_db))),
                Some(b) => mc_point(spec.command, p, b),
                None => build_model(p, &table)
                    .and_then(|m| simulate(&m, &sim))
                    .and_then(|b| mc_point(spec.command, p, &b)),
            };
            row.mc = Some(estimate.map_err(at_point(spec.axis, row.axis))?);
        }
    }
    Ok(rows)
}

/// Attach the first failing axis value to an error from the parallel pass.
fn locate(spec: &RunSpec, table: &AbsorptionTable, xs: &[f64], points: &[Params], e: thz_alphaf::Error) -> CliError {
    for (&x, p) in xs.iter().zip(points) {
        let r = build_model(p, table).and_then(|m| exact_point(spec.command, spec.asymptotic, p, &m));
        if let Err(e) = r {
            return at_point(spec.axis, x)(e);
        }
    }
    CliError::Point { axis: spec.axis.column(), value: f64::NAN, source: e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigFile, McSpec, Overrides, SweepSpec};

    fn spec(command: Command, axis: Axis) -> RunSpec {
        RunSpec {
            tool_version: "test".into(),
            command,
            axis,
            sweep: Some(SweepSpec { start: 140.0, stop: 160.0, points: 3 }),
            asymptotic: false,
            mc: None,
            params: Params::resolve(&ConfigFile::default(), &Overrides::default(), None),
        }
    }

    #[test]
    fn outage_sweep_is_ordered_and_decreasing() {
        let rows = execute(&spec(Command::Op, Axis::SnrDb)).unwrap();
        assert_eq!(rows.iter().map(|r| r.axis).collect::<Vec<_>>(), vec![140.0, 150.0, 160.0]);
        let v: Vec<f64> = rows.iter().map(|r| r.exact.unwrap()).collect();
        assert!(v[0] > v[1] && v[1] > v[2]);
    }

    #[test]
    fn ratio_axis_matches_snr_axis_at_unit_threshold() {
        let a = execute(&spec(Command::Op, Axis::SnrDb)).unwrap();
        let b = execute(&spec(Command::Op, Axis::RatioDb)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rescaled_batch_tracks_exact_capacity() {
        let mut s = spec(Command::Capacity, Axis::SnrDb);
        s.mc = Some(McSpec { samples: 20_000, seed: 3, workers: 2 });
        for r in execute(&s).unwrap() {
            let mc = r.mc.unwrap();
            assert!((mc.value - r.exact.unwrap()).abs() < 5.0 * mc.stderr + 1e-3);
        }
    }

    #[test]
    fn incompatible_requests_are_rejected() {
        let mut s = spec(Command::Pdf, Axis::SnrDb);
        s.asymptotic = true;
        assert!(matches!(execute(&s), Err(CliError::Usage(_))));
        assert!(matches!(execute(&spec(Command::Capacity, Axis::Order)), Err(CliError::Usage(_))));
        assert!(matches!(execute(&spec(Command::Mc(McMetric::Op), Axis::SnrDb)), Err(CliError::Usage(_))));
    }

    #[test]
    fn invalid_point_is_identified() {
        let mut s = spec(Command::Moment, Axis::Order);
        s.sweep = Some(SweepSpec { start: 0.5, stop: 5.0, points: 4 });
        match execute(&s) {
            Err(CliError::Point { axis, value, .. }) => assert_eq!((axis, value), ("order", 3.5)),
            other => panic!("{other:?}"),
        }
    }
}
