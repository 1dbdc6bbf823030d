use thz_alphaf::channel::{AbsorptionTable, LinkConfig};
use thz_alphaf::mcsim::{estimate_metrics, simulate, SimConfig};
use thz_alphaf::metrics::{capacity, outage, outage_asymptotic, ModulationCoeffs};
use thz_alphaf::mobility::Topology;
use thz_alphaf::snrstats::SnrModel;

fn main() -> thz_alphaf::Result<()> {
    // 300 GHz, d0 = 1 m, δ = 2, R_M = 50 m, 1-D mobility, γ̄ = 150 dB,
    // β = 3, α = 3, μ = 3, m = 1.5
    let cfg = LinkConfig::new(300e9, 1.0, 2.0, 50.0, Topology::OneD, 1e15, 3.0, 3.0, 3.0, 1.5)?;
    let model = SnrModel::new(cfg, &AbsorptionTable::bundled())?;

    println!("outage   {:.3e}", outage(&model, 1.0)?);
    println!("asymptote {:?}", outage_asymptotic(&model, 1.0)?.asymptotic);
    println!("capacity {:.3}", capacity(&model)?);

    let batch = simulate(&model, &SimConfig::new(1_000_000, 7, 4)?)?;
    let mc = estimate_metrics(&batch, 1.0, ModulationCoeffs::BPSK)?;
    println!("MC outage {:.3e} ± {:.1e}", mc.outage.value, mc.outage.stderr);
    Ok(())
}
