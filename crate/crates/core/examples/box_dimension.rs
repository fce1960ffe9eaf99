//! Box dimension and Minkowski contents at infinity from 64-point scans.

use zeta_at_infinity::minkowski::{estimate_dimension, DimensionOptions};
use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::tube::{tube_scan, Grid, Method};

fn main() -> zeta_at_infinity::Result<()> {
    let regions = [
        (RegionSpec::interval_chain(2.0, 3.0)?, Norm::Sup),
        (RegionSpec::power_subgraph(3.0)?, Norm::Euclidean),
        (RegionSpec::cantor_drum(1.0 / 3.0, 2.0)?, Norm::Sup),
        (RegionSpec::stacked_power(), Norm::Sup),
        (RegionSpec::exp_subgraph(), Norm::Sup),
    ];
    let opts = DimensionOptions::default();
    for (region, norm) in regions {
        let scan = tube_scan(&region, norm, Grid::standard(region.t_min()), Method::Analytic)?;
        let est = estimate_dimension(&scan, region.ambient_dim(), &opts)?;
        println!(
            "{:<15} D = {:<22} expected {:<22} verdict {:?}",
            region.family(),
            format!("{:?}", est.d_hat),
            format!("{:?}", region.known_dimension()),
            est.measurability.verdict,
        );
        println!("    content in [{:?}, {:?}]", est.content_lower, est.content_upper);
        if let Some(p) = est.measurability.oscillation.period_log_t {
            println!("    log-periodic residual with period {p:.4} (ln 3 = {:.4})", 3f64.ln());
        }
    }
    Ok(())
}
