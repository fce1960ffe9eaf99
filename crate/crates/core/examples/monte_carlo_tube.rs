//! Stratified Monte Carlo tube volumes, including a set given only by its indicator.

use std::sync::Arc;

use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::tube::{tube_volume_analytic, tube_volume_mc};

fn main() -> zeta_at_infinity::Result<()> {
    let drum = RegionSpec::cantor_drum(1.0 / 3.0, 2.0)?;
    for t in [3.0, 9.0, 27.0] {
        let mc = tube_volume_mc(&drum, t, Norm::Sup, 200_000, 1)?;
        let exact = tube_volume_analytic(&drum, t, Norm::Sup)?.volume;
        println!("t = {t:>4}: {:.6} ± {:.1e} (exact {exact:.6})", mc.volume, mc.stderr);
    }

    // lower half of the power subgraph, known only through its indicator
    let envelope = RegionSpec::power_subgraph(2.0)?;
    let inside = Arc::new(|p: &[f64]| p[0] > 1.0 && p[1] > 0.0 && 2.0 * p[1] < p[0].powi(-2));
    let region = RegionSpec::generic(2, inside, envelope)?;
    let mc = tube_volume_mc(&region, 2.0, Norm::Euclidean, 400_000, 3)?;
    println!("half subgraph beyond radius 2: {:.5} ± {:.1e} (about 0.25)", mc.volume, mc.stderr);
    Ok(())
}
