//! Tube volumes `|B_t(0)^c ∩ Ω|` on a geometric grid, written as CSV.

use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::tube::{tube_scan, Grid, Method};

fn main() -> zeta_at_infinity::Result<()> {
    let region = RegionSpec::power_subgraph(2.0)?;
    let grid = Grid {
        t0: 1.0,
        ratio: 2.0,
        count: 6,
    };
    let scan = tube_scan(&region, Norm::Sup, grid, Method::Analytic)?;
    scan.write_csv(std::io::stdout())?;

    // the euclidean tube is slightly smaller near the corner at (1, 1)
    let euclid = tube_scan(&region, Norm::Euclidean, grid, Method::Analytic)?;
    for (s, e) in scan.samples.iter().zip(&euclid.samples) {
        println!("t = {:>5}: sup {:.6}  euclidean {:.6}", s.t, s.volume, e.volume);
    }
    Ok(())
}
