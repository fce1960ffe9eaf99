//! Residues at the box dimension against `-(N + D)` times the Minkowski contents.

use zeta_at_infinity::cplxdim::residue_content_check;
use zeta_at_infinity::regions::{Norm, RegionSpec};

fn main() -> zeta_at_infinity::Result<()> {
    let cases = [
        (RegionSpec::power_subgraph(3.0)?, Norm::Sup),
        (RegionSpec::power_subgraph(3.0)?, Norm::Euclidean),
        (RegionSpec::interval_chain(2.0, 3.0)?, Norm::Sup),
        (RegionSpec::cantor_drum(1.0 / 3.0, 2.0)?, Norm::Sup),
        (RegionSpec::stacked_power(), Norm::Sup),
    ];
    for (region, norm) in cases {
        let r = residue_content_check(&region, norm)?;
        match (&r.skipped, r.residue) {
            (Some(reason), _) => println!("{:<15} {norm}: skipped, {reason}", r.family),
            (None, Some(res)) => println!(
                "{:<15} {norm}: residue {:.6} in [{:.6}, {:.6}] via {:?}, passed {}",
                r.family, res.re, r.bounds.0, r.bounds.1, r.source.unwrap(), r.passed
            ),
            _ => unreachable!(),
        }
    }
    Ok(())
}
