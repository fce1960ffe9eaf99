//! Inversion `x ↦ x/|x|²` and the zeta function of the inverted drum near the origin.

use zeta_at_infinity::inversion::{fd_jacobian_det, inversion_identity_check, inversion_jacobian_det, invert_point};
use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::Complex64;

fn main() -> zeta_at_infinity::Result<()> {
    let x = [2.0, 0.5];
    let y = invert_point(&x)?;
    println!("Φ({x:?}) = {y:?}, Φ(Φ(x)) = {:?}", invert_point(&y)?);
    println!(
        "det Φ'(x) = {:.10}, finite differences {:.10}",
        inversion_jacobian_det(&x)?,
        fd_jacobian_det(&x)?
    );

    let region = RegionSpec::power_subgraph(2.0)?;
    let s = [Complex64::new(-2.5, 0.0), Complex64::new(-2.8, 1.0)];
    let report = inversion_identity_check(&region, Norm::Euclidean, 1.0, &s, 1_000_000, 7)?;
    for e in &report.entries {
        println!(
            "s = {}: zeta {:.6}  inverted {:.6} ± {:.1e}  passed {}",
            e.s, e.zeta, e.inverted.estimate, e.inverted.stderr, e.passed
        );
    }
    Ok(())
}
