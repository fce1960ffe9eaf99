//! Poles of the Cantor drum's zeta function: a vertical lattice on the critical line.

use zeta_at_infinity::cplxdim::{find_poles, principal_dimensions, WindowSpec};
use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::zeta::ZetaEvaluator;

fn main() -> zeta_at_infinity::Result<()> {
    let drum = RegionSpec::cantor_drum(1.0 / 3.0, 2.0)?;
    let ev = ZetaEvaluator::closed_form(drum, Norm::Sup)?;
    let window = WindowSpec::new(-2.5, -2.2, -12.0, 12.0)?;
    for p in find_poles(&ev, &window)? {
        println!(
            "pole {:.10} {:+.10}i  order {}  residue {:.10}",
            p.location.re, p.location.im, p.order, p.residue
        );
    }
    let principal = principal_dimensions(&ev, 20.0)?;
    let spacing = principal[1].location.im - principal[0].location.im;
    println!("{} principal poles, spacing {spacing:.8} (2π/ln 3 = {:.8})", principal.len(), std::f64::consts::TAU / 3f64.ln());

    let stacked = ZetaEvaluator::closed_form(RegionSpec::stacked_power(), Norm::Sup)?;
    for p in find_poles(&stacked, &WindowSpec::new(-3.1, -2.3, -0.5, 0.5)?)? {
        println!("stacked pole {:.10}  residue {:.10}", p.location.re, p.residue.re);
    }
    match find_poles(&stacked, &WindowSpec::new(-2.2, -1.9, -0.5, 0.5)?) {
        Err(e) => println!("window around -2: {e}"),
        Ok(p) => println!("unexpected: {} poles", p.len()),
    }
    Ok(())
}
