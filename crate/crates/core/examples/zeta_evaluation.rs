//! The distance zeta function at infinity, by quadrature and in closed form.

use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::zeta::{abscissa_check, zeta_t_shift_check, ZetaEvaluator};
use zeta_at_infinity::Complex64;

fn main() -> zeta_at_infinity::Result<()> {
    let points = [Complex64::new(-1.8, 0.0), Complex64::new(-1.5, 2.0), Complex64::new(0.0, 0.0)];
    let chain = RegionSpec::interval_chain(2.0, 3.0)?;
    let numeric = ZetaEvaluator::numeric(chain.clone(), Norm::Sup)?;
    let closed = ZetaEvaluator::closed_form(chain, Norm::Sup)?;
    println!("interval chain, T = a_j0 = {}", numeric.t());
    for s in points {
        let a = numeric.eval(s)?;
        let b = closed.eval(s)?;
        println!("  s = {s:>10}: numeric {:.12}  series {:.12}", a.value, b.value);
    }

    let stacked = ZetaEvaluator::closed_form(RegionSpec::stacked_power(), Norm::Sup)?;
    println!("stacked power: zeta(-2) = {}", stacked.value(Complex64::new(-2.0, 0.0))?);
    match stacked.eval(Complex64::new(-2.5, 0.0)) {
        Err(e) => println!("stacked power at -2.5: {e}"),
        Ok(z) => println!("unexpected value {}", z.value),
    }

    let power = RegionSpec::power_subgraph(2.0)?;
    let ev = ZetaEvaluator::numeric(power.clone(), Norm::Euclidean)?;
    let r = zeta_t_shift_check(&ev, Complex64::new(-2.5, 1.0), 1.0, 4.0)?;
    println!("T-shift residual between T = 1 and T = 4: {r:.2e}");

    let report = abscissa_check(&RegionSpec::power_subgraph(3.0)?, Norm::Sup, -4.0)?;
    for p in &report.points {
        println!("  eps = {:<6} eps * zeta = {:?}", p.eps, p.scaled);
    }
    Ok(())
}
