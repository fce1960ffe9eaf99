use num_complex::Complex64;

use super::{ZetaEvaluator, ZetaValue};
use crate::error::{Error, Result};
use crate::numerics::cplx::{expm1_over, pow_neg};
use crate::numerics::hurwitz::hurwitz;
use crate::regions::{CantorDrum, IntervalChain, RegionSpec};

/// Relative distance under which `s` is taken to sit on a declared pole.
const POLE_TOL: f64 = 1e-14;

pub(super) fn evaluate(ev: &ZetaEvaluator, s: Complex64) -> Result<ZetaValue> {
    let t = ev.t();
    match ev.region() {
        RegionSpec::IntervalChain(ic) => interval_chain(ic, t, s),
        RegionSpec::PowerSubgraph(p) => {
            let z = s + p.alpha() + 1.0;
            pole_check(z, s)?;
            let value = pow_neg(t.max(1.0), z) / z;
            Ok(ZetaValue {
                value,
                abs_err: 1e-16 * value.norm(),
            })
        }
        RegionSpec::StackedPower(_) => stacked(t, s),
        RegionSpec::CantorDrum(c) => cantor(c, t, s),
        _ => Err(Error::Unsupported("closed form for this region".into())),
    }
}

fn pole_check(z: Complex64, s: Complex64) -> Result<()> {
    if z.norm() <= POLE_TOL * (1.0 + s.norm()) {
        return Err(Error::Pole { location: s - z });
    }
    Ok(())
}

/// `(1/s) Σ_j (a_j^{-s} - b_j^{-s})` over the intervals beyond `T`.
///
/// Each term is written as `a^{-s} L (e^{-sL} - 1)/(-sL)` with
/// `L = log(b/a)`, which is smooth through `s = 0`. Past index `J` the
/// binomial expansion of `(1 + j^{-α-β})^{-s}` turns the tail into Hurwitz
/// zeta values.
fn interval_chain(ic: &IntervalChain, t: f64, s: Complex64) -> Result<ZetaValue> {
    let d = ic.dimension();
    if s.re <= d {
        return Err(Error::Domain { s, bound: d });
    }
    let t_min = ic.t_min();
    if t < t_min {
        return Err(Error::UnsupportedRadius { t, t_min });
    }
    let (alpha, beta) = (ic.alpha(), ic.beta());
    let term = |a: f64, gap: f64| {
        let l = (gap / a).ln_1p();
        pow_neg(a, s) * l * expm1_over(-s * l)
    };
    let j = ic.cell_of(t);
    let jf = j as f64;
    let (a_j, l_j) = (ic.left(jf), ic.length(jf));
    let mut sum = Complex64::new(0.0, 0.0);
    let inside = (a_j - t) + l_j;
    if inside > 0.0 {
        sum += term(t, inside);
    }
    let start = jf + 1.0;
    let big = (4.0 * (s.norm() + 2.0)).powf(1.0 / (alpha + beta)).ceil();
    let cut = (start + 32.0).max(big);
    let mut k = start;
    while k < cut {
        sum += term(ic.left(k), ic.length(k));
        k += 1.0;
    }
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    for n in 1..400 {
        let piece = coeff * hurwitz(alpha * s + n as f64 * (alpha + beta), cut);
        tail += piece;
        if piece.norm() <= 1e-17 * (sum + tail).norm() {
            break;
        }
        coeff *= (-s - n as f64) / (n + 1) as f64;
    }
    let value = sum + tail;
    Ok(ZetaValue {
        value,
        abs_err: 1e-14 * value.norm().max(1e-300),
    })
}

/// `Σ_k 2^{-k} k^{-1} T^{-z_k} / z_k` with `z_k = s + 2 + 1/k`, `T ≥ 1`.
fn stacked(t: f64, s: Complex64) -> Result<ZetaValue> {
    let t = t.max(1.0);
    let ln_t = t.ln();
    let sigma = s.re + 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=2_000_000u64 {
        let kf = k as f64;
        let z = s + 2.0 + 1.0 / kf;
        pole_check(z, s)?;
        sum += 0.5f64.powi(k.min(2000) as i32) / kf * (-z * ln_t).exp() / z;
        // k'|z_k'| for k' > k, bounded below as in the Weierstrass M-test
        let next = kf + 1.0;
        let mut lb = next * s.im.abs();
        if sigma >= 0.0 {
            lb = lb.max(1.0);
        } else if 1.0 / next < -sigma / 2.0 {
            lb = lb.max(-next * sigma / 2.0);
        }
        let growth = (-(sigma.min(sigma + 1.0 / next)) * ln_t).exp().max(1.0);
        if lb > 0.0 {
            let bound = 0.5f64.powi(k.min(1100) as i32) * growth / lb;
            if bound <= 1e-13 {
                return Ok(ZetaValue {
                    value: sum,
                    abs_err: bound,
                });
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "stacked series at s = {s} did not reach its tail bound"
    )))
}

/// `Σ_m 2^{m-1} max(T, a^{-m})^{-z} / z` with `z = s + b + 1`.
fn cantor(c: &CantorDrum, t: f64, s: Complex64) -> Result<ZetaValue> {
    let z = s + c.b() + 1.0;
    pole_check(z, s)?;
    let l = c.log_inv_a();
    let period = std::f64::consts::TAU / l;
    let base = 2f64.ln() / l;
    let k = (z.im / period).round();
    let lattice = Complex64::new(base, k * period);
    if (z - lattice).norm() <= POLE_TOL * (1.0 + s.norm()) {
        return Err(Error::Pole {
            location: lattice - (c.b() + 1.0),
        });
    }
    let mut levels = 0i32;
    while c.a().powi(-(levels + 1)) <= t {
        levels += 1;
    }
    // 2 a^z
    let q = 2.0 * (-z * l).exp();
    let head = (2f64.powi(levels) - 1.0) * pow_neg(t, z) / z;
    let rest = q.powi(levels + 1) / (2.0 * z * (1.0 - q));
    let value = head + rest;
    Ok(ZetaValue {
        value,
        abs_err: 1e-15 * value.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::Norm;
    use crate::zeta::ZetaEvaluator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn stacked_at_minus_two() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::stacked_power(), Norm::Sup).unwrap();
        let z = ev.eval(c(-2.0, 0.0)).unwrap();
        assert!((z.value - 1.0).norm() < 1e-12);
        assert!(z.abs_err <= 1e-12);
        assert!(matches!(ev.eval(c(-3.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn cantor_at_minus_two() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::cantor_drum(1.0 / 3.0, 2.0).unwrap(), Norm::Sup).unwrap();
        assert!((ev.value(c(-2.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!(matches!(ev.eval(c(-3.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn cantor_general_radius_matches_direct_sum() {
        let cd = CantorDrum::new(1.0 / 3.0, 2.0).unwrap();
        let s = c(-1.7, 2.0);
        for t in [1.0f64, 3.0, 5.0, 30.0] {
            let z = s + 3.0;
            let direct: Complex64 = (1..200)
                .map(|m| 2f64.powi(m - 1) * pow_neg(t.max(3f64.powi(m)), z) / z)
                .sum();
            let v = cantor(&cd, t, s).unwrap().value;
            assert!((v - direct).norm() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn interval_chain_removable_point() {
        let ic = IntervalChain::new(2.0, 3.0).unwrap();
        let at0 = interval_chain(&ic, 1.0, c(0.0, 0.0)).unwrap().value;
        let near = interval_chain(&ic, 1.0, c(1e-7, 0.0)).unwrap().value;
        assert!((at0 - near).norm() < 1e-6);
        // at s = 0 the terms reduce to Σ log(b_j / a_j)
        let logs: f64 = (1..200_000).map(|j| (1.0 / (j as f64).powi(5)).ln_1p()).sum();
        assert!((at0.re - logs).abs() < 1e-12);
    }

    #[test]
    fn interval_chain_domain() {
        let ic = IntervalChain::new(2.0, 3.0).unwrap();
        assert!(matches!(interval_chain(&ic, 1.0, c(-2.0, 0.0)), Err(Error::Domain { .. })));
    }
}
