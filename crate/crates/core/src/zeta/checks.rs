use num_complex::Complex64;
use serde::Serialize;

use super::numeric::tube_integral;
use super::{Mode, ZetaEvaluator};
use crate::error::{Error, Result};
use crate::regions::{Norm, RegionSpec};
use crate::tube::tube_value;

/// `|ζ(s;T1) - ζ(s;T2) - ∫_{T1<|x|<T2} |x|^{-s-N} dx|`, the annulus integral
/// taken from the tube identity on `[T1, T2]`.
pub fn zeta_t_shift_check(ev: &ZetaEvaluator, s: Complex64, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 > 0.0 && t1 <= t2) {
        return Err(Error::param("T", format!("need 0 < T1 <= T2, got {t1}, {t2}")));
    }
    let z1 = ev.with_t(t1)?.eval(s)?.value;
    let z2 = ev.with_t(t2)?.eval(s)?.value;
    if t1 == t2 {
        return Ok((z1 - z2).norm());
    }
    let n = ev.region().ambient_dim() as f64;
    let fine = ev.with_t(t1)?.with_tol(1e-12);
    let boundary = |t: f64| -> Result<Complex64> {
        Ok((-(s + n) * t.ln()).exp() * tube_value(ev.region(), t, ev.norm())?)
    };
    let inner = tube_integral(&fine, s, t1, Some(t2))?;
    let annulus = boundary(t1)? - boundary(t2)? - (s + n) * inner.value;
    Ok((z1 - z2 - annulus).norm())
}

#[derive(Debug, Clone, Serialize)]
pub struct AbscissaPoint {
    pub eps: f64,
    pub s: f64,
    /// `ζ(D̂ + ε)`, absent when `D̂ + ε` lies outside the evaluator's domain.
    pub value: Option<f64>,
    pub scaled: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbscissaReport {
    pub d_hat: f64,
    pub mode: Mode,
    pub points: Vec<AbscissaPoint>,
    /// `ε ζ(D̂ + ε)` settles to a nonzero constant.
    pub grows_like_inverse: bool,
    /// Real pole implied by the last two values of `1/ζ`, assuming a simple pole.
    pub pole_estimate: Option<f64>,
    pub onset_matches: bool,
}

pub const ABSCISSA_STEPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Samples `ζ` on the real axis just right of `d_hat`.
pub fn abscissa_check(region: &RegionSpec, norm: Norm, d_hat: f64) -> Result<AbscissaReport> {
    let ev = ZetaEvaluator::closed_form(region.clone(), norm)
        .or_else(|_| ZetaEvaluator::numeric(region.clone(), norm))?
        .with_margin(0.01);
    let mut points = Vec::with_capacity(ABSCISSA_STEPS.len());
    for eps in ABSCISSA_STEPS {
        let s = d_hat + eps;
        let value = match ev.eval(Complex64::new(s, 0.0)) {
            Ok(z) => Some(z.value.re),
            Err(Error::Domain { .. }) => None,
            Err(e) => return Err(e),
        };
        points.push(AbscissaPoint {
            eps,
            s,
            value,
            scaled: value.map(|v| v * eps),
        });
    }
    let tail: Vec<&AbscissaPoint> = points.iter().rev().take(2).collect();
    let (grows_like_inverse, pole_estimate) = match (tail[0].value, tail[1].value) {
        (Some(v0), Some(v1)) => {
            let (a, b) = (v0 * tail[0].eps, v1 * tail[1].eps);
            let grows = a.abs() > 1e-6 && (a - b).abs() <= 0.2 * a.abs();
            // 1/ζ is close to linear in s next to a simple pole
            let (x0, x1) = (1.0 / v0, 1.0 / v1);
            let slope = (x1 - x0) / (tail[1].s - tail[0].s);
            let root = (slope.abs() > 1e-12).then(|| tail[0].s - x0 / slope);
            (grows, root)
        }
        _ => (false, None),
    };
    let onset_matches = grows_like_inverse && pole_estimate.is_some_and(|p| (p - d_hat).abs() <= 0.05);
    Ok(AbscissaReport {
        d_hat,
        mode: ev.mode(),
        points,
        grows_like_inverse,
        pole_estimate,
        onset_matches,
    })
}
