//! Contour integrals of `ζ'/ζ` and `ζ` for pole counting and residues.

use std::cell::RefCell;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::Rect;
use crate::error::{Error, Result};
use crate::numerics::cplx::I;
use crate::numerics::quad::{integrate, QuadConfig, Scalar};
use crate::zeta::ZetaEvaluator;

/// `ζ'(s)` from fourth-order central differences along both axes, averaged.
pub fn derivative(ev: &ZetaEvaluator, s: Complex64) -> Result<Complex64> {
    let h = 1e-5 * (1.0 + s.norm());
    let stencil = |dir: Complex64| -> Result<Complex64> {
        let f = |k: f64| ev.value(s + dir * (k * h));
        Ok((f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h * dir))
    };
    Ok(0.5 * (stencil(Complex64::new(1.0, 0.0))? + stencil(I)?))
}

/// Derivative of `1/ζ`, which stays analytic at poles of `ζ`.
pub fn inverse_and_derivative(ev: &ZetaEvaluator, s: Complex64) -> Result<(Complex64, Complex64)> {
    let inv = |s: Complex64| match ev.value(s) {
        Ok(v) => Ok(1.0 / v),
        Err(Error::Pole { .. }) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    };
    let h = 1e-5 * (1.0 + s.norm());
    let stencil = |dir: Complex64| -> Result<Complex64> {
        let f = |k: f64| inv(s + dir * (k * h));
        Ok((f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h * dir))
    };
    Ok((inv(s)?, 0.5 * (stencil(Complex64::new(1.0, 0.0))? + stencil(I)?)))
}

fn log_derivative(ev: &ZetaEvaluator, s: Complex64) -> Result<Complex64> {
    Ok(derivative(ev, s)? / ev.value(s)?)
}

/// The moments `(1/2πi) ∮ (s - c)^k ζ'/ζ ds` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments3(pub [Complex64; 3]);

impl Add for Moments3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Moments3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Moments3 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self(self.0.map(|v| v * k))
    }
}

impl Scalar for Moments3 {
    fn zero() -> Self {
        Self([Complex64::new(0.0, 0.0); 3])
    }
    fn magnitude(self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CellMoments {
    pub center: Complex64,
    pub m: Moments3,
    pub abs_err: f64,
}

impl CellMoments {
    /// Zeros minus poles, counted with multiplicity, when the integral is
    /// close enough to an integer to be trusted.
    pub fn count(&self) -> Option<i64> {
        let m0 = self.m.0[0];
        let k = m0.re.round();
        ((m0 - k).norm() <= 1e-3).then_some(k as i64)
    }
}

/// Moments of `ζ'/ζ` over the boundary of `rect`, shifted to its centre.
pub fn rect_moments(ev: &ZetaEvaluator, rect: &Rect) -> Result<CellMoments> {
    let center = rect.center();
    let corners = rect.corners();
    let cfg = QuadConfig {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_intervals: 300,
    };
    let failure = RefCell::new(None);
    let mut total = Moments3::zero();
    let mut err = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let d = b - a;
        let q = integrate(
            |tau: f64| {
                let s = a + d * tau;
                match log_derivative(ev, s) {
                    Ok(g) => {
                        let w = g * d / (TAU * I);
                        let z = s - center;
                        Moments3([w, w * z, w * z * z])
                    }
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        Moments3::zero()
                    }
                }
            },
            0.0,
            1.0,
            &cfg,
        );
        total = total + q.value;
        err += q.abs_err;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(CellMoments {
        center,
        m: total,
        abs_err: err,
    })
}

/// Trapezoid rule for `(1/2πi) ∮ f(s) ds` on the circle `|s - c| = r`.
pub fn circle<F>(c: Complex64, r: f64, n: usize, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let e = Complex64::from_polar(r, TAU * j as f64 / n as f64);
        // ds = i (s - c) dθ
        sum += f(c + e)? * e;
    }
    Ok(sum / n as f64)
}

/// Moments `(1/2πi) ∮ (s - c)^k ζ'/ζ ds`, `k = 0, 1, 2`, on a circle.
pub fn circle_moments(ev: &ZetaEvaluator, c: Complex64, r: f64, n: usize) -> Result<Moments3> {
    let mut m = [Complex64::new(0.0, 0.0); 3];
    for (k, slot) in m.iter_mut().enumerate() {
        *slot = circle(c, r, n, |s| Ok(log_derivative(ev, s)? * (s - c).powu(k as u32)))?;
    }
    Ok(Moments3(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{Norm, RegionSpec};

    #[test]
    fn derivative_of_power_closed_form() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::power_subgraph(3.0).unwrap(), Norm::Sup).unwrap();
        let s = Complex64::new(-3.0, 2.0);
        let exact = -1.0 / ((s + 4.0) * (s + 4.0));
        assert!((derivative(&ev, s).unwrap() - exact).norm() < 1e-9);
    }

    #[test]
    fn rectangle_counts_a_pole() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::power_subgraph(3.0).unwrap(), Norm::Sup).unwrap();
        let rect = Rect::new(-4.3, -3.6, -0.5, 0.7);
        let m = rect_moments(&ev, &rect).unwrap();
        assert_eq!(m.count(), Some(-1));
        let loc = m.center + m.m.0[1] / m.m.0[0];
        assert!((loc - Complex64::new(-4.0, 0.0)).norm() < 1e-8);
    }
}
