//! Planar regions built from stacked subgraphs `{x > x0, 0 < y - offset < f(x)}`.

use serde::{Deserialize, Serialize};

/// Height profile of a subgraph component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `coefficient * x^(-exponent)` with `exponent > 1`.
    Power { coefficient: f64, exponent: f64 },
    /// `e^(-x)`.
    Exp,
}

impl Profile {
    pub fn height(&self, x: f64) -> f64 {
        match *self {
            Profile::Power {
                coefficient,
                exponent,
            } => coefficient * x.powf(-exponent),
            Profile::Exp => (-x).exp(),
        }
    }

    /// Antiderivative tail `∫_x^∞ f`.
    pub fn tail(&self, x: f64) -> f64 {
        match *self {
            Profile::Power {
                coefficient,
                exponent,
            } => coefficient * x.powf(1.0 - exponent) / (exponent - 1.0),
            Profile::Exp => (-x).exp(),
        }
    }

    /// `∫_lo^hi f` for `lo <= hi` (`hi` may be infinite).
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        match *self {
            Profile::Power { exponent, .. } if hi.is_finite() => {
                // tail(lo) * (1 - (lo/hi)^(exponent-1)) without cancellation
                let r = -(exponent - 1.0) * (hi / lo).ln();
                -self.tail(lo) * r.exp_m1()
            }
            Profile::Exp if hi.is_finite() => -(-lo).exp() * (lo - hi).exp_m1(),
            _ => self.tail(lo),
        }
    }

    /// Point `x` in `[lo, hi)` with `∫_lo^x f = u * ∫_lo^hi f`, `u ∈ [0, 1)`.
    pub fn inverse_cdf(&self, lo: f64, hi: f64, u: f64) -> f64 {
        let x = match *self {
            Profile::Power { exponent, .. } => {
                let k = exponent - 1.0;
                // (x/lo)^(-k) = 1 - u (1 - (hi/lo)^(-k))
                let full = if hi.is_finite() {
                    -(-k * (hi / lo).ln()).exp_m1()
                } else {
                    1.0
                };
                let v = (-u * full).ln_1p();
                lo * (-v / k).exp()
            }
            Profile::Exp => {
                let full = if hi.is_finite() {
                    -(lo - hi).exp_m1()
                } else {
                    1.0
                };
                lo - (-u * full).ln_1p()
            }
        };
        x.min(hi)
    }
}

/// A group of identical subgraph copies stacked directly above each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub level: usize,
    pub copies: f64,
    pub first_offset: f64,
    /// Vertical distance between consecutive copies; equals `profile.height(x_threshold)`.
    pub spacing: f64,
    pub x_threshold: f64,
    pub profile: Profile,
}

impl Layer {
    pub fn measure(&self) -> f64 {
        self.copies * self.profile.tail(self.x_threshold)
    }

    /// Measure of the part of the layer with `x` in `[lo, hi)`.
    pub fn measure_between(&self, lo: f64, hi: f64) -> f64 {
        self.copies * self.profile.integral(lo.max(self.x_threshold), hi)
    }

    pub fn top(&self) -> f64 {
        self.first_offset + self.copies * self.spacing
    }

    /// Membership of `(x, y)`; `y` is assumed to lie in `[first_offset, top)`.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if x <= self.x_threshold {
            return false;
        }
        let rel = y - self.first_offset;
        let copy = (rel / self.spacing).floor();
        let local = rel - copy * self.spacing;
        local > 0.0 && local < self.profile.height(x)
    }
}

/// One copy of a stacked component with its vertical offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StackedComponent {
    pub offset: f64,
    pub x_threshold: f64,
    pub coefficient: f64,
    pub exponent: f64,
    pub level: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_integral_and_inverse() {
        let p = Profile::Power {
            coefficient: 1.0,
            exponent: 2.0,
        };
        assert!((p.integral(1.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((p.integral(1.0, f64::INFINITY) - 1.0).abs() < 1e-15);
        let x = p.inverse_cdf(1.0, 2.0, 0.5);
        assert!((p.integral(1.0, x) - 0.25).abs() < 1e-15);
        let x = p.inverse_cdf(1.0, f64::INFINITY, 0.5);
        assert!((x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exp_inverse() {
        let p = Profile::Exp;
        let x = p.inverse_cdf(1.0, 3.0, 0.3);
        assert!((p.integral(1.0, x) - 0.3 * p.integral(1.0, 3.0)).abs() < 1e-15);
    }
}
