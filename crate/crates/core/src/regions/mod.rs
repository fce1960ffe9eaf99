//! Catalog of unbounded regions of finite measure.

mod file;
mod interval_chain;
mod layers;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::RegionFile;
pub use interval_chain::IntervalChain;
pub use layers::{Layer, Profile, StackedComponent};

/// Hard cap on the number of stacked layers ever generated.
const MAX_LAYERS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Euclidean,
    Sup,
}

impl Norm {
    pub fn of(&self, x: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::Sup => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Norm::Euclidean => "euclidean",
            Norm::Sup => "sup",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Norm::Euclidean),
            "sup" => Ok(Norm::Sup),
            other => Err(Error::param("norm", format!("expected euclidean|sup, got {other}"))),
        }
    }
}

/// Box dimension at infinity; `-∞` is kept apart from finite values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BoxDimension {
    Finite(f64),
    NegInfinity,
}

impl BoxDimension {
    pub fn finite(&self) -> Option<f64> {
        match self {
            BoxDimension::Finite(d) => Some(*d),
            BoxDimension::NegInfinity => None,
        }
    }
}

/// `{x > 1, 0 < y < x^{-α}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSubgraph {
    alpha: f64,
}

impl PowerSubgraph {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::param("alpha", format!("must exceed 1, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn profile(&self) -> Profile {
        Profile::Power {
            coefficient: 1.0,
            exponent: self.alpha,
        }
    }
}

/// `{x > 1, 0 < y < e^{-x}}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExpSubgraph;

/// Subgraphs of `2^{-k} k^{-1} x^{-(1+1/k)}` stacked at heights `S_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StackedPower;

impl StackedPower {
    /// Bottom of component `k ≥ 1`: `Σ_{j<k} 2^{-j}/j`.
    pub fn offset(k: usize) -> f64 {
        (1..k).map(|j| 0.5f64.powi(j as i32) / j as f64).sum()
    }

    pub fn layer(k: usize) -> Layer {
        Layer {
            first_offset: Self::offset(k),
            ..Self::layer_without_offset(k)
        }
    }

    fn layer_without_offset(k: usize) -> Layer {
        let width = 0.5f64.powi(k as i32) / k as f64;
        Layer {
            level: k,
            copies: 1.0,
            first_offset: 0.0,
            spacing: width,
            x_threshold: 1.0,
            profile: Profile::Power {
                coefficient: width,
                exponent: 1.0 + 1.0 / k as f64,
            },
        }
    }
}

/// `2^{m-1}` copies of `{x > a^{-m}, 0 < y < x^{-b}}` per level `m ≥ 1`,
/// stacked bottom to top in increasing `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorDrum {
    a: f64,
    b: f64,
}

impl CantorDrum {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && a < 0.5) {
            return Err(Error::param("a", format!("must lie in (0, 1/2), got {a}")));
        }
        let bound = 1.0 + 2f64.ln() / (1.0 / a).ln();
        if !(b.is_finite() && b > bound) {
            return Err(Error::param(
                "b",
                format!("must exceed 1 + log_(1/a) 2 = {bound}, got {b}"),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn log_inv_a(&self) -> f64 {
        (1.0 / self.a).ln()
    }

    pub fn dimension(&self) -> f64 {
        2f64.ln() / self.log_inv_a() - (self.b + 1.0)
    }

    /// Total height `a^b / (1 - 2a^b)` of the stack.
    pub fn height(&self) -> f64 {
        let ab = self.a.powf(self.b);
        ab / (1.0 - 2.0 * ab)
    }

    /// `2 a^{b-1}`, the measure ratio between consecutive levels.
    fn ratio(&self) -> f64 {
        2.0 * self.a.powf(self.b - 1.0)
    }

    pub fn measure(&self) -> f64 {
        let ab1 = self.a.powf(self.b - 1.0);
        ab1 / ((self.b - 1.0) * (1.0 - 2.0 * ab1))
    }

    pub fn layer(&self, m: usize) -> Layer {
        let ab = self.a.powf(self.b);
        let q = 2.0 * ab;
        Layer {
            level: m,
            copies: 2f64.powi(m as i32 - 1),
            first_offset: ab * -(((m - 1) as f64) * q.ln()).exp_m1() / (1.0 - q),
            spacing: ab.powi(m as i32),
            x_threshold: self.a.powi(-(m as i32)),
            profile: Profile::Power {
                coefficient: 1.0,
                exponent: self.b,
            },
        }
    }

    /// Exact sup-norm tube function.
    pub fn tube_sup(&self, t: f64) -> f64 {
        let levels = if t < 1.0 / self.a {
            0
        } else {
            let mut m = (t.ln() / self.log_inv_a()).floor() as i32;
            while m > 0 && self.a.powi(-m) > t {
                m -= 1;
            }
            while self.a.powi(-(m + 1)) <= t {
                m += 1;
            }
            m
        };
        let r = self.ratio();
        let cut = (2f64.powi(levels) - 1.0) * t.powf(1.0 - self.b) / (self.b - 1.0);
        let full = r.powi(levels + 1) / (2.0 * (self.b - 1.0) * (1.0 - r));
        cut + full
    }
}

/// Membership predicate carried by a [`Generic`] region.
pub type Indicator = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// An arbitrary subset of a catalog envelope, given by a predicate.
#[derive(Clone)]
pub struct Generic {
    ambient_dim: usize,
    indicator: Indicator,
    envelope: Box<RegionSpec>,
}

impl Generic {
    pub fn new(ambient_dim: usize, indicator: Indicator, envelope: RegionSpec) -> Result<Self> {
        if matches!(envelope, RegionSpec::Generic(_)) {
            return Err(Error::param("envelope", "must be a catalog region"));
        }
        if envelope.ambient_dim() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: envelope.ambient_dim(),
                got: ambient_dim,
            });
        }
        Ok(Self {
            ambient_dim,
            indicator,
            envelope: Box::new(envelope),
        })
    }

    pub fn envelope(&self) -> &RegionSpec {
        &self.envelope
    }

    pub fn indicator(&self, x: &[f64]) -> bool {
        (self.indicator)(x)
    }
}

impl fmt::Debug for Generic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generic")
            .field("ambient_dim", &self.ambient_dim)
            .field("envelope", &self.envelope)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum RegionSpec {
    IntervalChain(IntervalChain),
    PowerSubgraph(PowerSubgraph),
    StackedPower(StackedPower),
    ExpSubgraph(ExpSubgraph),
    CantorDrum(CantorDrum),
    Generic(Generic),
}

impl RegionSpec {
    pub fn interval_chain(alpha: f64, beta: f64) -> Result<Self> {
        IntervalChain::new(alpha, beta).map(RegionSpec::IntervalChain)
    }

    pub fn power_subgraph(alpha: f64) -> Result<Self> {
        PowerSubgraph::new(alpha).map(RegionSpec::PowerSubgraph)
    }

    pub fn stacked_power() -> Self {
        RegionSpec::StackedPower(StackedPower)
    }

    pub fn exp_subgraph() -> Self {
        RegionSpec::ExpSubgraph(ExpSubgraph)
    }

    pub fn cantor_drum(a: f64, b: f64) -> Result<Self> {
        CantorDrum::new(a, b).map(RegionSpec::CantorDrum)
    }

    pub fn generic(ambient_dim: usize, indicator: Indicator, envelope: RegionSpec) -> Result<Self> {
        Generic::new(ambient_dim, indicator, envelope).map(RegionSpec::Generic)
    }

    pub fn family(&self) -> &'static str {
        match self {
            RegionSpec::IntervalChain(_) => "interval_chain",
            RegionSpec::PowerSubgraph(_) => "power_subgraph",
            RegionSpec::StackedPower(_) => "stacked_power",
            RegionSpec::ExpSubgraph(_) => "exp_subgraph",
            RegionSpec::CantorDrum(_) => "cantor_drum",
            RegionSpec::Generic(_) => "generic",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            RegionSpec::IntervalChain(_) => 1,
            RegionSpec::Generic(g) => g.ambient_dim,
            _ => 2,
        }
    }

    /// Catalog value of the box dimension at infinity.
    pub fn known_dimension(&self) -> Option<BoxDimension> {
        Some(match self {
            RegionSpec::IntervalChain(ic) => BoxDimension::Finite(ic.dimension()),
            RegionSpec::PowerSubgraph(p) => BoxDimension::Finite(-1.0 - p.alpha),
            RegionSpec::StackedPower(_) => BoxDimension::Finite(-2.0),
            RegionSpec::ExpSubgraph(_) => BoxDimension::NegInfinity,
            RegionSpec::CantorDrum(c) => BoxDimension::Finite(c.dimension()),
            RegionSpec::Generic(_) => return None,
        })
    }

    /// Catalog Minkowski content at the dimension, for measurable families.
    pub fn known_content(&self) -> Option<f64> {
        match self {
            RegionSpec::IntervalChain(ic) => Some(ic.content()),
            RegionSpec::PowerSubgraph(p) => Some(1.0 / (p.alpha - 1.0)),
            RegionSpec::StackedPower(_) => Some(0.0),
            _ => None,
        }
    }

    /// Smallest radius from which analytic tube values are available.
    pub fn t_min(&self) -> f64 {
        match self {
            RegionSpec::IntervalChain(ic) => ic.t_min(),
            RegionSpec::Generic(g) => g.envelope.t_min(),
            _ => 1.0,
        }
    }

    /// Height of the horizontal strip `0 ≤ y ≤ d` containing a planar region.
    pub fn strip_height(&self) -> Option<f64> {
        match self {
            RegionSpec::PowerSubgraph(_) => Some(1.0),
            RegionSpec::ExpSubgraph(_) => Some((-1f64).exp()),
            RegionSpec::StackedPower(_) => Some(2f64.ln()),
            RegionSpec::CantorDrum(c) => Some(c.height()),
            RegionSpec::Generic(g) => g.envelope.strip_height(),
            RegionSpec::IntervalChain(_) => None,
        }
    }

    pub fn total_measure(&self) -> Result<f64> {
        match self {
            RegionSpec::IntervalChain(ic) => Ok(ic.measure()),
            RegionSpec::PowerSubgraph(p) => Ok(1.0 / (p.alpha - 1.0)),
            RegionSpec::StackedPower(_) => Ok(1.0),
            RegionSpec::ExpSubgraph(_) => Ok((-1f64).exp()),
            RegionSpec::CantorDrum(c) => Ok(c.measure()),
            RegionSpec::Generic(_) => Err(Error::Unsupported(
                "exact measure of a generic region; estimate it by Monte Carlo".into(),
            )),
        }
    }

    pub fn contains(&self, point: &[f64]) -> Result<bool> {
        if point.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: point.len(),
            });
        }
        Ok(match self {
            RegionSpec::IntervalChain(ic) => ic.contains(point[0]),
            RegionSpec::Generic(g) => g.envelope.contains(point)? && g.indicator(point),
            _ => {
                let (x, y) = (point[0], point[1]);
                y > 0.0 && self.layer_at_height(y).is_some_and(|l| l.contains(x, y))
            }
        })
    }

    /// Stacked layers of a planar catalog region, truncated once the
    /// remaining measure falls below `rel_tol` times the total.
    pub fn layers(&self, rel_tol: f64) -> Vec<Layer> {
        let single = |profile: Profile| Layer {
            level: 1,
            copies: 1.0,
            first_offset: 0.0,
            spacing: profile.height(1.0),
            x_threshold: 1.0,
            profile,
        };
        match self {
            RegionSpec::PowerSubgraph(p) => vec![single(p.profile())],
            RegionSpec::ExpSubgraph(_) => vec![single(Profile::Exp)],
            RegionSpec::StackedPower(_) => {
                let mut out = Vec::new();
                for k in 1..=MAX_LAYERS {
                    out.push(StackedPower::layer(k));
                    // remaining measure is 2^{-k}
                    if 0.5f64.powi(k as i32) < rel_tol || k >= 1100 {
                        break;
                    }
                }
                out
            }
            RegionSpec::CantorDrum(c) => {
                let total = c.measure();
                let mut out = Vec::new();
                for m in 1..=MAX_LAYERS {
                    let layer = c.layer(m);
                    if !layer.copies.is_finite() || !layer.x_threshold.is_finite() {
                        break;
                    }
                    out.push(layer);
                    let remaining =
                        c.ratio().powi(m as i32 + 1) / (2.0 * (c.b - 1.0) * (1.0 - c.ratio()));
                    if remaining < rel_tol * total {
                        break;
                    }
                }
                out
            }
            RegionSpec::Generic(g) => g.envelope.layers(rel_tol),
            RegionSpec::IntervalChain(_) => Vec::new(),
        }
    }

    /// The layer whose vertical extent contains height `y`.
    fn layer_at_height(&self, y: f64) -> Option<Layer> {
        match self {
            RegionSpec::StackedPower(_) => {
                let mut offset = 0.0;
                for k in 1..=MAX_LAYERS {
                    let width = 0.5f64.powi(k as i32) / k as f64;
                    if y < offset + width {
                        let mut layer = StackedPower::layer_without_offset(k);
                        layer.first_offset = offset;
                        return Some(layer);
                    }
                    offset += width;
                }
                None
            }
            RegionSpec::CantorDrum(c) => (1..=MAX_LAYERS)
                .map(|m| c.layer(m))
                .take_while(|l| l.first_offset <= y && l.copies.is_finite())
                .find(|l| y < l.top()),
            _ => self.layers(0.0).into_iter().find(|l| l.first_offset <= y && y < l.top()),
        }
    }

    /// Individual stacked copies with their offsets, up to `max_components` of them.
    pub fn stacking_offsets(&self, max_components: usize) -> Result<Vec<StackedComponent>> {
        if !matches!(self, RegionSpec::StackedPower(_) | RegionSpec::CantorDrum(_)) {
            return Err(Error::Unsupported(format!(
                "stacking offsets of {}",
                self.family()
            )));
        }
        let mut out = Vec::new();
        'layers: for layer in self.layers(0.0) {
            let Profile::Power {
                coefficient,
                exponent,
            } = layer.profile
            else {
                continue;
            };
            let mut i = 0.0;
            while i < layer.copies {
                if out.len() >= max_components {
                    break 'layers;
                }
                out.push(StackedComponent {
                    offset: layer.first_offset + i * layer.spacing,
                    x_threshold: layer.x_threshold,
                    coefficient,
                    exponent,
                    level: layer.level,
                });
                i += 1.0;
            }
        }
        Ok(out)
    }
}
