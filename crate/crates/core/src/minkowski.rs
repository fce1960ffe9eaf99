//! Box dimension and Minkowski contents at infinity from tube scans.
//!
//! Limits superior and inferior are replaced by extrema over a tail window
//! of the scan; they are finite-window proxies and nothing more.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::stats::fit_line;
use crate::regions::BoxDimension;
use crate::tube::TubeScan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionOptions {
    pub tail_fraction: f64,
    /// Slopes of `log V` below this are reported as dimension `-∞`.
    pub neg_inf_slope: f64,
    /// Allowed content ratio for a measurable verdict.
    pub delta: f64,
    /// Distance to `-N` under which the set is treated as degenerate.
    pub degenerate_tol: f64,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        Self {
            tail_fraction: 0.5,
            neg_inf_slope: -50.0,
            delta: 0.05,
            degenerate_tol: 0.05,
        }
    }
}

/// A Minkowski content that may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Content {
    Finite(f64),
    PlusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    /// Half the peak-to-peak spread of the regression residuals of `log V`.
    pub amplitude: f64,
    /// Dominant period in `log t`, when a stable one was found.
    pub period_log_t: Option<f64>,
    /// Fraction of residual variance explained by the best periodic fit.
    pub score: f64,
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurability {
    pub verdict: Verdict,
    pub reason: String,
    pub oscillation: Oscillation,
    /// Content extrema over the right half of the tail window.
    pub right_half: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub d_hat: BoxDimension,
    pub window: (f64, f64),
    pub content_upper: Content,
    pub content_lower: Content,
    pub measurability: Measurability,
    pub ambient_dim: usize,
    pub samples_used: usize,
}

/// Samples `(t, V)` in the last `tail_fraction` of the scan.
fn tail_window(scan: &TubeScan, tail_fraction: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::param("tail_fraction", "must lie in (0, 1]"));
    }
    let n = scan.samples.len();
    let take = ((n as f64 * tail_fraction).ceil() as usize).min(n);
    if take == 0 {
        return Err(Error::InsufficientData("empty tail window".into()));
    }
    Ok(scan.samples[n - take..]
        .iter()
        .map(|s| (s.t, s.volume, s.stderr))
        .collect())
}

fn ratio_extrema(window: &[(f64, f64, f64)], exponent: f64) -> (f64, f64) {
    window
        .iter()
        .map(|&(t, v, _)| v / t.powf(exponent))
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), q| (hi.max(q), lo.min(q)))
}

/// Upper and lower content proxies `max/min V(t)/t^{N+r}` over the tail window.
pub fn content_at_exponent(scan: &TubeScan, n: usize, r: f64, tail_fraction: f64) -> Result<(f64, f64)> {
    let window = tail_window(scan, tail_fraction)?;
    Ok(ratio_extrema(&window, n as f64 + r))
}

pub fn estimate_dimension(scan: &TubeScan, n: usize, opts: &DimensionOptions) -> Result<DimensionEstimate> {
    let window = tail_window(scan, opts.tail_fraction)?;
    let span = (window[0].0, window[window.len() - 1].0);
    let positive: Vec<(f64, f64, f64)> = window.iter().copied().filter(|s| s.1 > 0.0).collect();
    let neg_inf = |reason: &str, used: usize| DimensionEstimate {
        d_hat: BoxDimension::NegInfinity,
        window: span,
        content_upper: Content::PlusInfinity,
        content_lower: Content::PlusInfinity,
        measurability: Measurability {
            verdict: Verdict::Inconclusive,
            reason: reason.to_string(),
            oscillation: Oscillation {
                amplitude: 0.0,
                period_log_t: None,
                score: 0.0,
                noise: 0.0,
            },
            right_half: (f64::INFINITY, f64::INFINITY),
        },
        ambient_dim: n,
        samples_used: used,
    };
    if positive.is_empty() {
        return Ok(neg_inf("all tube volumes vanish in the window", 0));
    }
    let x: Vec<f64> = positive.iter().map(|s| s.0.ln()).collect();
    let y: Vec<f64> = positive.iter().map(|s| s.1.ln()).collect();
    if positive.len() >= 2 {
        let fit = fit_line(&x, &y);
        if fit.slope < opts.neg_inf_slope {
            return Ok(neg_inf("log-log slope below the -∞ threshold", positive.len()));
        }
    }
    if positive.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "{} positive tube volumes in the tail window, need 8",
            positive.len()
        )));
    }
    let fit = fit_line(&x, &y);
    let d = fit.slope - n as f64;
    let (upper, lower) = ratio_extrema(&positive, fit.slope);
    let noise = positive
        .iter()
        .map(|s| s.2 / s.1)
        .fold(1e-6, f64::max);
    let oscillation = detect_oscillation(&x, &fit.residuals, noise);
    let right = &positive[positive.len() / 2..];
    let right_half = ratio_extrema(right, fit.slope);
    let (verdict, reason) = if (d + n as f64).abs() <= opts.degenerate_tol {
        (Verdict::No, "degenerate: dimension equals -N".to_string())
    } else if let Some(p) = oscillation.period_log_t {
        (Verdict::No, format!("stable log-periodic oscillation with period {p:.4} in log t"))
    } else if right_half.0 <= (1.0 + opts.delta) * right_half.1 {
        (Verdict::Yes, "content ratio on the right half-window within 1+delta".to_string())
    } else if oscillation.amplitude > 3.0 * noise {
        (Verdict::Inconclusive, "residuals above noise without a stable period".to_string())
    } else {
        (Verdict::Inconclusive, "content drifts across the window".to_string())
    };
    Ok(DimensionEstimate {
        d_hat: BoxDimension::Finite(d),
        window: span,
        content_upper: Content::Finite(upper),
        content_lower: Content::Finite(lower),
        measurability: Measurability {
            verdict,
            reason,
            oscillation,
            right_half,
        },
        ambient_dim: n,
        samples_used: positive.len(),
    })
}

/// Measurability verdict with its oscillation report.
pub fn measurability_diagnostic(scan: &TubeScan, n: usize, opts: &DimensionOptions) -> Result<Measurability> {
    let est = estimate_dimension(scan, n, opts)?;
    match est.d_hat {
        BoxDimension::Finite(_) => Ok(est.measurability),
        BoxDimension::NegInfinity => Err(Error::Unsupported(
            "measurability of a set with dimension -∞".into(),
        )),
    }
}

/// Least-squares fit of `c0 + c1 x + Σ_k (a_k cos + b_k sin)(2πk x / period)`;
/// returns the residual sum of squares and the half peak-to-peak of the periodic part.
fn harmonic_fit(x: &[f64], r: &[f64], period: f64) -> (f64, f64) {
    const HARMONICS: usize = 2;
    let cols = 2 + 2 * HARMONICS;
    let w = std::f64::consts::TAU / period;
    let design = DMatrix::from_fn(x.len(), cols, |i, j| match j {
        0 => 1.0,
        1 => x[i],
        _ => {
            let k = ((j - 2) / 2 + 1) as f64;
            if j % 2 == 0 {
                (k * w * x[i]).cos()
            } else {
                (k * w * x[i]).sin()
            }
        }
    });
    let rhs = DVector::from_column_slice(r);
    let Ok(coef) = design.clone().svd(true, true).solve(&rhs, 1e-12) else {
        return (f64::INFINITY, 0.0);
    };
    let fitted = &design * &coef;
    let ssr = (&rhs - &fitted).norm_squared();
    let periodic: Vec<f64> = (0..x.len())
        .map(|i| fitted[i] - coef[0] - coef[1] * x[i])
        .collect();
    let (hi, lo) = periodic
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &v| (h.max(v), l.min(v)));
    (ssr, 0.5 * (hi - lo))
}

/// Best period by score, with its amplitude.
fn best_period(x: &[f64], r: &[f64]) -> Option<(f64, f64, f64)> {
    if x.len() < 8 {
        return None;
    }
    let step = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    let length = x[x.len() - 1] - x[0];
    let (p_min, p_max) = (3.0 * step, length / 1.2);
    if p_max <= p_min {
        return None;
    }
    let base = fit_line(x, r);
    let sst: f64 = base.residuals.iter().map(|v| v * v).sum();
    if sst <= 0.0 {
        return None;
    }
    const TRIALS: usize = 400;
    let score = |p: f64| {
        let (ssr, amp) = harmonic_fit(x, r, p);
        (p, 1.0 - ssr / sst, amp)
    };
    let scan: Vec<(f64, f64, f64)> = (0..TRIALS)
        .map(|i| p_min * (p_max / p_min).powf(i as f64 / (TRIALS - 1) as f64))
        .map(score)
        .collect();
    let best = scan.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    // multiples of the true period fit as well through their harmonics
    let (p0, _, _) = *scan.iter().find(|c| c.1 >= best - 0.02)?;
    (0..=100)
        .map(|i| p0 * (0.95 + 0.001 * i as f64))
        .map(score)
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

/// Log-periodic structure in regression residuals.
///
/// A period counts as stable when it explains most of the residual variance
/// and both halves of the window reproduce it with similar amplitude.
fn detect_oscillation(x: &[f64], residuals: &[f64], noise: f64) -> Oscillation {
    let (hi, lo) = residuals
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &v| (h.max(v), l.min(v)));
    let amplitude = 0.5 * (hi - lo);
    let mut report = Oscillation {
        amplitude,
        period_log_t: None,
        score: 0.0,
        noise,
    };
    if amplitude <= 3.0 * noise {
        return report;
    }
    let Some((period, score, amp)) = best_period(x, residuals) else {
        return report;
    };
    report.score = score;
    if score < 0.8 || amp <= 3.0 * noise {
        return report;
    }
    let mid = x.len() / 2;
    let halves = [
        best_period(&x[..mid], &residuals[..mid]),
        best_period(&x[mid..], &residuals[mid..]),
    ];
    let stable = match halves {
        [Some((p1, _, a1)), Some((p2, _, a2))] => {
            let close = |p: f64| (p / period - 1.0).abs() <= 0.15;
            let ratio = a1 / a2;
            close(p1) && close(p2) && (0.5..=2.0).contains(&ratio)
        }
        _ => false,
    };
    if stable {
        report.period_log_t = Some(period);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{Norm, RegionSpec};
    use crate::tube::{tube_scan, Grid, Method};

    #[test]
    fn pure_power_is_measurable() {
        let p = RegionSpec::power_subgraph(3.0).unwrap();
        let scan = tube_scan(&p, Norm::Sup, Grid::standard(1.0), Method::Analytic).unwrap();
        let est = estimate_dimension(&scan, 2, &DimensionOptions::default()).unwrap();
        assert!((est.d_hat.finite().unwrap() + 4.0).abs() < 1e-10);
        assert_eq!(est.measurability.verdict, Verdict::Yes);
    }

    #[test]
    fn synthetic_log_periodic_signal() {
        let x: Vec<f64> = (0..32).map(|i| i as f64 * 0.17).collect();
        let r: Vec<f64> = x.iter().map(|v| 0.02 * (std::f64::consts::TAU * v / 1.1).sin()).collect();
        let osc = detect_oscillation(&x, &r, 1e-6);
        let p = osc.period_log_t.unwrap();
        assert!((p / 1.1 - 1.0).abs() < 0.02, "{p}");
    }

    #[test]
    fn short_window_is_an_error() {
        let p = RegionSpec::power_subgraph(2.0).unwrap();
        let grid = Grid {
            t0: 1.0,
            ratio: 2.0,
            count: 10,
        };
        let scan = tube_scan(&p, Norm::Sup, grid, Method::Analytic).unwrap();
        assert!(matches!(
            estimate_dimension(&scan, 2, &DimensionOptions::default()),
            Err(Error::InsufficientData(_))
        ));
    }
}
