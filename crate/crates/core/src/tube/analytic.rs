use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadConfig};
use crate::numerics::roots::bisect;
use crate::regions::{Norm, Profile, RegionSpec};

/// Exact tube volume for the analytically supported (region, norm) pairs.
pub fn tube_value(region: &RegionSpec, t: f64, norm: Norm) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("radius must be positive, got {t}")));
    }
    match (region, norm) {
        (RegionSpec::IntervalChain(ic), _) => ic.tube(t),
        (RegionSpec::PowerSubgraph(p), Norm::Sup) => Ok(p.profile().tail(t.max(1.0))),
        (RegionSpec::PowerSubgraph(p), Norm::Euclidean) => Ok(euclidean_subgraph(p.profile(), 1.0, t)),
        (RegionSpec::ExpSubgraph(_), Norm::Sup) => Ok(Profile::Exp.tail(t.max(1.0))),
        (RegionSpec::ExpSubgraph(_), Norm::Euclidean) => Ok(euclidean_subgraph(Profile::Exp, 1.0, t)),
        (RegionSpec::StackedPower(_), Norm::Sup) => Ok(stacked_sup(t)),
        (RegionSpec::CantorDrum(c), Norm::Sup) => Ok(c.tube_sup(t)),
        (RegionSpec::Generic(_), _) => Err(Error::Unsupported(
            "analytic tube of a generic region; use the Monte Carlo estimator".into(),
        )),
        (_, Norm::Euclidean) => Err(Error::Unsupported(format!(
            "analytic euclidean tube of {}",
            region.family()
        ))),
    }
}

/// `Σ_k 2^{-k} max(t,1)^{-1/k}`.
fn stacked_sup(t: f64) -> f64 {
    let t = t.max(1.0);
    let ln_t = t.ln();
    let mut sum = 0.0;
    for k in 1..=2000 {
        let w = 0.5f64.powi(k);
        sum += w * (-ln_t / k as f64).exp();
        if w < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Point in `[x0, ∞)` minimising `x² + f(x)²`.
fn distance_minimiser(profile: Profile, x0: f64) -> f64 {
    match profile {
        Profile::Power {
            coefficient,
            exponent,
        } => (exponent * coefficient * coefficient)
            .powf(1.0 / (2.0 * exponent + 2.0))
            .max(x0),
        // x² + e^{-2x} increases for x ≥ x0 ≥ 1
        Profile::Exp => x0,
    }
}

/// Area of `{x > x0, 0 < y < f(x), x² + y² > t²}`.
///
/// For `x ≥ t` the full column counts; on `[x0, t)` the column is clipped by
/// the circle, which leaves at most a left piece near `x0` and a right piece
/// ending at `t`, separated by the roots of `x² + f(x)² = t²`.
pub(crate) fn euclidean_subgraph(profile: Profile, x0: f64, t: f64) -> f64 {
    if t <= x0 {
        return profile.tail(x0);
    }
    let cfg = QuadConfig::default();
    let f = |x: f64| profile.height(x);
    let t2 = t * t;
    let g = |x: f64| x * x + f(x).powi(2);
    let clipped = |x: f64| f(x) - (t2 - x * x).max(0.0).sqrt();
    // ∫_{xs}^t clipped, with x = t - u² to remove the square-root endpoint
    let to_t = |xs: f64| {
        let width = (t - xs).max(0.0).sqrt();
        integrate(
            |u: f64| {
                let x = t - u * u;
                (f(x) - u * (2.0 * t - u * u).max(0.0).sqrt()) * 2.0 * u
            },
            0.0,
            width,
            &cfg,
        )
        .value
    };
    let full = profile.tail(t);
    let xm = distance_minimiser(profile, x0).min(t);
    if g(xm) > t2 {
        let left = if xm > x0 {
            integrate(clipped, x0, xm, &cfg).value
        } else {
            0.0
        };
        return full + left + to_t(xm);
    }
    let left = if g(x0) > t2 {
        let xl = bisect(|x| g(x) - t2, x0, xm, 0.0).unwrap_or(x0);
        integrate(clipped, x0, xl, &cfg).value
    } else {
        0.0
    };
    // right root as a distance below t: f(t-δ)² = δ(2t-δ)
    let delta = bisect(
        |d| f(t - d).powi(2) - d * (2.0 * t - d),
        0.0,
        t - xm,
        0.0,
    )
    .unwrap_or(0.0);
    let right = if delta > 0.0 { to_t(t - delta) } else { 0.0 };
    full + left + right
}
