//! Geometric inversion `Φ(x) = x/|x|²` and the zeta function of the inverted drum.
//!
//! `Φ` maps `{|x| > T} ∩ Ω` onto `{0 < |y| < 1/T} ∩ Φ(Ω)` with
//! `|det Φ'(x)| = |x|^{-2N}`, so `ζ(s; T)` equals `∫ |y|^{s-N} dy` over the image.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::regions::{BoxDimension, Norm, RegionSpec};
use crate::sampling::{allocate, strata_outside, stratified_moments, Stratum};
use crate::tube::tube_value;
use crate::zeta::ZetaEvaluator;

/// Shells always sampled, whatever the tail bound says.
pub const MIN_SHELLS: usize = 31;
pub const MAX_SHELLS: usize = 200;
const MIN_PER_STRATUM: u64 = 16;

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn nonzero(x: &[f64]) -> Result<f64> {
    let r2 = norm2(x);
    if x.is_empty() || !(r2 > 0.0) || !r2.is_finite() {
        return Err(Error::param("x", "inversion needs a finite nonzero vector"));
    }
    Ok(r2)
}

/// `x / |x|²`.
pub fn invert_point(x: &[f64]) -> Result<Vec<f64>> {
    let r2 = nonzero(x)?;
    Ok(x.iter().map(|v| v / r2).collect())
}

/// `det Φ'(x) = -|x|^{-2N}`.
pub fn inversion_jacobian_det(x: &[f64]) -> Result<f64> {
    let r2 = nonzero(x)?;
    Ok(-r2.powi(-(x.len() as i32)))
}

/// `Φ'(x) = (|x|² I - 2 x ⊗ x) / |x|⁴`.
pub fn jacobian_matrix(x: &[f64]) -> Result<DMatrix<f64>> {
    let r2 = nonzero(x)?;
    let n = x.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { r2 } else { 0.0 };
        (delta - 2.0 * x[i] * x[j]) / (r2 * r2)
    }))
}

/// Determinant of the central-difference Jacobian of `Φ`, step `1e-5 |x|`.
pub fn fd_jacobian_det(x: &[f64]) -> Result<f64> {
    let r2 = nonzero(x)?;
    let n = x.len();
    let h = 1e-5 * r2.sqrt();
    let mut m = DMatrix::zeros(n, n);
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let plus = invert_point(&probe)?;
        probe[j] = x[j] - h;
        let minus = invert_point(&probe)?;
        probe[j] = x[j];
        for i in 0..n {
            m[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(m.determinant())
}

#[derive(Debug, Clone, Serialize)]
pub struct InvertedDrumIntegral {
    pub family: &'static str,
    pub norm: Norm,
    #[serde(rename = "T")]
    pub t: f64,
    pub s: Complex64,
    pub estimate: Complex64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub shells: usize,
    /// Bound on the part of the integral beyond the last shell.
    pub truncation: f64,
    pub warning: Option<String>,
}

/// Upper bound on `∫_{|x|>r, x∈Ω} |x|^{-σ-N} dx` from the tube volume at `r`.
fn tail_bound(region: &RegionSpec, norm: Norm, r: f64, sigma: f64) -> Result<f64> {
    let base = match region {
        RegionSpec::Generic(g) => g.envelope(),
        other => other,
    };
    let n = base.ambient_dim() as f64;
    let v = match tube_value(base, r, norm) {
        Ok(v) => v,
        // |x|_2 ≥ |x|_∞ puts the euclidean exterior inside a sup-norm one
        Err(Error::Unsupported(_)) => tube_value(base, r / n.sqrt(), Norm::Sup)?,
        Err(e) => return Err(e),
    };
    let weight = r.powf(-sigma - n) * v;
    Ok(match base.known_dimension() {
        Some(BoxDimension::Finite(d)) if sigma > d => weight * (1.0 + 1.5 * (sigma + n).abs() / (sigma - d)),
        Some(BoxDimension::NegInfinity) => 2.0 * weight,
        _ => f64::INFINITY,
    })
}

/// Monte Carlo value of `∫_{Φ(Ω), |Φ(y)| > T} |Φ(y)|^{-s-N} |y|^{-2N} dy`.
///
/// In the euclidean norm the integrand is `|y|^{s-N}` on the punctured ball
/// of radius `1/T`. Points `x` are drawn from the region in dyadic shells
/// `T 2^i ≤ |x| < T 2^{i+1}`, mapped to `y = Φ(x)`, and weighted by
/// `1/|det Φ'(y)|`; membership is decided at `Φ(y)`.
pub fn inverted_zeta_mc(
    region: &RegionSpec,
    norm: Norm,
    t: f64,
    s: Complex64,
    samples: u64,
    seed: u64,
) -> Result<InvertedDrumIntegral> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("T", format!("must be positive, got {t}")));
    }
    if samples < 1000 {
        return Err(Error::param("samples", format!("need at least 1000, got {samples}")));
    }
    if let Some(BoxDimension::Finite(d)) = region.known_dimension() {
        if s.re <= d {
            return Err(Error::Domain { s, bound: d });
        }
    }
    if let RegionSpec::IntervalChain(ic) = region {
        if t < ic.t_min() {
            return Err(Error::UnsupportedRadius { t, t_min: ic.t_min() });
        }
    }
    let n = region.ambient_dim();
    let sigma = s.re;
    let scale = tail_bound(region, norm, t, sigma)?;
    let mut strata: Vec<(usize, Stratum)> = Vec::new();
    let mut shells = 0;
    let mut truncation = 0.0;
    while shells < MAX_SHELLS {
        let (lo, hi) = (t * 2f64.powi(shells as i32), t * 2f64.powi(shells as i32 + 1));
        if shells >= MIN_SHELLS {
            truncation = tail_bound(region, norm, lo, sigma)?;
            if truncation <= 1e-12 * scale {
                break;
            }
        }
        strata.extend(strata_outside(region, norm, lo, hi).into_iter().map(|st| (shells, st)));
        shells += 1;
    }
    if shells == MAX_SHELLS {
        truncation = tail_bound(region, norm, t * 2f64.powi(MAX_SHELLS as i32), sigma)?;
    }
    let scores: Vec<f64> = strata
        .iter()
        .map(|(i, st)| {
            let (lo, hi) = (t * 2f64.powi(*i as i32), t * 2f64.powi(*i as i32 + 1));
            st.weight() * lo.powf(-sigma - n as f64).max(hi.powf(-sigma - n as f64))
        })
        .collect();
    let counts = allocate(&scores, samples, MIN_PER_STRATUM);
    let plain: Vec<Stratum> = strata.iter().map(|(_, st)| st.clone()).collect();
    let generic = matches!(region, RegionSpec::Generic(_));
    let moments = stratified_moments(&plain, &counts, seed, |k, p| {
        let i = strata[k].0;
        let (lo, hi) = (t * 2f64.powi(i as i32), t * 2f64.powi(i as i32 + 1));
        let x = &p[..n];
        let Ok(y) = invert_point(x) else {
            return Complex64::new(0.0, 0.0);
        };
        // Φ is an involution, so Φ(y) is the preimage of y
        let back = invert_point(&y).unwrap_or_else(|_| x.to_vec());
        let r = norm.of(&back);
        // sampled strata lie in Ω already; generic sets need their indicator
        let inside = !generic || region.contains(&back).unwrap_or(false);
        if !inside || r < lo || r >= hi {
            return Complex64::new(0.0, 0.0);
        }
        let det = inversion_jacobian_det(&y).unwrap_or(f64::NAN).abs();
        (-(s + n as f64) * r.ln()).exp() / (norm2(&y).powi(n as i32) * det)
    });
    let (mut estimate, mut var) = (Complex64::new(0.0, 0.0), 0.0);
    for ((_, st), (re, im)) in strata.iter().zip(&moments) {
        let w = st.weight();
        estimate += w * Complex64::new(re.mean(), im.mean());
        var += w * w * (re.stderr().powi(2) + im.stderr().powi(2));
    }
    let stderr = var.sqrt();
    let warning = (stderr > 0.1 * estimate.norm()).then(|| {
        format!("standard error {stderr:.3e} exceeds 10% of the estimate; more samples are needed")
    });
    Ok(InvertedDrumIntegral {
        family: region.family(),
        norm,
        t,
        s,
        estimate,
        stderr,
        samples: counts.iter().sum(),
        seed,
        shells,
        truncation,
        warning,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityEntry {
    pub s: Complex64,
    pub zeta: Complex64,
    pub zeta_err: f64,
    pub inverted: InvertedDrumIntegral,
    pub difference: f64,
    /// Combined standard deviation used for the 3σ test.
    pub sigma: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub entries: Vec<IdentityEntry>,
    pub passed: bool,
}

/// Compares `ζ(s; T)` with the Monte Carlo integral over the inverted drum at each `s`.
pub fn inversion_identity_check(
    region: &RegionSpec,
    norm: Norm,
    t: f64,
    s_list: &[Complex64],
    samples: u64,
    seed: u64,
) -> Result<IdentityReport> {
    let ev = ZetaEvaluator::closed_form(region.clone(), norm)
        .or_else(|_| ZetaEvaluator::numeric(region.clone(), norm))?
        .with_t(t)?;
    let mut entries = Vec::with_capacity(s_list.len());
    for (k, &s) in s_list.iter().enumerate() {
        let z = ev.eval(s)?;
        let inverted = inverted_zeta_mc(region, norm, t, s, samples, seed.wrapping_add(k as u64))?;
        let difference = (z.value - inverted.estimate).norm();
        let sigma = inverted.stderr.hypot(z.abs_err);
        let passed = difference <= 3.0 * sigma + inverted.truncation;
        entries.push(IdentityEntry {
            s,
            zeta: z.value,
            zeta_err: z.abs_err,
            inverted,
            difference,
            sigma,
            passed,
        });
    }
    let passed = entries.iter().all(|e| e.passed);
    Ok(IdentityReport { entries, passed })
}
