use num_complex::Complex64;

use super::TubeSample;
use crate::error::{Error, Result};
use crate::regions::{Norm, RegionSpec};
use crate::sampling::{allocate, strata_outside, stratified_moments, Stratum};

pub const MIN_SAMPLES: u64 = 1000;

/// Stratified Monte Carlo estimate of `|B_t(0)^c ∩ Ω|`.
pub fn tube_volume_mc(region: &RegionSpec, t: f64, norm: Norm, samples: u64, seed: u64) -> Result<TubeSample> {
    if samples < MIN_SAMPLES {
        return Err(Error::param(
            "samples",
            format!("need at least {MIN_SAMPLES}, got {samples}"),
        ));
    }
    if !(t > 0.0) {
        return Err(Error::param("t", format!("radius must be positive, got {t}")));
    }
    let strata = strata_outside(region, norm, t, f64::INFINITY);
    let weights: Vec<f64> = strata.iter().map(Stratum::weight).collect();
    if weights.iter().all(|&w| w == 0.0) {
        return Ok(TubeSample::exact(t, 0.0, norm));
    }
    let n = region.ambient_dim();
    let counts = allocate(&weights, samples, 2);
    let moments = stratified_moments(&strata, &counts, seed, |_, p| {
        let x = &p[..n];
        let inside = norm.of(x) > t
            && match region {
                RegionSpec::Generic(g) => g.indicator(x),
                _ => true,
            };
        Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
    });
    let (volume, var) = moments
        .iter()
        .zip(&weights)
        .fold((0.0, 0.0), |(v, var), ((m, _), w)| {
            (v + w * m.mean(), var + (w * m.stderr()).powi(2))
        });
    Ok(TubeSample {
        t,
        volume,
        stderr: var.sqrt(),
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_power_is_exact() {
        let p = RegionSpec::power_subgraph(2.0).unwrap();
        let s = tube_volume_mc(&p, 10.0, Norm::Sup, 10_000, 1).unwrap();
        assert!((s.volume - 0.1).abs() < 1e-15);
    }

    #[test]
    fn exhausted_envelope_is_zero() {
        let e = RegionSpec::exp_subgraph();
        let s = tube_volume_mc(&e, 1e4, Norm::Euclidean, 10_000, 1).unwrap();
        assert_eq!((s.volume, s.stderr), (0.0, 0.0));
    }

    #[test]
    fn too_few_samples() {
        let p = RegionSpec::power_subgraph(2.0).unwrap();
        assert!(tube_volume_mc(&p, 1.0, Norm::Sup, 10, 1).is_err());
    }
}
