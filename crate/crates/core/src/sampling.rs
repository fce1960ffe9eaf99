//! Stratified sampling from catalog regions with seed-deterministic streams.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::numerics::hurwitz::hurwitz_real;
use crate::numerics::stats::Moments;
use crate::regions::{IntervalChain, Layer, Norm, RegionSpec};

const BATCH: u64 = 1 << 14;
/// Interval ranges up to this length are sampled from an explicit table.
const TABLE_LIMIT: f64 = 4096.0;

/// A piece of a region from which points can be drawn uniformly.
#[derive(Debug, Clone)]
pub enum Stratum {
    /// The segment `(lo, hi)` of the line.
    Segment { lo: f64, hi: f64 },
    /// Intervals `j_lo..=j_hi` of an interval chain, picked with probability ∝ length.
    Intervals {
        alpha: f64,
        beta: f64,
        j_lo: f64,
        j_hi: f64,
        weight: f64,
        cumulative: Option<Vec<f64>>,
    },
    /// A planar layer restricted to `x_lo ≤ x < x_hi`.
    Strip {
        layer: Layer,
        x_lo: f64,
        x_hi: f64,
        weight: f64,
    },
}

impl Stratum {
    pub fn weight(&self) -> f64 {
        match self {
            Stratum::Segment { lo, hi } => hi - lo,
            Stratum::Intervals { weight, .. } | Stratum::Strip { weight, .. } => *weight,
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 2] {
        match self {
            Stratum::Segment { lo, hi } => [lo + (hi - lo) * rng.random::<f64>(), 0.0],
            Stratum::Intervals {
                alpha,
                beta,
                j_lo,
                j_hi,
                cumulative,
                ..
            } => {
                let j = match cumulative {
                    Some(cum) => {
                        let u = rng.random::<f64>() * cum[cum.len() - 1];
                        j_lo + cum.partition_point(|&c| c <= u).min(cum.len() - 1) as f64
                    }
                    None => pareto_index(*beta, *j_lo, *j_hi, rng),
                };
                let a = j.powf(*alpha);
                [a + j.powf(-beta) * rng.random::<f64>(), 0.0]
            }
            Stratum::Strip {
                layer, x_lo, x_hi, ..
            } => {
                let x = layer.profile.inverse_cdf(*x_lo, *x_hi, rng.random::<f64>());
                let copy = (rng.random::<f64>() * layer.copies).floor().min(layer.copies - 1.0);
                let y = layer.first_offset
                    + copy * layer.spacing
                    + rng.random::<f64>() * layer.profile.height(x);
                [x, y]
            }
        }
    }
}

/// Integer `j ∈ [lo, hi]` with probability ∝ `j^{-β}`, by rejection from a
/// continuous Pareto proposal on `[lo, hi + 1)`.
fn pareto_index<R: Rng>(beta: f64, lo: f64, hi: f64, rng: &mut R) -> f64 {
    let k = beta - 1.0;
    let full = if hi.is_finite() {
        -(-k * ((hi + 1.0) / lo).ln()).exp_m1()
    } else {
        1.0
    };
    let ratio = |j: f64| {
        // j^{-β} / ∫_j^{j+1} z^{-β} dz
        let cell = -j.powf(-k) * (-k * (1.0 / j).ln_1p()).exp_m1() / k;
        j.powf(-beta) / cell
    };
    let bound = ratio(lo);
    loop {
        let v = (-rng.random::<f64>() * full).ln_1p();
        let z = lo * (-v / k).exp();
        let j = z.floor().clamp(lo, hi);
        if rng.random::<f64>() * bound <= ratio(j) {
            return j;
        }
    }
}

/// Strata covering every point of `region` with `x < x_hi` that can lie
/// outside the `norm`-ball of radius `r`.
pub fn strata_outside(region: &RegionSpec, norm: Norm, r: f64, x_hi: f64) -> Vec<Stratum> {
    match region {
        RegionSpec::Generic(g) => strata_outside(g.envelope(), norm, r, x_hi),
        RegionSpec::IntervalChain(ic) => chain_strata(ic, r.max(0.0), x_hi),
        _ => region
            .layers(1e-14)
            .into_iter()
            .filter_map(|layer| {
                let top = layer.top();
                let cut = match norm {
                    Norm::Euclidean => (r * r - top * top).max(0.0).sqrt(),
                    Norm::Sup if r >= top => r,
                    Norm::Sup => 0.0,
                };
                let x_lo = cut.max(layer.x_threshold);
                let weight = layer.measure_between(x_lo, x_hi);
                (weight > 0.0 && x_lo < x_hi).then_some(Stratum::Strip {
                    layer,
                    x_lo,
                    x_hi,
                    weight,
                })
            })
            .collect(),
    }
}

fn chain_strata(ic: &IntervalChain, lo: f64, hi: f64) -> Vec<Stratum> {
    let mut out: Vec<Stratum> = ic
        .prefix_segments()
        .iter()
        .filter_map(|&(a, b)| {
            let (a, b) = (a.max(lo), b.min(hi));
            (a < b).then_some(Stratum::Segment { lo: a, hi: b })
        })
        .collect();
    let start = ic.j_start() as f64;
    let j_lo = if lo < ic.t_min() {
        start
    } else {
        let j = ic.cell_of(lo) as f64;
        if ic.left(j) + ic.length(j) > lo {
            j
        } else {
            j + 1.0
        }
    };
    let j_hi = if hi.is_finite() {
        if hi <= ic.t_min() {
            return out;
        }
        let j = ic.cell_of(hi) as f64;
        if ic.left(j) >= hi {
            j - 1.0
        } else {
            j
        }
    } else {
        f64::INFINITY
    };
    if j_hi < j_lo {
        return out;
    }
    let (alpha, beta) = (ic.alpha(), ic.beta());
    let (weight, cumulative) = if j_hi - j_lo < TABLE_LIMIT {
        let mut acc = 0.0;
        let cum: Vec<f64> = (0..=(j_hi - j_lo) as usize)
            .map(|i| {
                acc += ic.length(j_lo + i as f64);
                acc
            })
            .collect();
        (acc, Some(cum))
    } else if j_hi.is_finite() {
        (hurwitz_real(beta, j_lo) - hurwitz_real(beta, j_hi + 1.0), None)
    } else {
        (hurwitz_real(beta, j_lo), None)
    };
    if weight > 0.0 {
        out.push(Stratum::Intervals {
            alpha,
            beta,
            j_lo,
            j_hi,
            weight,
            cumulative,
        });
    }
    out
}

/// Samples per stratum, proportional to `scores`, at least `min` each.
pub fn allocate(scores: &[f64], total: u64, min: u64) -> Vec<u64> {
    let sum: f64 = scores.iter().sum();
    scores
        .iter()
        .map(|&s| {
            if sum > 0.0 {
                ((total as f64 * s / sum).floor() as u64).max(min)
            } else {
                min
            }
        })
        .collect()
}

/// Per-stratum moments of the real and imaginary parts of `f` at sampled points.
///
/// Every (stratum, batch) pair owns its own ChaCha stream, and the batches
/// are merged in a fixed order, so results do not depend on the thread count.
pub fn stratified_moments<F>(
    strata: &[Stratum],
    counts: &[u64],
    seed: u64,
    f: F,
) -> Vec<(Moments, Moments)>
where
    F: Fn(usize, &[f64; 2]) -> Complex64 + Sync,
{
    let jobs: Vec<(usize, u64, u64)> = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| {
            (0..n.div_ceil(BATCH)).map(move |b| (i, b, BATCH.min(n - b * BATCH)))
        })
        .collect();
    let results: Vec<(usize, Moments, Moments)> = jobs
        .par_iter()
        .map(|&(i, batch, n)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((i as u64) << 32) | batch);
            let (mut re, mut im) = (Moments::default(), Moments::default());
            for _ in 0..n {
                let p = strata[i].sample(&mut rng);
                let v = f(i, &p);
                re.push(v.re);
                im.push(v.im);
            }
            (i, re, im)
        })
        .collect();
    let mut out = vec![(Moments::default(), Moments::default()); strata.len()];
    for (i, re, im) in results {
        out[i] = (out[i].0.merge(re), out[i].1.merge(im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata_cover_the_measure() {
        for region in [
            RegionSpec::power_subgraph(2.0).unwrap(),
            RegionSpec::cantor_drum(1.0 / 3.0, 2.0).unwrap(),
            RegionSpec::stacked_power(),
            RegionSpec::interval_chain(2.0, 3.0).unwrap(),
            RegionSpec::interval_chain(0.5, 1.5).unwrap(),
        ] {
            let w: f64 = strata_outside(&region, Norm::Euclidean, 0.0, f64::INFINITY)
                .iter()
                .map(Stratum::weight)
                .sum();
            let m = region.total_measure().unwrap();
            assert!((w - m).abs() < 1e-12 * m, "{}: {w} vs {m}", region.family());
        }
    }

    #[test]
    fn samples_lie_in_the_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for region in [
            RegionSpec::cantor_drum(1.0 / 3.0, 2.0).unwrap(),
            RegionSpec::stacked_power(),
            RegionSpec::interval_chain(2.0, 3.0).unwrap(),
        ] {
            let n = region.ambient_dim();
            for s in strata_outside(&region, Norm::Sup, 5.0, f64::INFINITY) {
                for _ in 0..200 {
                    let p = s.sample(&mut rng);
                    // far out the layers are thinner than the float spacing of y
                    if let Stratum::Strip { layer, .. } = &s {
                        if layer.profile.height(p[0]) < 1e-9 {
                            continue;
                        }
                    }
                    assert!(region.contains(&p[..n]).unwrap(), "{:?}", p);
                }
            }
        }
    }

    #[test]
    fn pareto_matches_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0u32; 4];
        for _ in 0..100_000 {
            let j = pareto_index(3.0, 1.0, 4.0, &mut rng) as usize;
            counts[j - 1] += 1;
        }
        let total: f64 = (1..=4).map(|j| (j as f64).powi(-3)).sum();
        for j in 1..=4 {
            let p = (j as f64).powi(-3) / total;
            let f = counts[j - 1] as f64 / 1e5;
            assert!((f - p).abs() < 5.0 * (p * (1.0 - p) / 1e5).sqrt(), "j={j}");
        }
    }

    #[test]
    fn moments_are_thread_count_independent() {
        let region = RegionSpec::power_subgraph(2.0).unwrap();
        let strata = strata_outside(&region, Norm::Euclidean, 1.2, f64::INFINITY);
        let counts = allocate(&strata.iter().map(Stratum::weight).collect::<Vec<_>>(), 40_000, 2);
        let f = |_: usize, p: &[f64; 2]| Complex64::new(p[0].hypot(p[1]), 0.0);
        let a = stratified_moments(&strata, &counts, 3, f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| stratified_moments(&strata, &counts, 3, f));
        assert_eq!(a[0].0.mean().to_bits(), b[0].0.mean().to_bits());
    }
}
