//! Reference values recomputed from scratch and compared with the library.

use std::f64::consts::TAU;

use approx::assert_relative_eq;
use zeta_at_infinity::cplxdim::{principal_dimensions, residue_at};
use zeta_at_infinity::inversion::{fd_jacobian_det, inversion_jacobian_det, inverted_zeta_mc};
use zeta_at_infinity::regions::{Norm, RegionSpec};
use zeta_at_infinity::tube::{tube_volume_analytic, tube_volume_mc};
use zeta_at_infinity::zeta::ZetaEvaluator;
use zeta_at_infinity::Complex64;

fn cantor() -> RegionSpec {
    RegionSpec::cantor_drum(1.0 / 3.0, 2.0).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn cantor_measure_by_levels() {
    // level m holds 2^{m-1} copies of x^{-b} beyond x = a^{-m}
    for (a, b) in [(1.0 / 3.0, 2.0), (0.25, 1.8), (0.4, 3.5)] {
        let region = RegionSpec::cantor_drum(a, b).unwrap();
        let by_levels: f64 = (1..400)
            .map(|m| 2f64.powi(m - 1) * a.powf(m as f64 * (b - 1.0)) / (b - 1.0))
            .sum();
        assert_relative_eq!(region.total_measure().unwrap(), by_levels, max_relative = 1e-13);
    }
    assert_relative_eq!(cantor().total_measure().unwrap(), 1.0, max_relative = 1e-15);
}

#[test]
fn cantor_strip_height() {
    // copies at level m have height a^{bm} at their threshold: Σ 2^{m-1} 9^{-m} = 1/7
    let s: f64 = (1..60).map(|m| 2f64.powi(m - 1) * 9f64.powi(-m)).sum();
    assert_relative_eq!(s, 1.0 / 7.0, max_relative = 1e-15);
    assert_relative_eq!(cantor().strip_height().unwrap(), s, max_relative = 1e-14);
    let parts = cantor().stacking_offsets(1000).unwrap();
    assert!(parts.windows(2).all(|w| w[0].offset < w[1].offset));
    assert_eq!(parts.iter().filter(|p| p.level == 2).count(), 2);
    assert!(parts.iter().filter(|p| p.level == 2).all(|p| (p.x_threshold - 9.0).abs() < 1e-12));
}

#[test]
fn stacked_first_component() {
    let first = RegionSpec::stacked_power().stacking_offsets(1).unwrap()[0];
    assert_eq!(first.offset, 0.0);
    assert_eq!(first.exponent, 2.0);
    assert_eq!(first.coefficient, 0.5);
}

#[test]
fn cantor_sup_tube_by_components() {
    // all copies are lower than 1/7 < t, so each contributes ∫_{max(t, 3^m)}^∞ x^{-2}
    let t = 9.0f64;
    let sum: f64 = (1..200)
        .map(|m| 2f64.powi(m - 1) / t.max(3f64.powi(m)))
        .sum();
    assert_relative_eq!(sum, 7.0 / 9.0, max_relative = 1e-14);
    let analytic = tube_volume_analytic(&cantor(), t, Norm::Sup).unwrap().volume;
    assert_relative_eq!(analytic, sum, max_relative = 1e-12);
    let mc = tube_volume_mc(&cantor(), t, Norm::Sup, 200_000, 5).unwrap();
    assert!((mc.volume - sum).abs() <= 3.0 * mc.stderr + 1e-12);
}

#[test]
fn power_tube_monte_carlo() {
    let region = RegionSpec::power_subgraph(2.0).unwrap();
    let mc = tube_volume_mc(&region, 10.0, Norm::Sup, 1_000_000, 1).unwrap();
    assert!((mc.volume - 0.1).abs() <= 3.0 * mc.stderr, "{mc:?}");
    // euclidean: the subgraph point (x, y) leaves the ball iff x² + y² ≥ t²
    let t = 1.05f64;
    let euc = simpson(|x| if x >= t { x.powi(-2) } else { (x.powi(-2) - (t * t - x * x).sqrt()).max(0.0) }, 1.0, t, 20_000)
        + 1.0 / t;
    let analytic = tube_volume_analytic(&region, t, Norm::Euclidean).unwrap().volume;
    assert_relative_eq!(analytic, euc, max_relative = 1e-8);
}

#[test]
fn interval_chain_series() {
    let (alpha, beta) = (2.0, 3.0);
    let region = RegionSpec::interval_chain(alpha, beta).unwrap();
    let ev = ZetaEvaluator::closed_form(region, Norm::Sup).unwrap();
    let t = ev.t();
    let s = -1.8;
    // (a_j^{-s} - b_j^{-s}) / s with a_j = j^α, b_j = a_j + j^{-β}, stable form
    let term = |j: f64| -> f64 {
        let u = j.powf(-alpha - beta);
        -j.powf(-alpha * s) * (-s * u.ln_1p()).exp_m1() / s
    };
    let j_first = (1..).find(|&j| (j as f64).powf(alpha) >= t).unwrap();
    let cut = 200_000u64;
    let head: f64 = (j_first..=cut).map(|j| term(j as f64)).sum();
    // leading tail j^{-p}, p = α(s + 1) + β, by the midpoint rule
    let p = alpha * (s + 1.0) + beta;
    let tail = (cut as f64 + 0.5).powf(1.0 - p) / (p - 1.0);
    let oracle = head + tail;
    let z = ev.eval(c(s, 0.0)).unwrap();
    assert!((z.value.re - oracle).abs() <= 1e-8, "{} vs {oracle}", z.value.re);
}

#[test]
fn cantor_zeta_at_minus_two() {
    let ev = ZetaEvaluator::closed_form(cantor(), Norm::Sup).unwrap();
    let s = -2.0;
    let oracle = 1.0 / ((s + 3.0) * (3f64.powf(s + 3.0) - 2.0));
    let z = ev.value(c(s, 0.0)).unwrap();
    assert_relative_eq!(oracle, 1.0);
    assert!((z - oracle).norm() < 1e-12, "{z}");
}

#[test]
fn power_annulus_integral() {
    // ζ(s; 1) - ζ(s; 4) = ∫_1^4 x^{-s-2} x^{-2} dx in the sup norm
    let ev = ZetaEvaluator::closed_form(RegionSpec::power_subgraph(2.0).unwrap(), Norm::Sup).unwrap();
    let s = -3.2;
    let annulus = simpson(|x| x.powf(-s - 4.0), 1.0, 4.0, 2000);
    let shifted = ev.with_t(4.0).unwrap();
    let diff = ev.value(c(s, 0.0)).unwrap() - shifted.value(c(s, 0.0)).unwrap();
    assert!((diff.re - annulus).abs() <= 1e-8 && diff.im.abs() < 1e-15);
}

#[test]
fn cantor_residues_by_differentiation() {
    // ζ = 1 / (u (3^u - 2)), u = s + 3
    let ev = ZetaEvaluator::closed_form(cantor(), Norm::Sup).unwrap();
    let ln3 = 3f64.ln();
    let u0 = 2f64.ln() / ln3;
    let expected = 1.0 / (u0 * 2.0 * ln3);
    assert!((expected - 0.72135).abs() < 1e-5);
    let r = residue_at(&ev, c(u0 - 3.0, 0.0), 0.1, 256).unwrap();
    assert!((r.value - expected).norm() < 1e-10);
    let r = residue_at(&ev, c(-3.0, 0.0), 0.1, 256).unwrap();
    assert!((r.value + 1.0).norm() < 1e-10);
}

#[test]
fn principal_lattice_has_seven_poles() {
    let ev = ZetaEvaluator::closed_form(cantor(), Norm::Sup).unwrap();
    let poles = principal_dimensions(&ev, 20.0).unwrap();
    assert_eq!(poles.len(), 7);
    let spacing = TAU / 3f64.ln();
    for w in poles.windows(2) {
        assert!((w[1].location.im - w[0].location.im - spacing).abs() < 1e-8);
    }
}

#[test]
fn residues_by_epsilon_scaling() {
    let cases = [
        (RegionSpec::power_subgraph(3.0).unwrap(), -4.0, 1.0),
        (RegionSpec::interval_chain(2.0, 3.0).unwrap(), -2.0, 0.5),
    ];
    for (region, d, res) in cases {
        let ev = ZetaEvaluator::closed_form(region, Norm::Sup).unwrap();
        let errs: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| (e * ev.value(c(d + e, 0.0)).unwrap().re - res).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0] || w[0] < 1e-10), "{errs:?}");
        assert!(errs[3] < 1e-3);
    }
}

#[test]
fn jacobian_at_two_zero() {
    assert_eq!(inversion_jacobian_det(&[2.0, 0.0]).unwrap(), -1.0 / 16.0);
    assert_relative_eq!(fd_jacobian_det(&[2.0, 0.0]).unwrap(), -1.0 / 16.0, max_relative = 1e-8);
}

#[test]
fn inverted_drum_matches_zeta() {
    let region = RegionSpec::power_subgraph(3.0).unwrap();
    let est = inverted_zeta_mc(&region, Norm::Sup, 1.0, c(-3.5, 0.0), 400_000, 21).unwrap();
    assert!((est.estimate - 2.0).norm() <= 3.0 * est.stderr + est.truncation, "{est:?}");

    let euc = ZetaEvaluator::numeric(region.clone(), Norm::Euclidean).unwrap();
    let s = c(3.0, 0.0);
    let est = inverted_zeta_mc(&region, Norm::Euclidean, 1.0, s, 400_000, 22).unwrap();
    let z = euc.eval(s).unwrap();
    assert!((est.estimate - z.value).norm() <= 3.0 * est.stderr.hypot(z.abs_err) + est.truncation);
}

#[test]
fn membership_cases() {
    let ic = RegionSpec::interval_chain(2.0, 3.0).unwrap();
    assert!(ic.contains(&[4.001]).unwrap());
    assert!(!ic.contains(&[4.2]).unwrap());
    let power = RegionSpec::power_subgraph(2.0).unwrap();
    assert!(!power.contains(&[10.0, 0.02]).unwrap());
    assert!(power.contains(&[10.0, 0.009]).unwrap());
    assert!(!cantor().contains(&[20.0, -1e-9]).unwrap());
}
