//! `ζ(s) = T^{-s-N} V(T) - (s+N) ∫_T^∞ t^{-s-N-1} V(t) dt` by quadrature
//! in `u = log(t/T)`, for `Re s` beyond the abscissa.

use num_complex::Complex64;

use super::{ZetaEvaluator, ZetaValue};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, integrate_with_breaks, QuadConfig};
use crate::regions::{BoxDimension, IntervalChain, Norm, RegionSpec};
use crate::tube::tube_value;

/// Radius past which the remaining integral is extrapolated from the power law.
const T_FAR: f64 = 1e290;
/// Tube volumes below this are too close to underflow to track.
const V_FLOOR: f64 = 1e-250;
const MAX_CHUNKS: usize = 4000;
/// Cells summed one by one before switching to Euler–Maclaurin.
const DIRECT_CELLS: f64 = 512.0;

#[derive(Debug, Clone, Copy)]
pub(super) struct Integral {
    pub value: Complex64,
    pub abs_err: f64,
}

pub(super) fn evaluate(ev: &ZetaEvaluator, s: Complex64) -> Result<ZetaValue> {
    check_domain(ev, s, ev.margin)?;
    let n = ev.region().ambient_dim() as f64;
    let t = ev.t();
    let v_t = tube_value(ev.region(), t, ev.norm())?;
    let boundary = (-(s + n) * t.ln()).exp() * v_t;
    let tail = tube_integral(ev, s, t, None)?;
    Ok(ZetaValue {
        value: boundary - (s + n) * tail.value,
        abs_err: (s + n).norm() * tail.abs_err,
    })
}

pub(super) fn check_domain(ev: &ZetaEvaluator, s: Complex64, margin: f64) -> Result<()> {
    match ev.abscissa() {
        BoxDimension::Finite(d) if s.re <= d + margin => Err(Error::Domain { s, bound: d + margin }),
        _ => Ok(()),
    }
}

/// `∫_{t_lo}^{t_hi} t^{-s-N-1} V(t) dt`, with `t_hi = ∞` when `None`.
pub(super) fn tube_integral(
    ev: &ZetaEvaluator,
    s: Complex64,
    t_lo: f64,
    t_hi: Option<f64>,
) -> Result<Integral> {
    match ev.region() {
        RegionSpec::IntervalChain(ic) => chain_integral(ic, s, t_lo, t_hi, ev.tol()),
        region => planar_integral(region, ev.norm(), ev.abscissa(), s, t_lo, t_hi, ev.tol()),
    }
}

/// Radii where the tube function of a planar family is not smooth.
fn kinks(region: &RegionSpec, norm: Norm, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    match (region, norm) {
        (RegionSpec::PowerSubgraph(p), Norm::Euclidean) => {
            let a = p.alpha();
            let xm = a.powf(1.0 / (2.0 * a + 2.0));
            out.push(2f64.sqrt());
            out.push((xm * xm + xm.powf(-2.0 * a)).sqrt());
        }
        (RegionSpec::ExpSubgraph(_), Norm::Euclidean) => out.push((1.0 + (-2f64).exp()).sqrt()),
        (RegionSpec::CantorDrum(c), _) => {
            let mut x = 1.0 / c.a();
            while x < hi {
                out.push(x);
                x /= c.a();
            }
        }
        _ => {}
    }
    out.retain(|&k| k > lo && k < hi);
    out.sort_by(f64::total_cmp);
    out
}

fn planar_integral(
    region: &RegionSpec,
    norm: Norm,
    dim: BoxDimension,
    s: Complex64,
    t_lo: f64,
    t_hi: Option<f64>,
    tol: f64,
) -> Result<Integral> {
    let n = region.ambient_dim() as f64;
    let ln_lo = t_lo.ln();
    let u_end = t_hi.map(|h| (h / t_lo).ln());
    let cfg = QuadConfig {
        abs_tol: 1e-3 * tol,
        rel_tol: 1e-13,
        max_intervals: 400,
    };
    let sigma = s.re;
    let factor = (s + n).norm();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut failure = None;
    for chunk in 0..MAX_CHUNKS {
        let u0 = chunk as f64;
        let u1 = match u_end {
            Some(e) => (u0 + 1.0).min(e),
            None => u0 + 1.0,
        };
        if u1 <= u0 {
            break;
        }
        let (ta, tb) = (t_lo * u0.exp(), t_lo * u1.exp());
        let mut points = vec![u0];
        points.extend(kinks(region, norm, ta, tb).into_iter().map(|k| (k / t_lo).ln()));
        points.push(u1);
        let q = integrate_with_breaks(
            |u: f64| {
                let t = t_lo * u.exp();
                match tube_value(region, t, norm) {
                    Ok(v) => (-(s + n) * (ln_lo + u)).exp() * v,
                    Err(_) => Complex64::new(f64::NAN, 0.0),
                }
            },
            &points,
            &cfg,
        );
        if !q.value.re.is_finite() {
            failure = Some(tube_value(region, ta, norm).err());
        }
        value += q.value;
        err += q.abs_err;
        match u_end {
            Some(e) if u1 >= e => break,
            Some(_) => continue,
            None => {}
        }
        let t_u = tb;
        let v_u = tube_value(region, t_u, norm)?;
        // |remaining| ≤ ∫_{t_U}^∞ t^{-σ-N-1} V(t) dt
        let bound = match dim {
            BoxDimension::Finite(d) => {
                let gap = sigma - d;
                let c = if (d + n).abs() < 1e-12 {
                    // V is nonincreasing, so V(t) ≤ V(t_U) exactly
                    v_u
                } else {
                    1.5 * v_u / t_u.powf(n + d)
                };
                if t_u > T_FAR || (v_u < V_FLOOR && v_u > 0.0) {
                    let c0 = v_u / t_u.powf(n + d);
                    // tail of the model V = c0 t^{N+d}
                    let model = c0 * (-(s - d) * t_u.ln()).exp() / (s - d);
                    value += model;
                    err += 0.5 * model.norm() + c * t_u.powf(d - sigma) / gap;
                    return Ok(Integral {
                        value,
                        abs_err: err,
                    });
                }
                c * t_u.powf(d - sigma) / gap
            }
            BoxDimension::NegInfinity => {
                if t_u < 2.0 * (sigma + n).abs() + 2.0 {
                    f64::INFINITY
                } else {
                    2.0 * t_u.powf(-sigma - n) * v_u
                }
            }
        };
        if bound * factor <= 0.5 * tol {
            err += bound;
            return Ok(Integral {
                value,
                abs_err: err,
            });
        }
    }
    if let Some(Some(e)) = failure {
        return Err(e);
    }
    if u_end.is_some() {
        return Ok(Integral {
            value,
            abs_err: err,
        });
    }
    Err(Error::NonConvergence(format!(
        "tube integral at s = {s} did not reach its tail bound"
    )))
}

/// Integral of `t^{-s-2} V(t)` over the cell `[a_x, a_{x+1}]`, for real `x`.
///
/// On `[a, a + l]` the tube is `tail(x+1) + (a + l - t)`, on `[a + l, a_{x+1}]`
/// it is `tail(x+1)`. Local coordinates `τ = t - a` keep the thin interval
/// resolved when `l` is far below the spacing of floats near `a`.
fn cell(ic: &IntervalChain, s: Complex64, x: f64, from: f64, cfg: &QuadConfig) -> Integral {
    let a = ic.left(x);
    let l = ic.length(x);
    let gap = ic.gap(x);
    let tail = ic.tail(x + 1.0);
    let e = -s - 2.0;
    let scale = (e * a.ln()).exp();
    let weight = |tau: f64| (e * (tau / a).ln_1p()).exp();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    if from < l {
        let q = integrate(|tau: f64| weight(tau) * (tail + l - tau), from, l, cfg);
        value += q.value;
        err += q.abs_err;
    }
    let start = from.max(l);
    if start < gap {
        let q = integrate(|tau: f64| weight(tau) * tail, start, gap, cfg);
        value += q.value;
        err += q.abs_err;
    }
    Integral {
        value: scale * value,
        abs_err: scale.norm() * err,
    }
}

fn chain_integral(
    ic: &IntervalChain,
    s: Complex64,
    t_lo: f64,
    t_hi: Option<f64>,
    tol: f64,
) -> Result<Integral> {
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_intervals: 200,
    };
    let j_lo = ic.cell_of(t_lo) as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut add = |q: Integral| {
        value += q.value;
        err += q.abs_err;
    };
    if let Some(t_hi) = t_hi {
        let j_hi = ic.cell_of(t_hi) as f64;
        let mut j = j_lo;
        while j <= j_hi {
            let a = ic.left(j);
            let from = if j == j_lo { t_lo - a } else { 0.0 };
            let whole = cell(ic, s, j, from, &cfg);
            if j == j_hi {
                // drop the part of the last cell beyond t_hi
                let beyond = cell(ic, s, j, t_hi - a, &cfg);
                add(Integral {
                    value: whole.value - beyond.value,
                    abs_err: whole.abs_err + beyond.abs_err,
                });
            } else {
                add(whole);
            }
            j += 1.0;
        }
        return Ok(Integral {
            value,
            abs_err: err,
        });
    }
    add(cell(ic, s, j_lo, t_lo - ic.left(j_lo), &cfg));
    let big = j_lo + 1.0 + DIRECT_CELLS;
    let mut j = j_lo + 1.0;
    while j < big {
        add(cell(ic, s, j, 0.0, &cfg));
        j += 1.0;
    }
    let c = |x: f64| cell(ic, s, x, 0.0, &cfg).value;
    // Σ_{j≥J} c(j) = ∫_J^∞ c + c(J)/2 - c'(J)/12 + c'''(J)/720 - ...
    let (m2, m1, c0, p1, p2) = (c(big - 2.0), c(big - 1.0), c(big), c(big + 1.0), c(big + 2.0));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / 2.0;
    let integral = continuous_cells(ic, s, big, tol)?;
    add(integral);
    let correction = 0.5 * c0 - d1 / 12.0 + d3 / 720.0;
    add(Integral {
        value: correction,
        abs_err: 0.1 * d3.norm() / 720.0 + 1e-15 * c0.norm(),
    });
    Ok(Integral {
        value,
        abs_err: err,
    })
}

/// `∫_J^∞ c(x) dx` over the continuous cell index, with `x = J e^v`.
fn continuous_cells(ic: &IntervalChain, s: Complex64, big: f64, tol: f64) -> Result<Integral> {
    let cell_cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 200,
    };
    let cfg = QuadConfig {
        abs_tol: 1e-4 * tol,
        rel_tol: 1e-13,
        max_intervals: 400,
    };
    let decay = ic.alpha() * (s.re - ic.dimension());
    let x_cap = 1e300f64.powf(1.0 / ic.alpha()).min(1e300);
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for chunk in 0..MAX_CHUNKS {
        let (v0, v1) = (chunk as f64, chunk as f64 + 1.0);
        let q = integrate(
            |v: f64| {
                let x = big * v.exp();
                cell(ic, s, x, 0.0, &cell_cfg).value * x
            },
            v0,
            v1,
            &cfg,
        );
        value += q.value;
        err += q.abs_err;
        let x_u = big * v1.exp();
        let edge = (cell(ic, s, x_u, 0.0, &cell_cfg).value * x_u).norm();
        let bound = 1.5 * edge / decay;
        if bound <= 0.1 * tol {
            return Ok(Integral {
                value,
                abs_err: err + bound,
            });
        }
        if x_u * std::f64::consts::E > x_cap {
            return Ok(Integral {
                value,
                abs_err: err + bound,
            });
        }
    }
    Err(Error::NonConvergence("cell sum did not reach its tail bound".into()))
}
