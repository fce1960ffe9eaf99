//! Complex dimensions: poles of closed-form zeta functions, located by the
//! argument principle and refined by Newton's method on `1/ζ`.

mod contour;
mod residue;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::BoxDimension;
use crate::zeta::{Mode, ZetaEvaluator};

pub use contour::{derivative, rect_moments, CellMoments};
pub use residue::{residue_at, residue_content_check, Residue, ResidueContentReport, ResidueSource};

/// Closest a window may come to a point where poles accumulate.
pub const ACCUMULATION_CLEARANCE: f64 = 1e-3;
const NUDGES: [f64; 4] = [0.0, 2.5e-4, 5e-4, 1e-3];
const SPLITS: [f64; 5] = [0.5, 0.5371, 0.4563, 0.5913, 0.3873];

/// Closed rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    /// Corners in counter-clockwise order from the lower left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, s: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&s.re) && (self.im_min..=self.im_max).contains(&s.im)
    }

    /// Distance from `p` to the closed rectangle, zero inside.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let dx = (self.re_min - p.re).max(p.re - self.re_max).max(0.0);
        let dy = (self.im_min - p.im).max(p.im - self.im_max).max(0.0);
        dx.hypot(dy)
    }

    fn expand(&self, d: f64) -> Self {
        Self::new(self.re_min - d, self.re_max + d, self.im_min - d, self.im_max + d)
    }

    /// Cut across the longer side at fraction `f`.
    fn split(&self, f: f64) -> (Self, Self) {
        if self.re_max - self.re_min >= self.im_max - self.im_min {
            let x = self.re_min + f * (self.re_max - self.re_min);
            (
                Self::new(self.re_min, x, self.im_min, self.im_max),
                Self::new(x, self.re_max, self.im_min, self.im_max),
            )
        } else {
            let y = self.im_min + f * (self.im_max - self.im_min);
            (
                Self::new(self.re_min, self.re_max, self.im_min, y),
                Self::new(self.re_min, self.re_max, y, self.im_max),
            )
        }
    }

    fn exhausted(&self) -> Error {
        Error::SubdivisionExhausted {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: self.im_min,
            im_max: self.im_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub depth_limit: usize,
    /// Quadrature points on residue circles.
    pub points: usize,
}

impl WindowSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !all_finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::param(
                "window",
                format!("need re_min < re_max and im_min < im_max, got [{re_min}, {re_max}] x [{im_min}, {im_max}]"),
            ));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
            depth_limit: 40,
            points: 256,
        })
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.re_min, self.re_max, self.im_min, self.im_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleMethod {
    Analytic,
    Contour,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleReport {
    pub location: Complex64,
    pub residue: Complex64,
    pub residue_err: f64,
    pub order: u32,
    pub window: WindowSpec,
    pub method: PoleMethod,
}

/// Everything the subdivision found inside a window.
#[derive(Debug, Clone)]
pub struct PoleSearch {
    pub poles: Vec<PoleReport>,
    pub zeros: Vec<Complex64>,
    /// `(1/2πi) ∮ ζ'/ζ` over the (possibly nudged) window boundary.
    pub counting_integral: Complex64,
    /// The rectangle actually integrated over.
    pub boundary: Rect,
}

impl PoleSearch {
    /// Zeros minus poles from the subdivision, to compare with the counting integral.
    pub fn net_count(&self) -> i64 {
        self.zeros.len() as i64 - self.poles.iter().map(|p| p.order as i64).sum::<i64>()
    }
}

#[derive(Debug, Clone, Copy)]
struct Leaf {
    location: Complex64,
    order: u32,
    pole: bool,
}

fn check_evaluator(ev: &ZetaEvaluator) -> Result<()> {
    if ev.mode() != Mode::ClosedForm || !ev.continues_past_abscissa() {
        return Err(Error::Unsupported(format!(
            "pole search needs a meromorphic closed form; {} in {:?} mode has none",
            ev.region().family(),
            ev.mode()
        )));
    }
    Ok(())
}

fn check_accumulation(ev: &ZetaEvaluator, rect: &Rect) -> Result<()> {
    for point in ev.accumulation_points() {
        let distance = rect.distance_to(point);
        if distance < ACCUMULATION_CLEARANCE {
            return Err(Error::AccumulationBoundary { point, distance });
        }
    }
    Ok(())
}

/// Moments over `rect` if its boundary is clear of singularities.
fn clean_moments(ev: &ZetaEvaluator, rect: &Rect) -> Result<Option<CellMoments>> {
    match rect_moments(ev, rect) {
        Ok(m) if m.count().is_some() => Ok(Some(m)),
        Ok(_) | Err(Error::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn subdivide(ev: &ZetaEvaluator, rect: Rect, m: CellMoments, depth: usize, limit: usize) -> Result<Vec<Leaf>> {
    let k = m.count().ok_or_else(|| rect.exhausted())?;
    let scale = rect.diameter();
    let [m0, m1, m2] = m.m.0;
    if k == 0 && m1.norm() <= 1e-8 * scale && m2.norm() <= 1e-8 * scale * scale {
        return Ok(Vec::new());
    }
    if k != 0 {
        let shift = m1 / m0;
        let spread = m2 / m0 - shift * shift;
        let location = m.center + shift;
        // a single singularity of multiplicity |k| has zero spread
        if spread.norm() <= 1e-8 * scale * scale && rect.contains(location) {
            return Ok(vec![Leaf {
                location,
                order: k.unsigned_abs() as u32,
                pole: k < 0,
            }]);
        }
    }
    if depth >= limit {
        return Err(rect.exhausted());
    }
    for f in SPLITS {
        let (a, b) = rect.split(f);
        let (ma, mb) = rayon::join(|| clean_moments(ev, &a), || clean_moments(ev, &b));
        let (Some(ma), Some(mb)) = (ma?, mb?) else {
            continue;
        };
        if ma.count().zip(mb.count()).map(|(x, y)| x + y) != Some(k) {
            continue;
        }
        let (la, lb) = rayon::join(
            || subdivide(ev, a, ma, depth + 1, limit),
            || subdivide(ev, b, mb, depth + 1, limit),
        );
        let mut out = la?;
        out.extend(lb?);
        return Ok(out);
    }
    Err(rect.exhausted())
}

/// Newton's method on `1/ζ`, which has a zero of multiplicity `order` at the pole.
pub fn refine_pole(ev: &ZetaEvaluator, start: Complex64, order: u32) -> Result<Complex64> {
    let mut s = start;
    for _ in 0..60 {
        let (h, dh) = contour::inverse_and_derivative(ev, s)?;
        if h.norm() == 0.0 || dh.norm() == 0.0 {
            break;
        }
        let step = order as f64 * h / dh;
        s -= step;
        if step.norm() <= 1e-13 * (1.0 + s.norm()) {
            break;
        }
    }
    Ok(s)
}

/// All poles of a closed-form evaluator inside `window`, sorted by (Re, Im).
pub fn find_poles(ev: &ZetaEvaluator, window: &WindowSpec) -> Result<Vec<PoleReport>> {
    Ok(search(ev, window)?.poles)
}

pub fn search(ev: &ZetaEvaluator, window: &WindowSpec) -> Result<PoleSearch> {
    check_evaluator(ev)?;
    let base = window.rect();
    check_accumulation(ev, &base)?;
    let mut start = None;
    for d in NUDGES {
        let rect = base.expand(d);
        if let Some(m) = clean_moments(ev, &rect)? {
            start = Some((rect, m));
            break;
        }
    }
    let (boundary, moments) = start.ok_or(Error::BoundaryNudge)?;
    let leaves = subdivide(ev, boundary, moments, 0, window.depth_limit)?;
    let zeros: Vec<Complex64> = leaves.iter().filter(|l| !l.pole).map(|l| l.location).collect();
    let rough: Vec<Leaf> = leaves.into_iter().filter(|l| l.pole).collect();
    let mut poles = Vec::with_capacity(rough.len());
    for (i, leaf) in rough.iter().enumerate() {
        let location = refine_pole(ev, leaf.location, leaf.order)?;
        let nearest = rough
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| (o.location - leaf.location).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = 0.1f64.min(nearest / 3.0);
        let res = residue_at(ev, location, radius, window.points)?;
        poles.push(PoleReport {
            location,
            residue: res.value,
            residue_err: res.abs_err,
            order: leaf.order,
            window: *window,
            method: PoleMethod::Contour,
        });
    }
    poles.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(PoleSearch {
        poles,
        zeros,
        counting_integral: moments.m.0[0],
        boundary,
    })
}

/// Poles on the critical line `Re s = dim_B` with `|Im s| ≤ im_range`.
///
/// A critical line through an accumulation point carries no poles there, and
/// every pole close to it lies strictly to its left, so the result is empty.
pub fn principal_dimensions(ev: &ZetaEvaluator, im_range: f64) -> Result<Vec<PoleReport>> {
    check_evaluator(ev)?;
    let d = match ev.region().known_dimension() {
        Some(BoxDimension::Finite(d)) => d,
        _ => return Err(Error::Unsupported("principal dimensions need a finite box dimension".into())),
    };
    let window = WindowSpec::new(d - 0.01, d + 0.01, -im_range, im_range)?;
    if ev
        .accumulation_points()
        .iter()
        .any(|p| window.rect().distance_to(*p) < ACCUMULATION_CLEARANCE)
    {
        return Ok(Vec::new());
    }
    Ok(find_poles(ev, &window)?
        .into_iter()
        .filter(|p| (p.location.re - d).abs() <= 1e-8)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{Norm, RegionSpec};

    #[test]
    fn single_power_pole() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::power_subgraph(3.0).unwrap(), Norm::Sup).unwrap();
        let poles = find_poles(&ev, &WindowSpec::new(-4.5, -3.5, -1.0, 1.0).unwrap()).unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0].location + 4.0).norm() < 1e-10);
        assert!((poles[0].residue - 1.0).norm() < 1e-10);
        assert_eq!(poles[0].order, 1);
    }

    #[test]
    fn stacked_poles_and_accumulation() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::stacked_power(), Norm::Sup).unwrap();
        let found = search(&ev, &WindowSpec::new(-3.1, -2.4, -0.5, 0.5).unwrap()).unwrap();
        let locs: Vec<f64> = found.poles.iter().map(|p| p.location.re).collect();
        assert_eq!(locs.len(), 2, "{locs:?}");
        assert!((locs[0] + 3.0).abs() < 1e-10 && (locs[1] + 2.5).abs() < 1e-10);
        assert_eq!(found.net_count(), found.counting_integral.re.round() as i64);
        let w = WindowSpec::new(-2.3, -1.9995, -0.5, 0.5).unwrap();
        assert!(matches!(find_poles(&ev, &w), Err(Error::AccumulationBoundary { .. })));
    }

    #[test]
    fn interval_chain_has_no_continuation() {
        let ev = ZetaEvaluator::closed_form(RegionSpec::interval_chain(2.0, 3.0).unwrap(), Norm::Sup).unwrap();
        assert!(find_poles(&ev, &WindowSpec::new(-3.0, -1.0, -1.0, 1.0).unwrap()).is_err());
    }
}
