use crate::error::{Error, Result};
use crate::numerics::hurwitz::hurwitz_real;

/// Largest disjointness index we are willing to work with.
const MAX_START_INDEX: f64 = 1e12;

/// `∪_{j≥1} (j^α, j^α + j^{-β}) ⊂ ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalChain {
    alpha: f64,
    beta: f64,
    j0: u64,
    j_start: u64,
    /// Merged union of the intervals with index below `j_start`.
    prefix: Vec<(f64, f64)>,
}

impl IntervalChain {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::param("alpha", format!("must be a positive real, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 1.0) {
            return Err(Error::param("beta", format!("must exceed 1, got {beta}")));
        }
        let j0 = disjointness_index(alpha, beta)?;
        let j_start = start_index(alpha, beta, j0)?;
        let mut prefix: Vec<(f64, f64)> = Vec::new();
        for j in 1..j_start.min(1_000_000) {
            let (a, b) = endpoints(alpha, beta, j as f64);
            match prefix.last_mut() {
                Some(last) if a < last.1 => last.1 = last.1.max(b),
                _ => prefix.push((a, b)),
            }
        }
        Ok(Self {
            alpha,
            beta,
            j0,
            j_start,
            prefix,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Smallest `j0` with `j^{-β} < (j+1)^α - j^α` for all `j ≥ j0`.
    pub fn j0(&self) -> u64 {
        self.j0
    }

    /// First index whose left endpoint clears every earlier interval.
    pub fn j_start(&self) -> u64 {
        self.j_start
    }

    /// Radius from which the tube function is a disjoint tail sum.
    pub fn t_min(&self) -> f64 {
        self.left(self.j_start as f64)
    }

    pub fn dimension(&self) -> f64 {
        (1.0 - self.alpha - self.beta) / self.alpha
    }

    pub fn content(&self) -> f64 {
        1.0 / (self.beta - 1.0)
    }

    pub fn left(&self, j: f64) -> f64 {
        j.powf(self.alpha)
    }

    pub fn length(&self, j: f64) -> f64 {
        j.powf(-self.beta)
    }

    /// `(j+1)^α - j^α`, accurate for large `j`.
    pub fn gap(&self, j: f64) -> f64 {
        self.left(j) * (self.alpha * (1.0 / j).ln_1p()).exp_m1()
    }

    /// `Σ_{k≥j} k^{-β}` (also for non-integer `j`).
    pub fn tail(&self, j: f64) -> f64 {
        hurwitz_real(self.beta, j)
    }

    pub(crate) fn prefix_segments(&self) -> &[(f64, f64)] {
        &self.prefix
    }

    pub fn measure(&self) -> f64 {
        let prefix: f64 = self.prefix.iter().map(|(a, b)| b - a).sum();
        prefix + self.tail(self.j_start as f64)
    }

    /// Index `j ≥ j_start` with `a_j ≤ t < a_{j+1}`; requires `t ≥ t_min`.
    pub fn cell_of(&self, t: f64) -> u64 {
        let mut j = (t.powf(1.0 / self.alpha).floor() as u64).max(self.j_start);
        while j > self.j_start && self.left(j as f64) > t {
            j -= 1;
        }
        while self.left((j + 1) as f64) <= t {
            j += 1;
        }
        j
    }

    /// Exact tube function for `t ≥ t_min`.
    pub fn tube(&self, t: f64) -> Result<f64> {
        let t_min = self.t_min();
        if t < t_min {
            return Err(Error::UnsupportedRadius { t, t_min });
        }
        let j = self.cell_of(t);
        let jf = j as f64;
        let (a, l) = (self.left(jf), self.length(jf));
        let partial = (a - t + l).clamp(0.0, l);
        Ok(self.tail(jf + 1.0) + partial)
    }

    pub fn contains(&self, x: f64) -> bool {
        if x <= 1.0 {
            return false;
        }
        if self.prefix.iter().any(|&(a, b)| a < x && x < b) {
            return true;
        }
        // candidates satisfy (x - l_j)^{1/α} < j < x^{1/α}
        let inv = 1.0 / self.alpha;
        let hi = x.powf(inv).ceil();
        let mut lo = (x - 1.0).max(0.0).powf(inv).floor().max(1.0);
        for _ in 0..4 {
            let l = self.length(lo);
            let refined = (x - l).max(0.0).powf(inv).floor().max(1.0);
            if refined <= lo {
                break;
            }
            lo = refined;
        }
        let lo = lo.max(self.j_start as f64);
        let mut j = lo;
        while j <= hi {
            let (a, b) = endpoints(self.alpha, self.beta, j);
            if a < x && x < b {
                return true;
            }
            j += 1.0;
        }
        false
    }
}

fn endpoints(alpha: f64, beta: f64, j: f64) -> (f64, f64) {
    let a = j.powf(alpha);
    (a, a + j.powf(-beta))
}

fn separated(alpha: f64, beta: f64, j: f64) -> bool {
    let gap = j.powf(alpha) * (alpha * (1.0 / j).ln_1p()).exp_m1();
    j.powf(-beta) < gap
}

/// A monotone sufficient criterion for `separated` at all indices `≥ j`.
fn separated_from(alpha: f64, beta: f64, j: f64) -> bool {
    if alpha >= 1.0 {
        // the gap grows and the lengths shrink
        separated(alpha, beta, j)
    } else {
        // gap ≥ α (j+1)^{α-1}; the ratio below decreases in j
        j.powf(-beta) * (j + 1.0).powf(1.0 - alpha) < alpha
    }
}

fn disjointness_index(alpha: f64, beta: f64) -> Result<u64> {
    let mut hi = 1.0;
    while !separated_from(alpha, beta, hi) {
        hi *= 2.0;
        if hi > MAX_START_INDEX {
            return Err(Error::param(
                "alpha",
                "intervals do not separate before index 1e12",
            ));
        }
    }
    let mut lo = (hi / 2.0).floor().max(0.0);
    // smallest j in (lo, hi] satisfying the monotone criterion
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if separated_from(alpha, beta, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut j = hi;
    let floor = (hi - 1e6).max(1.0);
    while j > floor && separated(alpha, beta, j - 1.0) {
        j -= 1.0;
    }
    Ok(j as u64)
}

fn start_index(alpha: f64, beta: f64, j0: u64) -> Result<u64> {
    let prefix_max = if j0 <= 1_000_000 {
        (1..j0).map(|k| endpoints(alpha, beta, k as f64).1).fold(0.0, f64::max)
    } else {
        2f64.max((j0 as f64 - 1.0).powf(alpha) + 2f64.powf(-beta))
    };
    let mut j = (j0 as f64).max(prefix_max.powf(1.0 / alpha).floor());
    while j.powf(alpha) < prefix_max {
        j += 1.0;
    }
    if j > MAX_START_INDEX {
        return Err(Error::param("alpha", "overlapping prefix is too long"));
    }
    Ok(j as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ic23_is_disjoint_from_the_start() {
        let ic = IntervalChain::new(2.0, 3.0).unwrap();
        assert_eq!(ic.j0(), 1);
        assert_eq!(ic.j_start(), 1);
        assert_eq!(ic.t_min(), 1.0);
        assert!(ic.contains(4.001));
        assert!(!ic.contains(4.2));
        assert!(!ic.contains(4.0));
    }

    #[test]
    fn overlapping_prefix_is_merged() {
        let ic = IntervalChain::new(0.5, 1.5).unwrap();
        assert!(ic.j_start() >= ic.j0());
        let t0 = ic.t_min();
        for k in 1..ic.j_start() {
            let (_, b) = endpoints(0.5, 1.5, k as f64);
            assert!(b <= t0 + 1e-12);
        }
        for w in ic.prefix_segments().windows(2) {
            assert!(w[0].1 < w[1].0);
        }
        for j in ic.j0()..ic.j0() + 1000 {
            assert!(separated(0.5, 1.5, j as f64));
        }
    }

    #[test]
    fn tube_at_left_endpoints() {
        let ic = IntervalChain::new(2.0, 3.0).unwrap();
        let v = ic.tube(9.0).unwrap();
        let direct: f64 = (3..200000).map(|j| (j as f64).powi(-3)).sum();
        assert!((v - direct).abs() < 1e-10);
        let inside = ic.tube(9.01).unwrap();
        assert!((v - inside - 0.01).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(IntervalChain::new(0.0, 3.0).is_err());
        assert!(IntervalChain::new(2.0, 1.0).is_err());
    }
}
