//! Tube function at infinity `t ↦ |B_t(0)^c ∩ Ω|`.

mod analytic;
mod mc;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::{Norm, RegionSpec};

pub(crate) use analytic::tube_value;
pub use mc::{tube_volume_mc, MIN_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeSample {
    pub t: f64,
    pub volume: f64,
    pub stderr: f64,
    pub norm: Norm,
}

impl TubeSample {
    pub fn exact(t: f64, volume: f64, norm: Norm) -> Self {
        Self {
            t,
            volume,
            stderr: 0.0,
            norm,
        }
    }
}

/// Geometric grid `t_i = t0 · ratio^i`, `i < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Grid {
    /// Quarter-octave grid of 64 radii.
    pub fn standard(t0: f64) -> Self {
        Self {
            t0,
            ratio: 2f64.powf(0.25),
            count: 64,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.t0 * self.ratio.powi(i as i32))
    }

    fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::param("t0", "must be positive"));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(Error::param("ratio", "must exceed 1"));
        }
        if self.count == 0 {
            return Err(Error::param("count", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Analytic,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeScan {
    pub grid: Grid,
    pub samples: Vec<TubeSample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TubeScan {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(["t", "volume", "stderr", "norm"])?;
        for s in &self.samples {
            w.write_record([
                s.t.to_string(),
                s.volume.to_string(),
                s.stderr.to_string(),
                s.norm.name().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn norm(&self) -> Option<Norm> {
        self.samples.first().map(|s| s.norm)
    }
}

/// Exact tube volume; errors for unsupported (region, norm) pairs or radii
/// below the region's validity threshold.
pub fn tube_volume_analytic(region: &RegionSpec, t: f64, norm: Norm) -> Result<TubeSample> {
    tube_value(region, t, norm).map(|v| TubeSample::exact(t, v, norm))
}

pub fn tube_scan(region: &RegionSpec, norm: Norm, grid: Grid, method: Method) -> Result<TubeScan> {
    grid.validate()?;
    let samples = grid
        .points()
        .map(|t| match method {
            Method::Analytic => tube_volume_analytic(region, t, norm),
            Method::MonteCarlo { samples, seed } => tube_volume_mc(region, t, norm, samples, seed),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    for w in samples.windows(2) {
        let rise = w[1].volume - w[0].volume;
        match method {
            Method::Analytic if rise > 0.0 => {
                return Err(Error::NonConvergence(format!(
                    "tube volume increases between t = {} and t = {}",
                    w[0].t, w[1].t
                )))
            }
            Method::MonteCarlo { .. } if rise > 3.0 * w[0].stderr.hypot(w[1].stderr) => {
                warnings.push(format!(
                    "volume rises by {rise:.3e} between t = {} and t = {} (beyond 3 sigma)",
                    w[0].t, w[1].t
                ));
            }
            _ => {}
        }
    }
    Ok(TubeScan {
        grid,
        samples,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_scan_halves() {
        let p = RegionSpec::power_subgraph(2.0).unwrap();
        let grid = Grid {
            t0: 1.0,
            ratio: 2.0,
            count: 4,
        };
        let scan = tube_scan(&p, Norm::Sup, grid, Method::Analytic).unwrap();
        let v: Vec<f64> = scan.samples.iter().map(|s| s.volume).collect();
        assert_eq!(v, vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn csv_header() {
        let p = RegionSpec::power_subgraph(2.0).unwrap();
        let scan = tube_scan(&p, Norm::Sup, Grid::standard(1.0), Method::Analytic).unwrap();
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,volume,stderr,norm\n1,1,0,sup\n"));
        assert_eq!(text.lines().count(), 65);
    }

    #[test]
    fn interval_chain_below_threshold() {
        let ic = RegionSpec::interval_chain(0.5, 1.5).unwrap();
        let err = tube_volume_analytic(&ic, 1.0, Norm::Sup).unwrap_err();
        assert!(matches!(err, Error::UnsupportedRadius { .. }));
    }
}
