//! The `zinf` command line.
//!
//! Every command reads a region file, writes CSV or JSON to `--out` (or
//! stdout) and exits with 0 on success, 2 on configuration errors, 3 on
//! numeric or domain errors and 4 when a check fails.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cplxdim::{find_poles, residue_at, WindowSpec};
use crate::error::{Error, Result};
use crate::inversion::inversion_identity_check;
use crate::minkowski::{estimate_dimension, DimensionOptions};
use crate::regions::{Norm, RegionFile, RegionSpec};
use crate::tube::{tube_scan, Grid, Method};
use crate::zeta::{Mode, ZetaEvaluator};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "zinf", version, about = "Fractal invariants of unbounded sets at infinity")]
pub struct Cli {
    /// Region file: {"family": ..., "params": {...}}.
    #[arg(long, global = true)]
    pub region: Option<PathBuf>,
    #[arg(long, global = true, default_value = "sup")]
    pub norm: Norm,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Absolute tolerance for zeta quadrature.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Numeric,
    ClosedForm,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::ClosedForm => Mode::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// First radius; defaults to the region's validity threshold.
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long, default_value_t = 2f64.powf(0.25))]
    pub ratio: f64,
    #[arg(long, default_value_t = 64)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    pub method: MethodArg,
    /// Monte Carlo samples per radius.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tube volumes on a geometric grid of radii.
    TubeScan {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Box dimension and Minkowski contents at infinity.
    Dim {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.5)]
        tail_fraction: f64,
    },
    /// Zeta values as CSV `re_s,im_s,re_zeta,im_zeta,abs_err`.
    Zeta {
        /// Point `re[,im]`; repeatable.
        #[arg(long = "s", allow_hyphen_values = true)]
        s: Vec<String>,
        /// Rectangular grid `re_min,re_max,im_min,im_max,n_re,n_im`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value = "numeric")]
        mode: ModeArg,
        #[arg(long = "T")]
        t: Option<f64>,
    },
    /// Poles of the closed-form zeta function inside a window.
    Poles {
        #[arg(
            long,
            num_args = 4,
            allow_negative_numbers = true,
            value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"]
        )]
        window: Vec<f64>,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Residue of the closed-form zeta function by a circle integral.
    Residue {
        /// Centre `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
    },
    /// Inversion identity at each `s`, checked at 3σ.
    InvertCheck {
        #[arg(long = "s", allow_hyphen_values = true, required = true)]
        s: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long = "T")]
        t: Option<f64>,
    },
    /// Total Lebesgue measure.
    Measure,
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::param("s", format!("expected `re` or `re,im`, got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn parse_grid(text: &str) -> Result<Vec<Complex64>> {
    let bad = || Error::param("grid", format!("expected `re_min,re_max,im_min,im_max,n_re,n_im`, got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b, c, d, n, m] = parts.as_slice() else {
        return Err(bad());
    };
    let f = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let u = |p: &str| p.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(bad);
    let (re0, re1, im0, im1, n, m) = (f(a)?, f(b)?, f(c)?, f(d)?, u(n)?, u(m)?);
    let at = |lo: f64, hi: f64, k: usize, i: usize| {
        if k == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (k - 1) as f64
        }
    };
    Ok((0..n)
        .flat_map(|i| (0..m).map(move |j| Complex64::new(at(re0, re1, n, i), at(im0, im1, m, j))))
        .collect())
}

fn schema<T: Serialize>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    Ok(v)
}

enum Outcome {
    Done,
    CheckFailed(String),
}

struct Runner<'a> {
    cli: &'a Cli,
}

impl Runner<'_> {
    fn region(&self) -> Result<RegionSpec> {
        let path = self
            .cli
            .region
            .as_ref()
            .ok_or_else(|| Error::param("region", "--region FILE is required"))?;
        RegionFile::load(path)
    }

    fn grid(&self, region: &RegionSpec, g: &GridArgs) -> Result<(Grid, Method)> {
        let grid = Grid {
            t0: g.t0.unwrap_or_else(|| region.t_min()),
            ratio: g.ratio,
            count: g.count,
        };
        let method = match g.method {
            MethodArg::Analytic => Method::Analytic,
            MethodArg::Mc => Method::MonteCarlo {
                samples: g.samples,
                seed: self.cli.seed,
            },
        };
        Ok((grid, method))
    }

    fn run(&self, out: &mut dyn Write) -> Result<Outcome> {
        let norm = self.cli.norm;
        match &self.cli.command {
            Command::TubeScan { grid, format } => {
                let region = self.region()?;
                let (g, method) = self.grid(&region, grid)?;
                let scan = tube_scan(&region, norm, g, method)?;
                match format {
                    Format::Csv => scan.write_csv(&mut *out)?,
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&schema(&scan)?)?)?,
                }
            }
            Command::Dim { grid, tail_fraction } => {
                let region = self.region()?;
                let (g, method) = self.grid(&region, grid)?;
                let scan = tube_scan(&region, norm, g, method)?;
                let opts = DimensionOptions {
                    tail_fraction: *tail_fraction,
                    ..DimensionOptions::default()
                };
                let est = estimate_dimension(&scan, region.ambient_dim(), &opts)?;
                writeln!(out, "{}", serde_json::to_string(&schema(&est)?)?)?;
            }
            Command::Zeta { s, grid, mode, t } => {
                let region = self.region()?;
                let mut points: Vec<Complex64> = s.iter().map(|p| parse_complex(p)).collect::<Result<_>>()?;
                if let Some(g) = grid {
                    points.extend(parse_grid(g)?);
                }
                if points.is_empty() {
                    return Err(Error::param("s", "give at least one --s or a --grid"));
                }
                let t = t.unwrap_or_else(|| region.t_min());
                let mut ev = ZetaEvaluator::new(region, norm, t, (*mode).into())?;
                if let Some(tol) = self.cli.tol {
                    ev = ev.with_tol(tol);
                }
                let mut w = csv::WriterBuilder::new().from_writer(&mut *out);
                w.write_record(["re_s", "im_s", "re_zeta", "im_zeta", "abs_err"])?;
                for s in points {
                    let z = ev.eval(s)?;
                    w.write_record([
                        s.re.to_string(),
                        s.im.to_string(),
                        z.value.re.to_string(),
                        z.value.im.to_string(),
                        z.abs_err.to_string(),
                    ])?;
                }
                w.flush()?;
            }
            Command::Poles { window, depth, points } => {
                let region = self.region()?;
                let ev = ZetaEvaluator::closed_form(region, norm)?;
                let mut spec = WindowSpec::new(window[0], window[1], window[2], window[3])?;
                spec.depth_limit = *depth;
                spec.points = *points;
                let poles = find_poles(&ev, &spec)?;
                let rows: Vec<Value> = poles
                    .iter()
                    .map(|p| {
                        json!({
                            "schema": SCHEMA,
                            "re": p.location.re,
                            "im": p.location.im,
                            "res_re": p.residue.re,
                            "res_im": p.residue.im,
                            "order": p.order,
                        })
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string(&rows)?)?;
            }
            Command::Residue { at, radius } => {
                let region = self.region()?;
                let ev = ZetaEvaluator::closed_form(region, norm)?;
                let at = parse_complex(at)?;
                let r = residue_at(&ev, at, *radius, 256)?;
                let row = json!({
                    "schema": SCHEMA,
                    "re": at.re,
                    "im": at.im,
                    "res_re": r.value.re,
                    "res_im": r.value.im,
                    "abs_err": r.abs_err,
                    "radius": r.radius,
                    "order": r.order,
                });
                writeln!(out, "{}", serde_json::to_string(&row)?)?;
            }
            Command::InvertCheck { s, samples, t } => {
                let region = self.region()?;
                let points: Vec<Complex64> = s.iter().map(|p| parse_complex(p)).collect::<Result<_>>()?;
                let t = t.unwrap_or_else(|| region.t_min());
                let report = inversion_identity_check(&region, norm, t, &points, *samples, self.cli.seed)?;
                writeln!(out, "{}", serde_json::to_string(&schema(&report)?)?)?;
                if !report.passed {
                    return Ok(Outcome::CheckFailed("inversion identity failed at 3σ".into()));
                }
            }
            Command::Measure => {
                let region = self.region()?;
                let row = json!({
                    "schema": SCHEMA,
                    "family": region.family(),
                    "measure": region.total_measure()?,
                });
                writeln!(out, "{}", serde_json::to_string(&row)?)?;
            }
        }
        Ok(Outcome::Done)
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let runner = Runner { cli: &cli };
    let result = match &cli.out {
        Some(path) => File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let r = runner.run(&mut w);
            w.flush()?;
            r
        }),
        None => runner.run(stdout),
    };
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::CheckFailed(msg)) => {
            let _ = writeln!(stderr, "check failed: {msg}");
            EXIT_CHECK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERIC
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("-2.8,1").unwrap(), Complex64::new(-2.8, 1.0));
        assert_eq!(parse_complex("-1.5").unwrap(), Complex64::new(-1.5, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_grid("0,1,-1,1,2,3").unwrap().len(), 6);
    }

    #[test]
    fn missing_region_is_a_config_error() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(execute(["zinf", "measure"], &mut o, &mut e), EXIT_CONFIG);
        assert_eq!(execute(["zinf", "bogus"], &mut o, &mut e), EXIT_CONFIG);
    }
}
