//! Distance zeta function at infinity `ζ(s; T) = ∫_{|x|>T, x∈Ω} |x|^{-s-N} dx`.

mod checks;
mod closed;
mod numeric;

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::regions::{BoxDimension, Norm, RegionFile, RegionSpec};

pub use checks::{abscissa_check, zeta_t_shift_check, AbscissaPoint, AbscissaReport, ABSCISSA_STEPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Numeric,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub abs_err: f64,
}

#[derive(Debug, Clone)]
pub struct ZetaEvaluator {
    region: RegionSpec,
    norm: Norm,
    t: f64,
    mode: Mode,
    tol: f64,
    margin: f64,
}

impl ZetaEvaluator {
    pub fn new(region: RegionSpec, norm: Norm, t: f64, mode: Mode) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::param("T", format!("must be positive, got {t}")));
        }
        let t_min = region.t_min();
        if matches!(region, RegionSpec::IntervalChain(_)) && t < t_min {
            return Err(Error::UnsupportedRadius { t, t_min });
        }
        let supported = match mode {
            Mode::ClosedForm => matches!(
                (&region, norm),
                (RegionSpec::IntervalChain(_), _)
                    | (RegionSpec::PowerSubgraph(_), Norm::Sup)
                    | (RegionSpec::StackedPower(_), Norm::Sup)
                    | (RegionSpec::CantorDrum(_), Norm::Sup)
            ),
            Mode::Numeric => matches!(
                (&region, norm),
                (RegionSpec::IntervalChain(_), _)
                    | (RegionSpec::PowerSubgraph(_), _)
                    | (RegionSpec::ExpSubgraph(_), _)
                    | (RegionSpec::StackedPower(_), Norm::Sup)
                    | (RegionSpec::CantorDrum(_), Norm::Sup)
            ),
        };
        if !supported {
            return Err(Error::Unsupported(format!(
                "{mode:?} zeta evaluation for {} in the {norm} norm",
                region.family()
            )));
        }
        Ok(Self {
            region,
            norm,
            t,
            mode,
            tol: 1e-9,
            margin: 0.1,
        })
    }

    /// Closed-form evaluator at the default radius.
    pub fn closed_form(region: RegionSpec, norm: Norm) -> Result<Self> {
        let t = region.t_min();
        Self::new(region, norm, t, Mode::ClosedForm)
    }

    /// Numeric evaluator at the default radius.
    pub fn numeric(region: RegionSpec, norm: Norm) -> Result<Self> {
        let t = region.t_min();
        Self::new(region, norm, t, Mode::Numeric)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Minimal distance of `Re s` to the abscissa in numeric mode.
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Ok(Self::new(self.region.clone(), self.norm, t, self.mode)?
            .with_tol(self.tol)
            .with_margin(self.margin))
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Ok(Self::new(self.region.clone(), self.norm, self.t, mode)?
            .with_tol(self.tol)
            .with_margin(self.margin))
    }

    pub fn region(&self) -> &RegionSpec {
        &self.region
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Abscissa of convergence of the defining integral.
    pub fn abscissa(&self) -> BoxDimension {
        self.region
            .known_dimension()
            .unwrap_or(BoxDimension::Finite(f64::INFINITY))
    }

    /// Points where poles of the continuation accumulate.
    pub fn accumulation_points(&self) -> Vec<Complex64> {
        match (&self.region, self.mode) {
            (RegionSpec::StackedPower(_), Mode::ClosedForm) => vec![Complex64::new(-2.0, 0.0)],
            _ => Vec::new(),
        }
    }

    /// Whether the closed form is meromorphic beyond the abscissa.
    pub fn continues_past_abscissa(&self) -> bool {
        self.mode == Mode::ClosedForm && !matches!(self.region, RegionSpec::IntervalChain(_))
    }

    pub fn eval(&self, s: Complex64) -> Result<ZetaValue> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::param("s", "must be finite"));
        }
        match self.mode {
            Mode::ClosedForm => closed::evaluate(self, s),
            Mode::Numeric => numeric::evaluate(self, s),
        }
    }

    pub fn value(&self, s: Complex64) -> Result<Complex64> {
        self.eval(s).map(|z| z.value)
    }

    pub fn descriptor(&self) -> Result<EvaluatorFile> {
        let region = RegionFile::from_region(&self.region)?;
        Ok(EvaluatorFile {
            family: region.family,
            params: region.params,
            norm: self.norm,
            t: self.t,
            mode: self.mode,
        })
    }
}

/// Region file extended by `"norm"`, `"T"` and `"mode"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluatorFile {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    pub norm: Norm,
    #[serde(rename = "T")]
    pub t: f64,
    pub mode: Mode,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl EvaluatorFile {
    pub fn to_evaluator(&self) -> Result<ZetaEvaluator> {
        let region = RegionFile {
            family: self.family.clone(),
            params: self.params.clone(),
        }
        .to_region()?;
        ZetaEvaluator::new(region, self.norm, self.t, self.mode)
    }

    pub fn parse(text: &str) -> Result<ZetaEvaluator> {
        serde_json::from_str::<EvaluatorFile>(text)?.to_evaluator()
    }

    pub fn load(path: &Path) -> Result<ZetaEvaluator> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        let text = r#"{"family":"cantor_drum","params":{"a":0.25,"b":2.0},"norm":"sup","T":1.0,"mode":"closed_form"}"#;
        let ev = EvaluatorFile::parse(text).unwrap();
        assert_eq!(serde_json::to_string(&ev.descriptor().unwrap()).unwrap(), text);
    }

    #[test]
    fn unsupported_pairs() {
        let c = RegionSpec::cantor_drum(1.0 / 3.0, 2.0).unwrap();
        assert!(ZetaEvaluator::closed_form(c.clone(), Norm::Euclidean).is_err());
        assert!(ZetaEvaluator::numeric(c, Norm::Euclidean).is_err());
        assert!(ZetaEvaluator::closed_form(RegionSpec::exp_subgraph(), Norm::Sup).is_err());
    }
}
