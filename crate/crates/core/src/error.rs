use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point has dimension {got}, region lives in R^{expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("radius {t} is below the validity threshold t_min = {t_min}")]
    UnsupportedRadius { t: f64, t_min: f64 },

    #[error("s = {s} is outside the admissible half-plane Re s > {bound}")]
    Domain { s: Complex64, bound: f64 },

    #[error("s = {location} is a pole of the zeta function")]
    Pole { location: Complex64 },

    #[error("window lies within {distance:.3e} of the pole accumulation point {point}")]
    AccumulationBoundary { point: Complex64, distance: f64 },

    #[error(
        "subdivision depth exhausted on sub-window Re [{re_min}, {re_max}] x Im [{im_min}, {im_max}]"
    )]
    SubdivisionExhausted {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },

    #[error("could not move the window boundary off a singularity")]
    BoundaryNudge,

    #[error("circle encloses a net pole count of {count}, expected exactly one simple pole")]
    EnclosedPoles { count: i64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Unsupported(_)
                | Error::DimensionMismatch { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
