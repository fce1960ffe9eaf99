//! Fractal invariants of unbounded sets of finite measure, taken at infinity.
//!
//! For a set `Ω ⊂ ℝ^N` of finite Lebesgue measure the crate computes the tube
//! function `t ↦ |B_t(0)^c ∩ Ω|`, box dimensions and Minkowski contents at
//! infinity, the distance zeta function
//! `ζ(s; T) = ∫_{|x| > T, x ∈ Ω} |x|^{-s-N} dx`, its poles (complex
//! dimensions) and residues, and the inversion `x ↦ x/|x|²` that maps the
//! neighbourhood of infinity onto a punctured neighbourhood of the origin.
//!
//! ```
//! use zeta_at_infinity::regions::{Norm, RegionSpec};
//! use zeta_at_infinity::tube::tube_volume_analytic;
//!
//! let region = RegionSpec::power_subgraph(2.0).unwrap();
//! let sample = tube_volume_analytic(&region, 10.0, Norm::Sup).unwrap();
//! assert!((sample.volume - 0.1).abs() < 1e-15);
//! ```

pub mod cli;
pub mod cplxdim;
pub mod error;
pub mod inversion;
pub mod minkowski;
pub mod numerics;
pub mod regions;
pub mod sampling;
pub mod tube;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
