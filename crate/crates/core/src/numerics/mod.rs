pub mod cplx;
pub mod hurwitz;
pub mod quad;
pub mod roots;
pub mod stats;
