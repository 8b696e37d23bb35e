pub mod arith;
pub mod chern;
pub mod error;
pub mod exactnum;
pub mod heisenberg;
pub mod pgl;
pub mod scalar;
pub mod splitting;
pub mod suite;
pub mod torsion;
pub mod verlinde;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub use exactnum::CycNum;

/// Exact slope classes.
pub type SlopeClassQ = chern::SlopeClass<Rational>;
pub type SlopeClassF64 = chern::SlopeClass<f64>;
pub type SlopeClassF32 = chern::SlopeClass<f32>;
