//! Exact scalars: arbitrary-precision rationals, cyclotomic fields, word-size
//! prime fields, plus extended-precision floats for cross-checks.

mod cyclotomic;
pub mod float;
pub mod modular;
pub mod poly;

pub use cyclotomic::{cyc_add, cyc_inv, cyc_mul, extract_rational, CycNum};
pub use float::{Ext128, ExtFloat, RealScalar};
pub use poly::cyclotomic_polynomial;
