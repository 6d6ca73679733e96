//! Exact rational matrices, the exact LDLᵀ PSD test, exact row reduction and
//! the floating-point kernels used by the numeric solver.

mod exact;
mod ldl;
mod matrix;
pub mod numeric;

pub use exact::{rref, Rref};
pub use ldl::{ldl_psd, LdlFactor, PsdCheck};
pub use matrix::RatMatrix;
