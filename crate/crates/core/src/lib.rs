//! Numerical verification of a second-moment trace formula for level-one
//! holomorphic Hecke eigenforms.
//!
//! The spectral side weights central L-values by Hecke eigenvalues and
//! L(1, sym² f); the geometric side is a closed-form main term plus three
//! hypergeometric error series. [`verify`] evaluates both and compares them.

pub mod error;
pub mod geometric;
pub mod lfunc;
pub mod modforms;
pub mod precision;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use precision::{DoubleDouble, Precision, Real};
