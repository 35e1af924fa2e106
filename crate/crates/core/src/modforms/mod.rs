//! Exact q-expansions of level-one modular forms, the normalized Hecke
//! eigenforms of the one-dimensional cusp-form weights, and divisor functions.

mod arith;
mod eigenform;
mod qexp;

pub use arith::{divisors, factorize, int_pow, sigma0, sigma_v, tau_v};
pub use eigenform::{bigint_to_real, check_weight, eigenform, Eigenform, DEFAULT_COEFFICIENTS, SUPPORTED_WEIGHTS};
pub use qexp::{delta_qexp, eisenstein_qexp, QExpansion, MAX_COEFFICIENTS};
