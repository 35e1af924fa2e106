//! Special functions: Gamma family, incomplete Gamma, zeta, Gauss ₂F₁ and the
//! quadrature oracles used to cross-check them.

mod gamma;
mod hyp2f1;
mod incgamma;
mod lattice;
pub mod quad;
mod zeta;

pub use gamma::{beta, digamma, gamma, gamma_ratio, gamma_real, log_gamma};
pub use hyp2f1::{
    hyp2f1, hyp2f1_euler_oracle, hyp2f1_param_grad, hyp2f1_with_cap, EvalResult, Hyp2F1Args, DEFAULT_TERM_CAP,
    DIRECT_LIMIT,
};
pub use incgamma::upper_incomplete_gamma;
pub use lattice::lattice_sum_check;
pub use zeta::zeta;
