//! The geometric side of the relative trace formula: the closed-form main term
//! M₂, the three error series built from the ψ, φ and Φ kernels, the
//! specialization at s = (0, 0), and orbital integrals used as cross-checks.

mod kernels;
mod main_term;
pub mod orbital;
mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modforms::check_weight;
use crate::precision::{CExt, Cx, Real};

pub use kernels::{big_phi_term, big_phi_zero, phi0, phi_term, psi_term, psi_zero, KernelContext};
pub use main_term::{j_sing, j_sing_terms, m2_main, m2_zero, m2_zero_limit, prefactor, CkConstant};
pub use series::{e_total, e_zero, ErrorTerms, SeriesSum, DEFAULT_TERM_CAP};

/// Both |s₁|, |s₂| below this select the (0, 0) closed forms.
pub const ORIGIN_THRESHOLD: f64 = 1e-12;
/// Distance from an integer below which s₁ − s₂ is treated as integral.
pub const INTEGER_GUARD: f64 = 1e-12;

/// (−1)^{k/2} = i^k for even k.
pub fn parity_sign(k: u32) -> i32 {
    if (k / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub k: u32,
    pub n: u64,
    pub s1: Complex64,
    pub s2: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pathway {
    Generic,
    Origin,
}

impl SpectralParams {
    /// Validated parameters: supported weight, n ≥ 1, |Re sⱼ| < k/2 − 1, and
    /// s₁ − s₂ ∉ ℤ unless both shifts are (numerically) zero.
    pub fn new(k: u32, n: u64, s1: Complex64, s2: Complex64) -> Result<Self> {
        check_weight(k)?;
        if n == 0 {
            return Err(Error::Region("index n must be at least 1".into()));
        }
        let bound = k as f64 / 2.0 - 1.0;
        for (name, s) in [("s1", s1), ("s2", s2)] {
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::Region(format!("{name} = {s} is not finite")));
            }
            if !(s.re.abs() < bound) {
                return Err(Error::Region(format!("|Re {name}| = {} must be < k/2 - 1 = {bound}", s.re.abs())));
            }
        }
        let p = SpectralParams { k, n, s1, s2 };
        if p.pathway() == Pathway::Generic {
            let d = s1 - s2;
            if d.im.abs() < INTEGER_GUARD && (d.re - d.re.round()).abs() < INTEGER_GUARD {
                return Err(Error::Region(format!(
                    "s1 - s2 = {d} is an integer; only (0, 0) is admissible on that set"
                )));
            }
        }
        Ok(p)
    }

    pub fn origin(k: u32, n: u64) -> Result<Self> {
        Self::new(k, n, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn pathway(&self) -> Pathway {
        if self.s1.norm() < ORIGIN_THRESHOLD && self.s2.norm() < ORIGIN_THRESHOLD {
            Pathway::Origin
        } else {
            Pathway::Generic
        }
    }

    pub fn half_k(&self) -> i64 {
        self.k as i64 / 2
    }

    pub fn sign(&self) -> i32 {
        parity_sign(self.k)
    }

    pub fn s<R: Real>(&self) -> (Cx<R>, Cx<R>) {
        (Cx::from_c64(self.s1), Cx::from_c64(self.s2))
    }

    /// Exponent β with |term_m| = O(m^{−β}) for the infinite error series.
    pub fn decay_exponent(&self) -> f64 {
        self.k as f64 / 2.0 - self.s1.re.abs() - self.s2.re.abs()
    }
}

/// Settings for the geometric evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricOptions {
    /// Absolute target for the truncation tail of each infinite series.
    pub tol: f64,
    pub term_cap: usize,
    pub contour_radius: f64,
    pub contour_samples: usize,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        GeometricOptions {
            tol: 1e-12,
            term_cap: DEFAULT_TERM_CAP,
            contour_radius: 0.1,
            contour_samples: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentBreakdown<R: Real> {
    pub pathway: Pathway,
    /// The four summands of M₂ in display order. On the origin pathway the
    /// contour value occupies the first slot and the rest are zero.
    pub m2_terms: [Cx<R>; 4],
    pub e1: Cx<R>,
    pub e2: Cx<R>,
    pub e3: Cx<R>,
    pub e1_terms_used: usize,
    pub e3_terms_used: usize,
    pub e1_tail_bound: f64,
    pub e3_tail_bound: f64,
    pub total: Cx<R>,
}

impl<R: Real> MomentBreakdown<R> {
    pub fn m2(&self) -> Cx<R> {
        self.m2_terms[0] + self.m2_terms[1] + self.m2_terms[2] + self.m2_terms[3]
    }
}

/// M₂ + E₁ + E₂ + E₃, picking the origin closed forms when both shifts vanish.
pub fn geometric_total<R: Real>(p: &SpectralParams, opts: &GeometricOptions) -> Result<MomentBreakdown<R>> {
    let (m2_terms, e) = match p.pathway() {
        Pathway::Generic => (m2_main::<R>(p)?, e_total::<R>(p, opts.tol, opts.term_cap)?),
        Pathway::Origin => {
            let m = m2_zero::<R>(p.k, p.n, opts.contour_radius, opts.contour_samples)?;
            let z = Cx::<R>::default();
            ([Cx::new(m, R::zero()), z, z, z], e_zero::<R>(p.k, p.n, opts.tol, opts.term_cap)?)
        }
    };
    let mut total = m2_terms[0];
    for t in &m2_terms[1..] {
        total += *t;
    }
    total += e.e1.value;
    total += e.e2;
    total += e.e3.value;
    Ok(MomentBreakdown {
        pathway: p.pathway(),
        m2_terms,
        e1: e.e1.value,
        e2: e.e2,
        e3: e.e3.value,
        e1_terms_used: e.e1.terms_used,
        e3_terms_used: e.e3.terms_used,
        e1_tail_bound: e.e1.tail_bound,
        e3_tail_bound: e.e3.tail_bound,
        total,
    })
}
