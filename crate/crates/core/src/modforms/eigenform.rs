use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use super::qexp::{delta_qexp, eisenstein_qexp, QExpansion};
use crate::error::{Error, Result};
use crate::precision::{DoubleDouble, Real};

/// Weights k ≥ 12 with dim S_k(SL₂(ℤ)) = 1.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

pub const DEFAULT_COEFFICIENTS: usize = 2000;

pub fn check_weight(k: u32) -> Result<()> {
    if SUPPORTED_WEIGHTS.contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedWeight(k))
    }
}

/// The normalized Hecke eigenform spanning S_k(1), as an exact q-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenform {
    pub weight: u32,
    pub qexp: Arc<QExpansion>,
}

/// Round a big integer to the working precision (two doubles for double-double).
pub fn bigint_to_real<R: Real>(n: &BigInt) -> R {
    let hi = n.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return R::from_f64(hi);
    }
    let rest = n - BigInt::from_f64_exact(hi);
    let lo = rest.to_f64().unwrap_or(0.0);
    R::from_dd(DoubleDouble::normalized(hi, lo))
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> BigInt;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x).unwrap_or_default()
    }
}

impl Eigenform {
    /// Wrap an existing expansion after checking that it is a normalized cusp
    /// form of a supported weight.
    pub fn from_qexp(qexp: QExpansion) -> Result<Eigenform> {
        check_weight(qexp.weight)?;
        if !qexp.constant_term().is_zero() || qexp.coeff(1) != Some(&BigInt::one()) {
            return Err(Error::CacheFormat("expansion is not a normalized cusp form".into()));
        }
        Ok(Eigenform {
            weight: qexp.weight,
            qexp: Arc::new(qexp),
        })
    }

    pub fn len(&self) -> usize {
        self.qexp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qexp.is_empty()
    }

    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        if n == 0 {
            return Err(Error::range("eigenform", "index 0"));
        }
        self.qexp
            .coeff(n)
            .ok_or_else(|| Error::range("eigenform", format!("n = {n} beyond table of {}", self.len())))
    }

    /// a(n) in the working precision.
    pub fn coeff_real<R: Real>(&self, n: usize) -> Result<R> {
        Ok(bigint_to_real(self.coeff(n)?))
    }

    /// λ_f(n) = a(n) / n^{(k−1)/2}.
    pub fn lambda<R: Real>(&self, n: usize) -> Result<R> {
        let a: R = self.coeff_real(n)?;
        let nr = R::from_i64(n as i64);
        let norm = nr.powi(self.weight as i32 / 2 - 1) * nr.sqrt();
        Ok(a / norm)
    }

    /// Content hash of the coefficient table, used as a provenance id.
    pub fn cache_id(&self) -> String {
        let digest = Sha256::digest(self.qexp.to_cache_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// The eigenform of weight k as Δ times a monomial in E₄, E₆.
pub fn eigenform(k: u32, n: usize) -> Result<Eigenform> {
    check_weight(k)?;
    let delta = delta_qexp(n)?;
    let q = match k {
        12 => delta,
        _ => {
            let e4 = eisenstein_qexp(4, n)?;
            let e6 = eisenstein_qexp(6, n)?;
            let factor = match k {
                16 => e4,
                18 => e6,
                20 => e4.mul(&e4),
                22 => e4.mul(&e6),
                26 => e4.mul(&e4).mul(&e6),
                _ => unreachable!("weight checked above"),
            };
            delta.mul(&factor)
        }
    };
    Eigenform::from_qexp(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_weights() {
        for k in [10, 13, 14, 24, 28] {
            assert!(matches!(eigenform(k, 10), Err(Error::UnsupportedWeight(_))));
        }
    }

    #[test]
    fn weight_twelve_is_delta() {
        let f = eigenform(12, 40).unwrap();
        assert_eq!(*f.qexp, delta_qexp(40).unwrap());
    }

    #[test]
    fn weight_sixteen_small_coefficients() {
        let f = eigenform(16, 10).unwrap();
        assert_eq!(f.coeff(2).unwrap(), &BigInt::from(216));
        assert_eq!(f.coeff(6).unwrap(), &(f.coeff(2).unwrap() * f.coeff(3).unwrap()));
    }

    #[test]
    fn lambda_normalization() {
        let f = eigenform(12, 10).unwrap();
        assert_eq!(f.lambda::<f64>(1).unwrap(), 1.0);
        let l2 = f.lambda::<f64>(2).unwrap();
        assert!((l2 - (-24.0 / 2f64.powf(5.5))).abs() < 1e-15);
        assert!(matches!(f.lambda::<f64>(11), Err(Error::Range { .. })));
    }

    #[test]
    fn double_double_conversion_keeps_low_bits() {
        let n: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let x: DoubleDouble = bigint_to_real(&n);
        let back = BigInt::from_f64_exact(x.hi) + BigInt::from_f64_exact(x.lo);
        let err = (&n - back).to_f64().unwrap().abs();
        assert!(err <= 2f64.powi(2));
    }
}
