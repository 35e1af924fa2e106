use num_traits::One;

use super::SpectralParams;
use crate::error::{Error, Result};
use crate::modforms::int_pow;
use crate::precision::{cr, CExt, Cx, Real};
use crate::specialfn::{digamma, gamma, hyp2f1, hyp2f1_param_grad, Hyp2F1Args};

/// m-independent factors of the three kernels, computed once per parameter point.
#[derive(Clone, Debug)]
pub struct KernelContext<R: Real> {
    pub k: u32,
    pub n: u64,
    s1: Cx<R>,
    s2: Cx<R>,
    h: Cx<R>,
    psi_pref: Cx<R>,
    big_phi_pref: Cx<R>,
    /// The two sine-denominator prefactors of φ, present when n ≥ 2 and
    /// s₁ − s₂ ∉ ℤ.
    phi_pref: Option<(Cx<R>, Cx<R>)>,
}

fn two_pi<R: Real>() -> R {
    R::pi() * R::from_f64(2.0)
}

fn ratio<R: Real>(n: u64, m: u64) -> R {
    R::from_i64(n as i64) / R::from_i64(m as i64)
}

impl<R: Real> KernelContext<R> {
    pub fn new(p: &SpectralParams) -> Result<Self> {
        let (s1, s2) = p.s::<R>();
        let h = cr(R::from_i64(p.half_k()));
        let one = Cx::<R>::one();
        let half_pi = R::pi() * R::from_f64(0.5);
        let ln_2pi = two_pi::<R>().ln();
        let gk = gamma(cr(R::from_i64(p.k as i64)))?;
        let gpair = gamma(h - s1)? * gamma(h - s2)? / gk;
        let lead = (s1 + s2).scale_by(ln_2pi).cexp() * R::from_f64(2.0) * gpair;
        let psi_pref = lead * (s1 - s2).scale_by(half_pi).ccos();
        let big_phi_pref = lead * (s1 + s2).scale_by(half_pi).ccos();
        let phi_pref = if p.n >= 2 && !integral_difference(p) {
            let top = (s1 + s2 + one).scale_by(ln_2pi).cexp() * R::from_f64(0.5);
            let a = top / (s2 - s1).scale_by(half_pi).csin() * gamma(h - s2)?
                / (gamma(one + s1 - s2)? * gamma(s2 + h)?);
            let b = top / (s1 - s2).scale_by(half_pi).csin() * gamma(h - s1)?
                / (gamma(one - s1 + s2)? * gamma(s1 + h)?);
            Some((a, b))
        } else {
            None
        };
        Ok(KernelContext { k: p.k, n: p.n, s1, s2, h, psi_pref, big_phi_pref, phi_pref })
    }

    fn nm_power(&self, m: u64) -> R {
        ratio::<R>(self.n, m).powi(self.k as i32 / 2)
    }

    /// ψ_k(n, m; s₁, s₂) for m ≥ 1.
    pub fn psi(&self, m: u64) -> Result<Cx<R>> {
        if m == 0 {
            return Err(Error::domain("psi_term", "m must be at least 1"));
        }
        let (s1, s2, h) = (self.s1, self.s2, self.h);
        let f = hyp2f1(Hyp2F1Args::new(h - s2, h - s1, cr(R::from_i64(self.k as i64)), -ratio::<R>(self.n, m)))?;
        Ok(self.psi_pref * int_pow(m, s2) * int_pow(self.n + m, -(s1 + s2)) * self.nm_power(m) * f.value)
    }

    /// Φ_k(n, m; s₁, s₂) for m ≥ n + 1.
    pub fn big_phi(&self, m: u64) -> Result<Cx<R>> {
        if m <= self.n {
            return Err(Error::domain("Phi_term", format!("m = {m} must exceed n = {}", self.n)));
        }
        let (s1, s2, h) = (self.s1, self.s2, self.h);
        let f = hyp2f1(Hyp2F1Args::new(h - s2, h - s1, cr(R::from_i64(self.k as i64)), ratio::<R>(self.n, m)))?;
        Ok(self.big_phi_pref * int_pow(m, s2) * int_pow(m - self.n, -(s1 + s2)) * self.nm_power(m) * f.value)
    }

    /// φ_k(n, m; s₁, s₂) for 1 ≤ m ≤ n − 1.
    pub fn phi(&self, m: u64) -> Result<Cx<R>> {
        if m == 0 || m >= self.n {
            return Err(Error::domain("phi_term", format!("m = {m} outside [1, n - 1] for n = {}", self.n)));
        }
        let (pa, pb) = self
            .phi_pref
            .ok_or_else(|| Error::pole("phi_term", "s1 - s2 is an integer"))?;
        let (s1, s2, h) = (self.s1, self.s2, self.h);
        let one = Cx::<R>::one();
        let x = ratio::<R>(m, self.n);
        let fa = hyp2f1(Hyp2F1Args::new(h - s2, one - h - s2, s1 - s2 + one, x))?;
        let fb = hyp2f1(Hyp2F1Args::new(h - s1, one - h - s1, s2 - s1 + one, x))?;
        let base = int_pow(self.n - m, -(s1 + s2));
        let ta = pa * int_pow(self.n, s2) * fa.value;
        let tb = pb * int_pow(self.n, s1) * int_pow(m, s2 - s1) * fb.value;
        Ok((ta + tb) * base)
    }
}

fn integral_difference(p: &SpectralParams) -> bool {
    let d = p.s1 - p.s2;
    d.im == 0.0 && d.re == d.re.round()
}

pub fn psi_term<R: Real>(p: &SpectralParams, m: u64) -> Result<Cx<R>> {
    KernelContext::<R>::new(p)?.psi(m)
}

pub fn big_phi_term<R: Real>(p: &SpectralParams, m: u64) -> Result<Cx<R>> {
    KernelContext::<R>::new(p)?.big_phi(m)
}

pub fn phi_term<R: Real>(p: &SpectralParams, m: u64) -> Result<Cx<R>> {
    KernelContext::<R>::new(p)?.phi(m)
}

fn zero_prefactor<R: Real>(k: u32) -> Result<R> {
    let gh = gamma(cr(R::from_i64(k as i64 / 2)))?.re;
    Ok(R::from_f64(2.0) * gh * gh / gamma(cr(R::from_i64(k as i64)))?.re)
}

/// ψ_k at s = (0, 0): 2Γ(k/2)²/Γ(k) · (n/m)^{k/2} · F(k/2, k/2; k; −n/m).
pub fn psi_zero<R: Real>(k: u32, n: u64, m: u64) -> Result<R> {
    if m == 0 {
        return Err(Error::domain("psi_zero", "m must be at least 1"));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let f = hyp2f1(Hyp2F1Args::new(h, h, cr(R::from_i64(k as i64)), -ratio::<R>(n, m)))?;
    Ok(zero_prefactor::<R>(k)? * ratio::<R>(n, m).powi(k as i32 / 2) * f.value.re)
}

/// Φ_k at s = (0, 0): 2Γ(k/2)²/Γ(k) · (n/m)^{k/2} · F(k/2, k/2; k; n/m).
pub fn big_phi_zero<R: Real>(k: u32, n: u64, m: u64) -> Result<R> {
    if m <= n {
        return Err(Error::domain("Phi_zero", format!("m = {m} must exceed n = {n}")));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let f = hyp2f1(Hyp2F1Args::new(h, h, cr(R::from_i64(k as i64)), ratio::<R>(n, m)))?;
    Ok(zero_prefactor::<R>(k)? * ratio::<R>(n, m).powi(k as i32 / 2) * f.value.re)
}

/// The s → 0 limit of the φ kernel:
/// (−log x − 2ψ(k/2) + 2ψ(1)) F(k/2, 1−k/2; 1; x) − (∂_α + ∂_β + 2∂_γ) F at the same point.
pub fn phi0<R: Real>(k: u32, x: R) -> Result<R> {
    if !(x > R::zero() && x.to_f64() <= crate::specialfn::DIRECT_LIMIT) {
        return Err(Error::domain("phi0", format!("x = {x} outside (0, 0.95]")));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let one = Cx::<R>::one();
    let args = Hyp2F1Args::new(h, one - h, one, x);
    let f = hyp2f1(args)?.value.re;
    let (da, db, dc) = hyp2f1_param_grad(args)?;
    let two = R::from_f64(2.0);
    let coeff = -x.ln() - two * digamma(h)?.re - two * R::euler_gamma();
    Ok(coeff * f - (da.re + db.re + two * dc.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::DoubleDouble;
    use num_complex::Complex64;

    fn params(k: u32, n: u64, s1: (f64, f64), s2: (f64, f64)) -> SpectralParams {
        SpectralParams::new(k, n, Complex64::new(s1.0, s1.1), Complex64::new(s2.0, s2.1)).unwrap()
    }

    #[test]
    fn terminating_polynomial_at_half() {
        // F(6, -5; 1; 1/2) = Σ_{j≤5} (6)_j (-5)_j / (j!)² 2^{-j}
        let mut t = 1.0f64;
        let mut s = 1.0;
        for j in 0..5 {
            let jf = j as f64;
            t *= (6.0 + jf) * (-5.0 + jf) / ((1.0 + jf) * (1.0 + jf)) * 0.5;
            s += t;
        }
        let f = hyp2f1(Hyp2F1Args::real(6.0, -5.0, 1.0, 0.5)).unwrap().value.re;
        assert!((f - s).abs() < 1e-14 * s.abs().max(1.0));
    }

    #[test]
    fn psi_at_origin_reduces() {
        let p = SpectralParams { k: 12, n: 3, s1: Complex64::new(0.0, 0.0), s2: Complex64::new(0.0, 0.0) };
        for m in [1, 2, 7] {
            let a = psi_term::<f64>(&p, m).unwrap();
            let b = psi_zero::<f64>(12, 3, m).unwrap();
            assert!((a.re - b).abs() < 1e-14 * b.abs() && a.im.abs() < 1e-16);
        }
    }

    #[test]
    fn big_phi_domain() {
        let p = params(12, 3, (0.3, 0.0), (0.1, 0.0));
        assert!(matches!(big_phi_term::<f64>(&p, 3), Err(Error::Domain { .. })));
        assert!(big_phi_term::<f64>(&p, 4).is_ok());
    }

    #[test]
    fn phi_domain_and_poles() {
        let p = params(12, 3, (0.3, 0.0), (0.1, 0.0));
        assert!(matches!(phi_term::<f64>(&p, 3), Err(Error::Domain { .. })));
        let q = SpectralParams { k: 12, n: 3, s1: Complex64::new(0.5, 0.0), s2: Complex64::new(-0.5, 0.0) };
        assert!(matches!(phi_term::<f64>(&q, 1), Err(Error::Pole { .. })));
    }

    #[test]
    fn phi0_precision_stable() {
        let a = phi0::<f64>(12, 0.5).unwrap();
        let b = phi0::<DoubleDouble>(12, DoubleDouble::new(0.5)).unwrap().to_f64();
        assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        assert!(matches!(phi0::<f64>(12, 0.97), Err(Error::Domain { .. })));
    }
}
