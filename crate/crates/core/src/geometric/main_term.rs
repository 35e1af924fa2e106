use num_traits::One;

use super::{parity_sign, SpectralParams};
use crate::error::{Error, Result};
use crate::modforms::{int_pow, sigma0, sigma_v};
use crate::precision::{c, cr, CExt, CompensatedSum, Cx, Real};
use crate::specialfn::{digamma, gamma, zeta};

/// C_k = π i^k / (2^{k−3}(k − 1)), the constant in the reproducing kernel of S_k(1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkConstant {
    pub k: u32,
    pub value: f64,
}

impl CkConstant {
    pub fn new(k: u32) -> Self {
        let value = parity_sign(k) as f64 * std::f64::consts::PI / (2f64.powi(k as i32 - 3) * (k as f64 - 1.0));
        CkConstant { k, value }
    }

    /// C_k^{−1} in the working precision.
    pub fn inverse<R: Real>(k: u32) -> R {
        R::from_i64(parity_sign(k) as i64) * R::from_f64(2.0).powi(k as i32 - 3) * R::from_i64(k as i64 - 1) / R::pi()
    }
}

fn two_pi<R: Real>() -> R {
    R::pi() * R::from_f64(2.0)
}

fn two_pi_pow<R: Real>(w: Cx<R>) -> Cx<R> {
    w.scale_by(two_pi::<R>().ln()).cexp()
}

/// The four summands of M₂(n; s₁, s₂).
pub fn m2_main<R: Real>(p: &SpectralParams) -> Result<[Cx<R>; 4]> {
    let (s1, s2) = p.s::<R>();
    let h = cr(R::from_i64(p.half_k()));
    let one = Cx::<R>::one();
    let half = c::<R>(0.5, 0.0);
    let sign = R::from_i64(p.sign() as i64);
    let n = p.n;
    let sig_minus = sigma_v(s1 - s2, n);
    let sig_plus = sigma_v(s1 + s2, n);
    let g1p = gamma(h + s1)?;
    let g2p = gamma(h + s2)?;
    let g1m = gamma(h - s1)?;
    let g2m = gamma(h - s2)?;
    let two = R::from_f64(2.0);

    let t1 = sig_minus * int_pow(n, -s1 - half) * zeta(one + s1 + s2)?;
    let t2 = sig_minus * int_pow(n, s2 - half) * zeta(one - s1 - s2)? * g1m * g2m / (g1p * g2p)
        * two_pi_pow((s1 + s2).scale_by(two));
    let t3 = sig_plus * int_pow(n, -s2 - half) * zeta(one - s1 + s2)? * g1m / g1p * two_pi_pow(s1.scale_by(two)) * sign;
    let t4 = sig_plus * int_pow(n, -s1 - half) * zeta(one + s1 - s2)? * g2m / g2p * two_pi_pow(s2.scale_by(two)) * sign;
    Ok([t1, t2, t3, t4])
}

/// The four terms of the singular orbital integral J_Sing(s, n), as closed forms.
pub fn j_sing_terms<R: Real>(p: &SpectralParams) -> Result<[Cx<R>; 4]> {
    let (s1, s2) = p.s::<R>();
    let k = p.k;
    let h = cr(R::from_i64(p.half_k()));
    let one = Cx::<R>::one();
    let n = p.n;
    let ik = R::from_i64(parity_sign(k) as i64);
    let two_ck_inv = CkConstant::inverse::<R>(k) * R::from_f64(2.0);
    let gk = gamma(cr(R::from_i64(k as i64)))?;
    let nk1 = cr(R::from_i64(n as i64).powi(k as i32 - 1));
    let sig_minus = sigma_v(s1 - s2, n);
    let sig_plus = sigma_v(s1 + s2, n);
    let g1p = gamma(h + s1)?;
    let g2p = gamma(h + s2)?;
    let g1m = gamma(h - s1)?;
    let g2m = gamma(h - s2)?;

    let t1 = g1p * g2p / (two_pi_pow(s1 + s2) * gk) * zeta(one + s1 + s2)? * sig_minus * nk1 / int_pow(n, s1 + h)
        * (two_ck_inv * ik);
    let t2 = two_pi_pow(s1 + s2) * nk1 * sig_minus / int_pow(n, h - s2) * g1m * g2m / gk * zeta(one - s1 - s2)?
        * (two_ck_inv * ik);
    let t3 = g1m * g2p / (two_pi_pow(s2 - s1) * gk) * zeta(one - s1 + s2)? * sig_plus * nk1 / int_pow(n, s2 + h)
        * two_ck_inv;
    let t4 = two_pi_pow(s2 - s1) * nk1 * sig_plus / int_pow(n, s1 + h) * g1p * g2m / gk * zeta(one + s1 - s2)?
        * two_ck_inv;
    Ok([t1, t2, t3, t4])
}

pub fn j_sing<R: Real>(p: &SpectralParams) -> Result<Cx<R>> {
    let t = j_sing_terms::<R>(p)?;
    Ok(t[0] + t[1] + t[2] + t[3])
}

/// 2^{k−1} π (2π)^{−s₁−s₂} n^{(k−1)/2} Γ(s₁ + k/2) Γ(s₂ + k/2) / Γ(k): the factor
/// relating the spectral side of the pre-trace formula to the normalized moment.
pub fn prefactor<R: Real>(p: &SpectralParams) -> Result<Cx<R>> {
    let (s1, s2) = p.s::<R>();
    let k = p.k;
    let h = cr(R::from_i64(p.half_k()));
    let nr = R::from_i64(p.n as i64);
    let npow = nr.powi(p.half_k() as i32 - 1) * nr.sqrt();
    let scale = R::from_f64(2.0).powi(k as i32 - 1) * R::pi() * npow;
    let g = gamma(h + s1)? * gamma(h + s2)? / gamma(cr(R::from_i64(k as i64)))?;
    Ok(g * two_pi_pow(-(s1 + s2)) * scale)
}

/// M₂(n; 0, 0) from the contour integral
/// (1/2πi)∮_{|s|=ε} 4 n^{−1/2} Γ((s+k)/2)² (2π)^{−s} Γ(k/2)^{−2} σ₀(n) n^{−s/2} ζ(1+s) ds/s,
/// sampled with the K-point trapezoidal rule. The value carries the weight
/// parity factor (1 + i^k)/2, so it vanishes for k ≡ 2 (mod 4).
pub fn m2_zero<R: Real>(k: u32, n: u64, eps: f64, samples: usize) -> Result<R> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain("m2_zero", format!("radius {eps} outside (0, 0.5)")));
    }
    if samples < 16 {
        return Err(Error::domain("m2_zero", format!("need at least 16 samples, got {samples}")));
    }
    let coarse = contour_mean::<R>(k, n, eps, samples)?;
    let fine = contour_mean::<R>(k, n, eps, 2 * samples)?;
    let change = (fine - coarse).cabs().to_f64();
    if change > 1e-10 * fine.cabs().to_f64().max(1.0) {
        return Err(Error::convergence(
            "m2_zero",
            format!("doubling {samples} samples changed the contour value by {change:e}"),
        ));
    }
    if fine.im.abs().to_f64() > 1e-10 * fine.re.abs().to_f64().max(1.0) {
        return Err(Error::convergence(
            "m2_zero",
            format!("imaginary part {} does not vanish", fine.im),
        ));
    }
    let parity = R::from_i64((1 + parity_sign(k)) as i64 / 2);
    Ok(fine.re * parity)
}

fn contour_mean<R: Real>(k: u32, n: u64, eps: f64, samples: usize) -> Result<Cx<R>> {
    let h = R::from_i64(k as i64) * R::from_f64(0.5);
    let gh = gamma(cr(h))?.re;
    let nr = R::from_i64(n as i64);
    let lead = R::from_f64(4.0) * R::from_i64(sigma0(n) as i64) / (nr.sqrt() * gh * gh);
    let ln_two_pi = two_pi::<R>().ln();
    let ln_n = nr.ln();
    let mut sum = CompensatedSum::<R>::new();
    let two_pi_k = two_pi::<R>() / R::from_i64(samples as i64);
    let radius = R::from_f64(eps);
    for j in 0..samples {
        let (sn, cs) = (two_pi_k * R::from_i64(j as i64)).sin_cos();
        let s = Cx::new(radius * cs, radius * sn);
        let g = gamma((s + cr(R::from_i64(k as i64))) * R::from_f64(0.5))?;
        let decay = (-s.scale_by(ln_two_pi + ln_n * R::from_f64(0.5))).cexp();
        sum.add(g * g * decay * zeta(s + Cx::one())?);
    }
    Ok(sum.value().scale_by(lead / R::from_i64(samples as i64)))
}

/// Residue evaluation of the contour integral in [`m2_zero`]:
/// (1 + i^k) σ₀(n) n^{−1/2} (2ψ(k/2) − 2 log 2π − log n + 2γ).
pub fn m2_zero_limit<R: Real>(k: u32, n: u64) -> Result<R> {
    let h = cr(R::from_i64(k as i64 / 2));
    let nr = R::from_i64(n as i64);
    let two = R::from_f64(2.0);
    let bracket = two * digamma(h)?.re - two * two_pi::<R>().ln() - nr.ln() + two * R::euler_gamma();
    let parity = R::from_i64(1 + parity_sign(k) as i64);
    Ok(parity * R::from_i64(sigma0(n) as i64) * bracket / nr.sqrt())
}
