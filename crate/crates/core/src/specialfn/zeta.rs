//! Riemann zeta via the accelerated alternating (eta) series.

use num_traits::{One, Zero};

use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::precision::{cr, CExt, Cx, Real};

fn term_count<R: Real>(t: f64) -> usize {
    let digits = R::DIGITS as f64 * std::f64::consts::LN_10;
    let growth = std::f64::consts::FRAC_PI_2 * t.abs() + (1.0 + 2.0 * t.abs()).ln() + 2.0;
    let rate = (3.0 + 8f64.sqrt()).ln();
    ((digits + growth) / rate).ceil() as usize + 2
}

fn eta_accelerated<R: Real>(s: Cx<R>) -> Cx<R> {
    let n = term_count::<R>(s.im.to_f64());
    // partial sums d_k of the Chebyshev-derived weights
    let mut d = Vec::with_capacity(n + 1);
    let nn = R::from_i64(n as i64);
    let mut term = R::one();
    let mut acc = term;
    d.push(acc);
    for i in 0..n {
        let fi = R::from_i64(i as i64);
        let num = (nn + fi) * (nn - fi) * R::from_f64(4.0);
        let den = R::from_i64(2 * i as i64 + 1) * R::from_i64(2 * i as i64 + 2);
        term = term * num / den;
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = Cx::<R>::zero();
    for (k, &dk) in d.iter().take(n).enumerate() {
        let w = (dk - dn) / dn;
        let p = (-(s.scale_by(R::from_i64(k as i64 + 1).ln()))).cexp();
        let t = p.scale_by(w);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    -sum
}

/// ζ(s) for s ≠ 1.
pub fn zeta<R: Real>(s: Cx<R>) -> Result<Cx<R>> {
    if s.im == R::zero() && s.re == R::one() {
        return Err(Error::pole("zeta", "s = 1"));
    }
    if s.is_zero() {
        return Ok(cr(R::from_f64(-0.5)));
    }
    let value = if s.re >= R::zero() {
        let eta = eta_accelerated(s);
        // 1 - 2^{1-s}, written through expm1 so it stays accurate near s = 1
        let denom = -((Cx::<R>::one() - s).scale_by(R::ln2())).cexpm1();
        eta / denom
    } else {
        let pi = R::pi();
        let one_minus = Cx::<R>::one() - s;
        let two_s = s.scale_by(R::ln2()).cexp();
        let pi_s = (s - Cx::<R>::one()).scale_by(pi.ln()).cexp();
        let sin = s.scale_by(pi / R::from_f64(2.0)).csin();
        two_s * pi_s * sin * gamma(one_minus)? * zeta(one_minus)?
    };
    if !value.is_finite_c() {
        return Err(Error::convergence("zeta", format!("non-finite value at {}", s.to_c64())));
    }
    Ok(value)
}
