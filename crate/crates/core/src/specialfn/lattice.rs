use num_complex::Complex64;

use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::precision::{CExt, CompensatedSum};

/// |Σ_{m∈ℤ} (z+m)^{-k} − (−2πi)^k/Γ(k) Σ_{m≥1} m^{k−1} e(mz)|, both sides
/// truncated where their tails fall below 1e-17 relative.
pub fn lattice_sum_check(z: Complex64, k: u32) -> Result<f64> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::domain("lattice_sum_check", format!("k = {k} must be even and >= 4")));
    }
    if z.im <= 0.0 {
        return Err(Error::domain("lattice_sum_check", "Im z must be positive"));
    }
    let kf = k as f64;
    let ki = k as i32;
    let scale = z.norm().powi(-ki).max(z.im.powi(-ki).min(1.0));
    // 2 (M - |Re z|)^{1-k} / (k-1) < 1e-17 * scale
    let m_cut = (2.0 / ((kf - 1.0) * 1e-17 * scale)).powf(1.0 / (kf - 1.0)) + z.re.abs() + 1.0;
    let m_cut = m_cut.min(5e6) as i64;
    let mut lhs = CompensatedSum::<f64>::new();
    for m in (1..=m_cut).rev() {
        let mf = m as f64;
        lhs.add((z + mf).cpowi(-ki) + (z - mf).cpowi(-ki));
    }
    lhs.add(z.cpowi(-ki));

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut rhs = CompensatedSum::<f64>::new();
    let q = (Complex64::new(0.0, two_pi) * z).exp();
    let mut qm = q;
    let mut m = 1.0f64;
    loop {
        let t = qm * m.powi(ki - 1);
        rhs.add(t);
        if t.norm() < 1e-18 * rhs.value().norm() && m > 2.0 {
            break;
        }
        m += 1.0;
        qm *= q;
    }
    let pre = Complex64::new(0.0, -two_pi).powi(ki) / gamma(Complex64::new(kf, 0.0))?;
    Ok((lhs.value() - pre * rhs.value()).norm())
}
