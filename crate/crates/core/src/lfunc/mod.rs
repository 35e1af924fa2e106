//! Spectral-side analytics for a level-one eigenform: completed and finite
//! L-values at 1/2 + s, the Petersson norm, and L(1, sym² f).

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modforms::Eigenform;
use crate::precision::{cr, CExt, CompensatedSum, Cx, Real};
use crate::specialfn::quad::gauss_legendre;
use crate::specialfn::{gamma, upper_incomplete_gamma};

/// Terms of the q-expansion used to evaluate f inside the fundamental domain.
const ARC_TERMS: usize = 40;
const ARC_START_ORDER: usize = 8;
pub const ARC_MAX_ORDER: usize = 1024;
pub const ARC_AGREEMENT: f64 = 1e-10;
/// Smallest coefficient table accepted by the norm evaluator.
pub const MIN_NORM_TABLE: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValueResult<R: Real> {
    /// Offset from the centre: the value is taken at 1/2 + s.
    pub s: Cx<R>,
    pub value: Cx<R>,
    pub err_estimate: f64,
    pub terms_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormData<R: Real> {
    pub petersson_sq: R,
    pub sym2_at_1: R,
    pub petersson_method: String,
    pub sym2_method: String,
    pub quadrature_order: usize,
}

/// i^k for even k.
pub fn root_number(k: u32) -> i32 {
    if (k / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn check_strip<R: Real>(f: &Eigenform, s: Cx<R>, func: &'static str) -> Result<()> {
    let bound = f.weight as f64 / 2.0 - 1.0;
    let re = s.re.to_f64();
    if !(re.abs() <= bound) || !s.is_finite_c() {
        return Err(Error::domain(func, format!("|Re s| = {} exceeds k/2 - 1 = {bound}", re.abs())));
    }
    Ok(())
}

/// Γ(a, x) / x^a for real x > 0.
fn scaled_upper_gamma<R: Real>(a: Cx<R>, x: R) -> Result<Cx<R>> {
    let g = upper_incomplete_gamma(a, x)?;
    Ok(g * (-a.scale_by(x.ln())).cexp())
}

/// Λ(1/2 + s) = (2π)^{−(s+k/2)} Γ(s + k/2) L(1/2 + s, f), by the rapidly
/// convergent incomplete-gamma series obtained from the Mellin integral of
/// f(iy) over y ≥ 1.
pub fn completed_l<R: Real>(f: &Eigenform, s: Cx<R>) -> Result<LValueResult<R>> {
    check_strip(f, s, "completed_L")?;
    let half = cr(R::from_i64(f.weight as i64 / 2));
    let sign = R::from_i64(root_number(f.weight) as i64);
    let two_pi = R::pi() * R::from_f64(2.0);
    let term = |n: usize| -> Result<(Cx<R>, R)> {
        let a: R = f.coeff_real(n)?;
        let x = two_pi * R::from_i64(n as i64);
        let p = scaled_upper_gamma(half + s, x)?;
        let m = scaled_upper_gamma(half - s, x)?;
        Ok(((p + m * sign) * a, a.abs() * (p.cabs() + m.cabs())))
    };
    let mut sum = CompensatedSum::<R>::new();
    let mut scale = R::zero();
    let eps = R::eps();
    for n in 1..=f.len() {
        let (t, mag) = term(n)?;
        sum.add(t);
        scale += mag;
        if n >= 2 && mag <= eps * scale && n < f.len() {
            let (_, omitted) = term(n + 1)?;
            let rounding = (scale * eps).to_f64() * (n as f64 + 4.0);
            return Ok(LValueResult {
                s,
                value: sum.value(),
                err_estimate: omitted.to_f64() + rounding,
                terms_used: n,
            });
        }
    }
    Err(Error::range(
        "completed_L",
        format!("coefficient table of length {} too short for convergence", f.len()),
    ))
}

/// L(1/2 + s, f) in the analytic normalization (λ_f(1) = 1, centre at 1/2).
pub fn l_value<R: Real>(f: &Eigenform, s: Cx<R>) -> Result<LValueResult<R>> {
    let lam = completed_l(f, s)?;
    let shifted = s + cr(R::from_i64(f.weight as i64 / 2));
    let two_pi = R::pi() * R::from_f64(2.0);
    let factor = shifted.scale_by(two_pi.ln()).cexp() / gamma(shifted)?;
    Ok(LValueResult {
        s,
        value: lam.value * factor,
        err_estimate: lam.err_estimate * factor.cabs().to_f64(),
        terms_used: lam.terms_used,
    })
}

/// Σ_n a(n)² Γ(k−1, 4πn)/(4πn)^{k−1}: the part of the Petersson integral over
/// y ≥ 1, where orthogonality of the Fourier modes removes the cross terms.
pub fn rectangle_part<R: Real>(f: &Eigenform) -> Result<R> {
    let km1 = cr(R::from_i64(f.weight as i64 - 1));
    let four_pi = R::pi() * R::from_f64(4.0);
    let mut sum = R::zero();
    for n in 1..=f.len() {
        let a: R = f.coeff_real(n)?;
        let t = a * a * scaled_upper_gamma(km1, four_pi * R::from_i64(n as i64))?.re;
        sum += t;
        if t.abs() <= R::eps() * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::range("petersson_norm", "rectangle series did not converge within the table"))
}

/// f(z) from the first terms of its q-expansion.
struct TruncatedForm<R: Real> {
    coeffs: Vec<R>,
}

impl<R: Real> TruncatedForm<R> {
    fn new(f: &Eigenform) -> Result<Self> {
        let m = ARC_TERMS.min(f.len());
        let coeffs = (1..=m).map(|n| f.coeff_real(n)).collect::<Result<Vec<R>>>()?;
        Ok(TruncatedForm { coeffs })
    }

    fn eval(&self, x: R, y: R) -> Cx<R> {
        let two_pi = R::pi() * R::from_f64(2.0);
        let q = Cx::new(-two_pi * y, two_pi * x).cexp();
        let mut acc = Cx::<R>::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * q + cr(*a);
        }
        acc * q
    }
}

/// Tensor Gauss–Legendre approximation of ∫∫ |f|² y^{k−2} dx dy over
/// |x| ≤ 1/2, √(1−x²) ≤ y ≤ 1.
pub fn arc_quadrature<R: Real>(f: &Eigenform, order: usize) -> Result<R> {
    let form = TruncatedForm::<R>::new(f)?;
    let (t, w) = gauss_legendre::<R>(order);
    let half = R::from_f64(0.5);
    let one = R::one();
    let pow = f.weight as i32 - 2;
    let mut total = R::zero();
    for (ti, wi) in t.iter().zip(&w) {
        let x = *ti * half;
        let y0 = (one - x * x).sqrt();
        let len = one - y0;
        let mut inner = R::zero();
        for (uj, wj) in t.iter().zip(&w) {
            let y = y0 + len * (*uj + one) * half;
            let v = form.eval(x, y);
            inner += *wj * (v.re * v.re + v.im * v.im) * y.powi(pow);
        }
        total += *wi * half * inner * len * half;
    }
    Ok(total)
}

fn arc_converged<R: Real>(f: &Eigenform, max_order: usize) -> Result<(R, usize)> {
    let mut order = ARC_START_ORDER;
    let mut prev = arc_quadrature::<R>(f, order)?;
    while order < max_order {
        order *= 2;
        let cur = arc_quadrature::<R>(f, order)?;
        if (cur - prev).abs() <= R::from_f64(ARC_AGREEMENT) * cur.abs() {
            return Ok((cur, order));
        }
        prev = cur;
    }
    Err(Error::convergence(
        "petersson_norm",
        format!("arc quadrature not stable at order {max_order}"),
    ))
}

fn petersson_with_order<R: Real>(f: &Eigenform, max_order: usize) -> Result<(R, usize)> {
    if f.len() < MIN_NORM_TABLE {
        return Err(Error::range(
            "petersson_norm",
            format!("need at least {MIN_NORM_TABLE} coefficients, table has {}", f.len()),
        ));
    }
    let (arc, order) = arc_converged::<R>(f, max_order)?;
    Ok((rectangle_part::<R>(f)? + arc, order))
}

/// ‖f‖² = ∫_{SL₂(ℤ)\H} |f(z)|² y^k dμ.
pub fn petersson_norm<R: Real>(f: &Eigenform) -> Result<R> {
    petersson_with_order(f, ARC_MAX_ORDER).map(|(v, _)| v)
}

/// (4π)^{k−1} · 2π² / Γ(k), the Rankin–Selberg constant linking ‖f‖² and L(1, sym² f).
pub fn rankin_selberg_constant<R: Real>(k: u32) -> Result<R> {
    let four_pi = R::pi() * R::from_f64(4.0);
    let pi = R::pi();
    let g = gamma(cr(R::from_i64(k as i64)))?.re;
    Ok(four_pi.powi(k as i32 - 1) * R::from_f64(2.0) * pi * pi / g)
}

pub fn sym2_l1<R: Real>(f: &Eigenform) -> Result<NormData<R>> {
    sym2_l1_capped(f, ARC_MAX_ORDER)
}

/// [`sym2_l1`] with the Gauss–Legendre doubling stopped at `max_order`.
pub fn sym2_l1_capped<R: Real>(f: &Eigenform, max_order: usize) -> Result<NormData<R>> {
    let (norm, order) = petersson_with_order::<R>(f, max_order)?;
    let sym2 = norm * rankin_selberg_constant::<R>(f.weight)?;
    Ok(NormData {
        petersson_sq: norm,
        sym2_at_1: sym2,
        petersson_method: format!("rectangle:incomplete-gamma+arc:gauss-legendre({order})"),
        sym2_method: "rankin-selberg:petersson-norm".into(),
        quadrature_order: order,
    })
}
