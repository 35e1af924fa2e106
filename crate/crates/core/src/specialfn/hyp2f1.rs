//! Gauss hypergeometric function ₂F₁(a, b; c; x) for real x < 1.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gamma::{beta, is_nonpositive_integer};
use super::quad::tanh_sinh_unit;
use crate::error::{Error, Result};
use crate::precision::{cr, CExt, CompensatedSum, Cx, Real};

pub const DEFAULT_TERM_CAP: usize = 200_000;
/// Largest |x| summed directly.
pub const DIRECT_LIMIT: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyp2F1Args<R: Real> {
    pub a: Cx<R>,
    pub b: Cx<R>,
    pub c: Cx<R>,
    pub x: R,
}

impl<R: Real> Hyp2F1Args<R> {
    pub fn new(a: Cx<R>, b: Cx<R>, c: Cx<R>, x: R) -> Self {
        Self { a, b, c, x }
    }
}

impl Hyp2F1Args<f64> {
    pub fn real(a: f64, b: f64, c: f64, x: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0), x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult<R: Real> {
    pub value: Cx<R>,
    pub err_estimate: f64,
    pub terms_used: usize,
}

fn terminating_degree<R: Real>(p: Cx<R>) -> Option<usize> {
    if is_nonpositive_integer(p) {
        Some((-p.re).to_f64().round() as usize)
    } else {
        None
    }
}

fn check<R: Real>(args: &Hyp2F1Args<R>) -> Result<()> {
    if is_nonpositive_integer(args.c) {
        let deg = [args.a, args.b].iter().filter_map(|&p| terminating_degree(p)).min();
        let cdeg = terminating_degree(args.c).unwrap_or(0);
        if deg.is_none_or(|d| d > cdeg) {
            return Err(Error::pole("hyp2f1", format!("c = {}", args.c.to_c64())));
        }
    }
    if !(args.x < R::one()) {
        return Err(Error::domain("hyp2f1", format!("x = {} must be < 1", args.x)));
    }
    Ok(())
}

/// Plain Gauss series with compensated accumulation.
fn gauss_series<R: Real>(a: Cx<R>, b: Cx<R>, c: Cx<R>, x: R, cap: usize) -> Result<EvalResult<R>> {
    let degree = [a, b].iter().filter_map(|&p| terminating_degree(p)).min();
    let eps = R::eps().to_f64();
    let xa = x.abs().to_f64();
    let mut sum = CompensatedSum::new();
    let mut t = Cx::<R>::one();
    let mut abs_sum = 0.0;
    for j in 0..cap {
        sum.add(t);
        abs_sum += t.cabs().to_f64();
        if degree == Some(j) {
            return Ok(EvalResult {
                value: sum.value(),
                err_estimate: eps * abs_sum,
                terms_used: j + 1,
            });
        }
        let jr = R::from_i64(j as i64);
        let ratio = (a + cr(jr)) * (b + cr(jr)) / ((c + cr(jr)) * cr(jr + R::one()));
        let next = ratio * cr(x);
        let r = ratio.cabs().to_f64() * xa;
        let tn = next * t;
        let tn_abs = tn.cabs().to_f64();
        let s_abs = sum.value().cabs().to_f64();
        if r < 1.0 && degree.is_none() {
            let rr = r.max(xa);
            let tail = tn_abs * (10f64).max(1.0 / (1.0 - rr));
            if tail <= 0.5 * eps * s_abs || tn_abs == 0.0 {
                sum.add(tn);
                return Ok(EvalResult {
                    value: sum.value(),
                    err_estimate: tail + eps * abs_sum,
                    terms_used: j + 2,
                });
            }
        }
        t = tn;
    }
    Err(Error::convergence("hyp2f1", format!("term cap {cap} reached")))
}

/// ₂F₁(a, b; c; x) with the default term cap.
pub fn hyp2f1<R: Real>(args: Hyp2F1Args<R>) -> Result<EvalResult<R>> {
    hyp2f1_with_cap(args, DEFAULT_TERM_CAP)
}

pub fn hyp2f1_with_cap<R: Real>(args: Hyp2F1Args<R>, cap: usize) -> Result<EvalResult<R>> {
    check(&args)?;
    let Hyp2F1Args { a, b, c, x } = args;
    if x == R::zero() {
        return Ok(EvalResult {
            value: Cx::one(),
            err_estimate: 0.0,
            terms_used: 1,
        });
    }
    if terminating_degree(a).is_some() || terminating_degree(b).is_some() {
        return gauss_series(a, b, c, x, cap);
    }
    if x > R::zero() {
        if x.to_f64() > DIRECT_LIMIT {
            return Err(Error::domain(
                "hyp2f1",
                format!("x = {x} exceeds the direct-summation limit {DIRECT_LIMIT}"),
            ));
        }
        return gauss_series(a, b, c, x, cap);
    }
    // Pfaff: F(a,b;c;x) = (1-x)^{-p} F(p, c-q; c; x/(x-1)) with {p, q} = {a, b};
    // the assignment that terminates is preferred.
    let w = x / (x - R::one());
    let ln1mx = (R::one() - x).ln();
    let (p, q) = if terminating_degree(c - b).is_none() && terminating_degree(c - a).is_some() {
        (b, a)
    } else {
        (a, b)
    };
    let inner = gauss_series(p, c - q, c, w, cap)?;
    let pre = (-p.scale_by(ln1mx)).cexp();
    let scale = pre.cabs().to_f64();
    Ok(EvalResult {
        value: inner.value * pre,
        err_estimate: inner.err_estimate * scale,
        terms_used: inner.terms_used,
    })
}

/// (∂F/∂a, ∂F/∂b, ∂F/∂c), by the term-wise differentiated Gauss series.
///
/// The derivative of each Pochhammer product is carried alongside the term
/// itself by the product rule, which handles a vanishing factor (b a
/// non-positive integer) without special-casing.
pub fn hyp2f1_param_grad<R: Real>(args: Hyp2F1Args<R>) -> Result<(Cx<R>, Cx<R>, Cx<R>)> {
    check(&args)?;
    let Hyp2F1Args { a, b, c, x } = args;
    if x.abs().to_f64() > DIRECT_LIMIT {
        return Err(Error::domain(
            "hyp2f1_param_grad",
            format!("|x| = {x} exceeds {DIRECT_LIMIT}"),
        ));
    }
    let zero = Cx::<R>::zero();
    if x == R::zero() {
        return Ok((zero, zero, zero));
    }
    let eps = R::eps().to_f64();
    let xa = x.abs().to_f64();
    let xc = cr(x);
    let (mut t, mut ta, mut tb, mut tc) = (Cx::<R>::one(), zero, zero, zero);
    let (mut s, mut sa, mut sb, mut sc) = (
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    );
    s.add(t);
    for j in 0..DEFAULT_TERM_CAP {
        let jr = cr(R::from_i64(j as i64));
        let denom = (c + jr) * (jr + Cx::one());
        let fa = (a + jr) * xc / denom;
        let fb = (b + jr) * xc / denom;
        let rho = fa * (b + jr);
        let nta = rho * ta + t * fb;
        let ntb = rho * tb + t * fa;
        let ntc = rho * (tc - t / (c + jr));
        let nt = rho * t;
        t = nt;
        ta = nta;
        tb = ntb;
        tc = ntc;
        s.add(t);
        sa.add(ta);
        sb.add(tb);
        sc.add(tc);
        let r = rho.cabs().to_f64();
        if r < 1.0 {
            let rr = r.max(xa);
            let biggest = [t, ta, tb, tc].iter().map(|z| z.cabs().to_f64()).fold(0.0, f64::max);
            let scale = [s.value(), sa.value(), sb.value(), sc.value()]
                .iter()
                .map(|z| z.cabs().to_f64())
                .fold(0.0, f64::max);
            let tail = 10.0 * biggest / (1.0 - rr);
            if tail <= eps * scale && j > 0 {
                return Ok((sa.value(), sb.value(), sc.value()));
            }
        }
    }
    Err(Error::convergence(
        "hyp2f1_param_grad",
        format!("term cap {DEFAULT_TERM_CAP} reached"),
    ))
}

/// Independent oracle: the Euler integral
/// ∫₀¹ t^{b-1}(1-t)^{c-b-1}(1-xt)^{-a} dt / B(b, c-b) by tanh-sinh quadrature.
pub fn hyp2f1_euler_oracle(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    if !(b.re > 0.0 && c.re > b.re) {
        return Err(Error::domain("hyp2f1_euler_oracle", "requires Re c > Re b > 0"));
    }
    if !(x < 1.0) {
        return Err(Error::domain("hyp2f1_euler_oracle", format!("x = {x} must be < 1")));
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let norm = beta(b, c - b)?;
    let cb = c - b;
    let integral = tanh_sinh_unit(
        |ln_t, ln_u, t| (b - 1.0) * ln_t + (cb - 1.0) * ln_u - a * (-x * t).ln_1p(),
        1e-13,
    )?;
    Ok(integral / norm)
}
