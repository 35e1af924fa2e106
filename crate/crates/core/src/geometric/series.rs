use rayon::prelude::*;

use super::kernels::{big_phi_zero, phi0, psi_zero, KernelContext};
use super::{parity_sign, SpectralParams};
use crate::error::{Error, Result};
use crate::modforms::{sigma0, sigma_v};
use crate::precision::{cr, CExt, CompensatedSum, Cx, DoubleDouble, Real};

pub const DEFAULT_TERM_CAP: usize = 100_000;
const CHUNK: usize = 256;
const WINDOW: usize = 64;
/// Safety margin subtracted from the decay exponent in the tail majorant.
const DECAY_MARGIN: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum<R: Real> {
    pub value: Cx<R>,
    pub terms_used: usize,
    /// Bound on the modulus of the omitted tail.
    pub tail_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorTerms<R: Real> {
    pub e1: SeriesSum<R>,
    pub e2: Cx<R>,
    pub e3: SeriesSum<R>,
}

/// Σ_{m ≥ start} term(m), truncated once the majorant
/// C·M^{1−β}/(β − 1), with C the largest |t_m| m^β over the last window of
/// terms, falls below `tol`. Chunks are evaluated in parallel and reduced in
/// index order, so the result does not depend on the thread count.
pub fn tail_series<R, F>(start: u64, beta: f64, tol: f64, cap: usize, func: &'static str, term: F) -> Result<SeriesSum<R>>
where
    R: Real,
    F: Fn(u64) -> Result<Cx<R>> + Sync,
{
    if !(beta > 1.0) {
        return Err(Error::convergence(
            func,
            format!("decay exponent {beta:.3} does not certify absolute convergence"),
        ));
    }
    let mut sum = CompensatedSum::<R>::new();
    let mut magnitudes: Vec<f64> = Vec::new();
    let mut next = start;
    while magnitudes.len() < cap {
        let len = CHUNK.min(cap - magnitudes.len());
        let chunk: Vec<Cx<R>> = (next..next + len as u64).into_par_iter().map(&term).collect::<Result<_>>()?;
        for (i, t) in chunk.iter().enumerate() {
            sum.add(*t);
            let m = (next + i as u64) as f64;
            magnitudes.push(t.cabs().to_f64() * m.powf(beta));
        }
        next += len as u64;
        let last = (next - 1) as f64;
        let c = magnitudes[magnitudes.len().saturating_sub(WINDOW)..].iter().cloned().fold(0.0, f64::max);
        let tail = c * last.powf(1.0 - beta) / (beta - 1.0);
        if tail < tol {
            return Ok(SeriesSum {
                value: sum.value(),
                terms_used: magnitudes.len(),
                tail_bound: tail,
            });
        }
    }
    Err(Error::convergence(func, format!("term cap {cap} reached before tolerance {tol:e}")))
}

fn from_dd<R: Real>(z: Cx<DoubleDouble>) -> Cx<R> {
    Cx::new(R::from_dd(z.re), R::from_dd(z.im))
}

// The φ hypergeometrics have b close to 1 − k/2 and cancel badly in the
// direct series, so the finite E₂ sum is always taken in double-double.
fn e2_sum(p: &SpectralParams) -> Result<Cx<DoubleDouble>> {
    let ctx = KernelContext::<DoubleDouble>::new(p)?;
    let (s1, s2) = p.s::<DoubleDouble>();
    let mut mid = CompensatedSum::<DoubleDouble>::new();
    for m in 1..p.n {
        mid.add(sigma_v(s1 + s2, p.n - m) * sigma_v(s1 - s2, m) * ctx.phi(m)?);
    }
    Ok(mid.value())
}

fn e2_zero_sum(k: u32, n: u64) -> Result<DoubleDouble> {
    let nr = DoubleDouble::from_i64(n as i64);
    let mut mid = DoubleDouble::default();
    for m in 1..n {
        let d = DoubleDouble::from_i64((sigma0(n - m) * sigma0(m)) as i64);
        mid += d * phi0::<DoubleDouble>(k, DoubleDouble::from_i64(m as i64) / nr)?;
    }
    Ok(mid)
}

fn series_beta(p: &SpectralParams) -> f64 {
    p.decay_exponent() - DECAY_MARGIN
}

/// (E₁, E₂, E₃) for a generic parameter point. `tol` bounds the omitted tail of
/// E₁ and E₃ after the n^{−1/2} normalization.
pub fn e_total<R: Real>(p: &SpectralParams, tol: f64, cap: usize) -> Result<ErrorTerms<R>> {
    let ctx = KernelContext::<R>::new(p)?;
    let (s1, s2) = p.s::<R>();
    let n = p.n;
    let nr = R::from_i64(n as i64);
    let scale = R::one() / nr.sqrt();
    let sign = R::from_i64(parity_sign(p.k) as i64);
    let beta = series_beta(p);
    let series_tol = tol * nr.sqrt().to_f64();

    let e1 = tail_series(1, beta, series_tol, cap, "e_total", |m| {
        Ok(sigma_v(s1 - s2, m) * sigma_v(s1 + s2, n + m) * ctx.psi(m)?)
    })?;
    let e3 = tail_series(n + 1, beta, series_tol, cap, "e_total", |m| {
        Ok(sigma_v(s1 - s2, m) * sigma_v(s1 + s2, m - n) * ctx.big_phi(m)?)
    })?;
    let mid: Cx<R> = from_dd(e2_sum(p)?);
    let scale_sum = |s: SeriesSum<R>, f: R| SeriesSum {
        value: s.value.scale_by(f),
        terms_used: s.terms_used,
        tail_bound: s.tail_bound * f.abs().to_f64(),
    };
    Ok(ErrorTerms {
        e1: scale_sum(e1, scale * sign),
        e2: mid.scale_by(scale * sign),
        e3: scale_sum(e3, scale),
    })
}

/// (E₁, E₂, E₃) at s = (0, 0), using the limiting kernels.
pub fn e_zero<R: Real>(k: u32, n: u64, tol: f64, cap: usize) -> Result<ErrorTerms<R>> {
    let nr = R::from_i64(n as i64);
    let scale = R::one() / nr.sqrt();
    let sign = R::from_i64(parity_sign(k) as i64);
    let beta = k as f64 / 2.0 - DECAY_MARGIN;
    let series_tol = tol * nr.sqrt().to_f64();
    let d = |m: u64| R::from_i64(sigma0(m) as i64);

    let e1 = tail_series(1, beta, series_tol, cap, "e_zero", |m| {
        Ok(cr(d(m) * d(n + m) * psi_zero::<R>(k, n, m)?))
    })?;
    let e3 = tail_series(n + 1, beta, series_tol, cap, "e_zero", |m| {
        Ok(cr(d(m) * d(m - n) * big_phi_zero::<R>(k, n, m)?))
    })?;
    let mid = R::from_dd(e2_zero_sum(k, n)?);
    let two = R::from_f64(2.0);
    let scale_sum = |s: SeriesSum<R>, f: R| SeriesSum {
        value: s.value.scale_by(f),
        terms_used: s.terms_used,
        tail_bound: s.tail_bound * f.abs().to_f64(),
    };
    Ok(ErrorTerms {
        e1: scale_sum(e1, scale * sign),
        e2: cr(mid * two * scale * sign),
        e3: scale_sum(e3, scale),
    })
}
