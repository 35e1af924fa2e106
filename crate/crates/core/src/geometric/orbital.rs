//! Single regular orbital integrals: the Bruhat-cell orbit representatives,
//! their closed forms, and a direct two-dimensional quadrature oracle.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::main_term::{prefactor, CkConstant};
use super::{parity_sign, SpectralParams};
use crate::error::{Error, Result};
use crate::modforms::divisors;
use crate::precision::{cr, CExt, Cx, Real};
use crate::specialfn::{beta, gamma, hyp2f1, Hyp2F1Args};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    /// ad = n + m, bc = m with m ≥ 1.
    Omega1,
    /// ad = n − m, bc = m with 1 ≤ m ≤ n − 1.
    Omega2,
    /// ad = m − n, bc = m with m ≥ n + 1.
    Omega3,
}

/// An orbit representative stored by the (positive) magnitudes of its entries;
/// [`MatrixOrbit::signed`] restores the signs dictated by the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOrbit {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub m: i64,
    pub n: i64,
    pub cell: Cell,
}

impl MatrixOrbit {
    pub fn new(cell: Cell, n: i64, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if n < 1 || a < 1 || b < 1 || c < 1 || d < 1 {
            return Err(Error::domain("MatrixOrbit", "entries and n must be positive"));
        }
        let m = b * c;
        let ok = match cell {
            Cell::Omega1 => a * d == n + m,
            Cell::Omega2 => m < n && a * d == n - m,
            Cell::Omega3 => m > n && a * d == m - n,
        };
        if !ok {
            return Err(Error::domain(
                "MatrixOrbit",
                format!("({a}, {b}, {c}, {d}) is not in {cell:?} for n = {n}"),
            ));
        }
        Ok(MatrixOrbit { a, b, c, d, m, n, cell })
    }

    /// Entries (a, b, c, d) of the determinant-n matrix entering R_γ.
    pub fn signed(&self) -> (i64, i64, i64, i64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match self.cell {
            Cell::Omega1 => (a, b, c, d),
            Cell::Omega2 => (a, b, -c, d),
            Cell::Omega3 => (a, b, -c, -d),
        }
    }

    pub fn determinant(&self) -> i64 {
        let (a, b, c, d) = self.signed();
        a * d - b * c
    }
}

/// All representatives with Bruhat parameter m in the given cell.
pub fn orbits(cell: Cell, n: u64, m: u64) -> Vec<MatrixOrbit> {
    let ad = match cell {
        Cell::Omega1 => n + m,
        Cell::Omega2 if m < n => n - m,
        Cell::Omega3 if m > n => m - n,
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for &b in &divisors(m) {
        for &a in &divisors(ad) {
            let o = MatrixOrbit::new(cell, n as i64, a as i64, b as i64, (m / b) as i64, (ad / a) as i64);
            out.push(o.expect("factorization is consistent by construction"));
        }
    }
    out
}

fn log_integrand(o: &MatrixOrbit, k: u32, s1: Complex64, s2: Complex64, u: f64, v: f64) -> Complex64 {
    let (a, b, c, d) = o.signed();
    let h = k as f64 / 2.0;
    let i = Complex64::new(0.0, 1.0);
    let (y1, y2) = (u.exp(), v.exp());
    let r = Complex64::new(-(c as f64) * y1 * y2 + b as f64, 0.0) + i * (d as f64 * y2 + a as f64 * y1);
    (h - s1) * u + (s2 + h) * v - r.ln() * k as f64
}

/// ∫∫ y₁^{−s₁+k/2} y₂^{s₂+k/2} R_γ(iy₁, iy₂)^{−k} dy₁dy₂/(y₁y₂) over (0, ∞)², with
/// R_γ(iy₁, iy₂) = −c y₁y₂ + i d y₂ + i a y₁ + b for the signed entries of γ.
///
/// After y = e^u the integrand is analytic and exponentially decaying on ℝ², so
/// the trapezoidal rule converges geometrically; the step is halved until two
/// successive values agree.
pub fn orbital_quadrature_oracle(o: &MatrixOrbit, k: u32, s1: Complex64, s2: Complex64) -> Result<Complex64> {
    let beta = k as f64 / 2.0 - s1.re.abs().max(s2.re.abs());
    if !(beta > 0.5) {
        return Err(Error::domain("orbital_quadrature_oracle", "integral is not absolutely convergent"));
    }
    let span = 40.0 / beta + 3.0;
    let mut h = 0.25;
    let mut prev: Option<Complex64> = None;
    for _ in 0..6 {
        let nodes = (span / h).ceil() as i64;
        let total: Complex64 = (-nodes..=nodes)
            .into_par_iter()
            .map(|iu| {
                let u = iu as f64 * h;
                let mut row = Complex64::new(0.0, 0.0);
                for iv in -nodes..=nodes {
                    row += log_integrand(o, k, s1, s2, u, iv as f64 * h).exp();
                }
                row
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum();
        let value = total * h * h;
        if let Some(p) = prev {
            if (value - p).norm() <= 1e-11 * value.norm().max(1e-300) {
                return Ok(value);
            }
        }
        prev = Some(value);
        h *= 0.5;
    }
    Err(Error::convergence("orbital_quadrature_oracle", "trapezoidal refinement did not settle"))
}

fn ipow<R: Real>(x: i64, w: Cx<R>) -> Cx<R> {
    w.scale_by(R::from_i64(x).ln()).cexp()
}

/// Closed form of the integral for an Ω₁ representative:
/// e^{iπ(s₁−s₂+k)/2} b^{s₂} c^{s₁} m^{−k/2} d^{−s₁−s₂} B(s₂+k/2, k/2−s₂) B(k/2−s₁, s₁+k/2) F(k/2−s₂, k/2−s₁; k; −n/m).
pub fn w_closed_form<R: Real>(o: &MatrixOrbit, k: u32, s1: Cx<R>, s2: Cx<R>) -> Result<Cx<R>> {
    if o.cell != Cell::Omega1 {
        return Err(Error::domain("w_closed_form", "requires an Omega1 representative"));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let half_pi = R::pi() * R::from_f64(0.5);
    let phase = Cx::new(R::zero(), R::one()) * (s1 - s2 + cr(R::from_i64(k as i64))).scale_by(half_pi);
    let x = -R::from_i64(o.n) / R::from_i64(o.m);
    let f = hyp2f1(Hyp2F1Args::new(h - s2, h - s1, cr(R::from_i64(k as i64)), x))?.value;
    Ok(phase.cexp() * ipow(o.b, s2) * ipow(o.c, s1) / (ipow(o.m, h) * ipow(o.d, s1 + s2))
        * beta(s2 + h, h - s2)?
        * beta(h - s1, s1 + h)?
        * f)
}

/// Closed form for an Ω₃ representative:
/// c^{−s₂−k/2} b^{s₂−k/2} (−i d/c)^{−s₁−s₂} B(k/2−s₂, s₂+k/2) B(k/2−s₁, s₁+k/2) F(k/2−s₂, k/2−s₁; k; n/m).
pub fn v_closed_form<R: Real>(o: &MatrixOrbit, k: u32, s1: Cx<R>, s2: Cx<R>) -> Result<Cx<R>> {
    if o.cell != Cell::Omega3 {
        return Err(Error::domain("v_closed_form", "requires an Omega3 representative"));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let half_pi = R::pi() * R::from_f64(0.5);
    let w = s1 + s2;
    // (−i)^{−w} = e^{iπw/2} on the principal branch
    let phase = (Cx::new(R::zero(), R::one()) * w.scale_by(half_pi)).cexp();
    let ratio = (-w.scale_by((R::from_i64(o.d) / R::from_i64(o.c)).ln())).cexp();
    let x = R::from_i64(o.n) / R::from_i64(o.m);
    let f = hyp2f1(Hyp2F1Args::new(h - s2, h - s1, cr(R::from_i64(k as i64)), x))?.value;
    Ok(ipow(o.c, -s2 - h) * ipow(o.b, s2 - h) * phase * ratio * beta(h - s2, s2 + h)? * beta(h - s1, s1 + h)? * f)
}

/// Closed form of I_γ(s) + conj(I_γ(s̄)) for an Ω₂ representative, where I_γ
/// is the orbital integral; the sum is the combination entering the φ kernel.
pub fn u_pair_closed_form<R: Real>(o: &MatrixOrbit, k: u32, s1: Cx<R>, s2: Cx<R>) -> Result<Cx<R>> {
    if o.cell != Cell::Omega2 {
        return Err(Error::domain("u_pair_closed_form", "requires an Omega2 representative"));
    }
    let h = cr(R::from_i64(k as i64 / 2));
    let one = Cx::new(R::one(), R::zero());
    let half_pi = R::pi() * R::from_f64(0.5);
    let (n, m) = (o.n, o.m);
    let x = R::from_i64(m) / R::from_i64(n);
    let gk = gamma(cr(R::from_i64(k as i64)))?;
    let common = ipow(o.a, s1 + s2) * ipow(o.c, s1 - s2) / ipow(n - m, s1 + s2)
        * (R::pi() * R::from_i64(parity_sign(k) as i64));
    let fa = hyp2f1(Hyp2F1Args::new(h - s2, one - h - s2, s1 - s2 + one, x))?.value;
    let fb = hyp2f1(Hyp2F1Args::new(h - s1, one - h - s1, s2 - s1 + one, x))?.value;
    let t1 = ipow(n, s2 - h) * gamma(h - s2)? * gamma(h + s1)?
        / ((s2 - s1).scale_by(half_pi).csin() * gamma(one + s1 - s2)? * gk)
        * fa;
    let t2 = ipow(n, s1 - h) / ipow(m, s1 - s2) * gamma(h + s2)? * gamma(h - s1)?
        / ((s1 - s2).scale_by(half_pi).csin() * gamma(one - s1 + s2)? * gk)
        * fb;
    Ok(common * (t1 + t2))
}

/// Closed-form I_γ(s) + conj(I_γ(s̄)) for any cell.
pub fn orbit_pair_closed_form<R: Real>(o: &MatrixOrbit, k: u32, s1: Cx<R>, s2: Cx<R>) -> Result<Cx<R>> {
    let single = |f: fn(&MatrixOrbit, u32, Cx<R>, Cx<R>) -> Result<Cx<R>>| -> Result<Cx<R>> {
        Ok(f(o, k, s1, s2)? + f(o, k, s1.conj(), s2.conj())?.conj())
    };
    match o.cell {
        Cell::Omega1 => single(w_closed_form),
        Cell::Omega2 => u_pair_closed_form(o, k, s1, s2),
        Cell::Omega3 => single(v_closed_form),
    }
}

/// Quadrature counterpart of [`orbit_pair_closed_form`].
pub fn orbit_pair_quadrature(o: &MatrixOrbit, k: u32, s1: Complex64, s2: Complex64) -> Result<Complex64> {
    Ok(orbital_quadrature_oracle(o, k, s1, s2)? + orbital_quadrature_oracle(o, k, s1.conj(), s2.conj())?.conj())
}

/// The factor (2π²/(k−1)) · 2C_k^{−1} n^{k−1} i^k / P that converts summed orbit
/// pairs into the normalized moment, P being [`prefactor`].
pub fn orbit_normalization<R: Real>(p: &SpectralParams) -> Result<Cx<R>> {
    let k = p.k;
    let pi = R::pi();
    let front = R::from_f64(2.0) * pi * pi / R::from_i64(k as i64 - 1);
    let ck = CkConstant::inverse::<R>(k) * R::from_f64(2.0);
    let nk = R::from_i64(p.n as i64).powi(k as i32 - 1);
    let ik = R::from_i64(parity_sign(k) as i64);
    Ok(cr(front * ck * nk * ik) / prefactor::<R>(p)?)
}
