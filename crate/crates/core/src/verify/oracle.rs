//! Cross-checks of the numerical building blocks against independent
//! evaluations: functional equations, integral representations, finite
//! differences and 2-D quadrature of orbital integrals.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometric::orbital::{
    orbit_pair_quadrature, orbital_quadrature_oracle, u_pair_closed_form, v_closed_form, w_closed_form, Cell, MatrixOrbit,
};
use crate::specialfn::{gamma, hyp2f1, hyp2f1_euler_oracle, hyp2f1_param_grad, lattice_sum_check, zeta, Hyp2F1Args};

pub const DEFAULT_SEED: u64 = 0x7274_6600;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    fn from_residuals(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        let max = residuals.iter().cloned().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        OracleCheck {
            name: name.into(),
            cases: residuals.len(),
            max_residual: max,
            tolerance,
            pass: !residuals.is_empty() && max < tolerance,
        }
    }
}

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const PI: f64 = std::f64::consts::PI;

fn away_from_poles(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let s = z(rng.gen_range(-6.0..6.0), rng.gen_range(-4.0..4.0));
        if (s - s.re.round()).norm() > 1e-2 {
            return s;
        }
    }
}

pub fn gamma_reflection(samples: usize, seed: u64) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut res = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = away_from_poles(&mut rng);
        res.push(rel(gamma(s)? * gamma(1.0 - s)?, PI / (s * PI).sin()));
    }
    Ok(OracleCheck::from_residuals("gamma-reflection", &res, 1e-12))
}

pub fn gamma_recurrence(samples: usize, seed: u64) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    let mut res = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = away_from_poles(&mut rng);
        let g = gamma(s)?;
        res.push(rel(gamma(s + 1.0)?, s * g));
    }
    Ok(OracleCheck::from_residuals("gamma-recurrence", &res, 1e-12))
}

/// ζ(s) against 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s) on s = 1/2 + it.
pub fn zeta_functional_equation() -> Result<OracleCheck> {
    let mut res = Vec::new();
    for j in 1..=120 {
        let s = z(0.5, 0.5 * j as f64);
        let one = z(1.0, 0.0);
        let chi = z(2.0, 0.0).powc(s) * z(PI, 0.0).powc(s - one) * (s * PI / 2.0).sin() * gamma(one - s)?;
        let lhs = zeta(s)?;
        res.push((lhs - chi * zeta(one - s)?).norm() / lhs.norm().max(1.0));
    }
    Ok(OracleCheck::from_residuals("zeta-functional-equation", &res, 1e-11))
}

/// Gauss series (with its transformations) against the Euler integral.
pub fn hyp2f1_euler(samples: usize, seed: u64) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let tuples: Vec<_> = (0..samples)
        .map(|_| {
            let a = z(rng.gen_range(-3.0..8.0), rng.gen_range(-1.0..1.0));
            let b = z(rng.gen_range(0.5..7.0), rng.gen_range(-0.5..0.5));
            let c = b + z(rng.gen_range(0.5..7.0), rng.gen_range(-0.5..0.5));
            let x = rng.gen_range(-6.0..0.9);
            (a, b, c, x)
        })
        .collect();
    let res = tuples
        .par_iter()
        .map(|&(a, b, c, x)| Ok(rel(hyp2f1(Hyp2F1Args::new(a, b, c, x))?.value, hyp2f1_euler_oracle(a, b, c, x)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(OracleCheck::from_residuals("hyp2f1-euler-integral", &res, 1e-9))
}

/// Five-point central differences in each parameter.
fn fd_gradient(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<[Complex64; 3]> {
    let h = 1e-3;
    let f = |a, b, c| hyp2f1(Hyp2F1Args::new(a, b, c, x)).map(|r| r.value);
    let d = |e: [f64; 3]| -> Result<Complex64> {
        let at = |t: f64| f(a + e[0] * t, b + e[1] * t, c + e[2] * t);
        Ok((8.0 * (at(h)? - at(-h)?) - (at(2.0 * h)? - at(-2.0 * h)?)) / (12.0 * h))
    };
    Ok([d([1.0, 0.0, 0.0])?, d([0.0, 1.0, 0.0])?, d([0.0, 0.0, 1.0])?])
}

/// Term-wise parameter gradient against central differences. The first
/// tuples are the terminating F(k/2, 1 − k/2; 1; x) family.
pub fn hyp2f1_gradient(samples: usize, seed: u64) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let mut tuples = Vec::with_capacity(samples);
    for h in [6.0, 8.0, 9.0, 10.0, 11.0, 13.0] {
        tuples.push((z(h, 0.0), z(1.0 - h, 0.0), z(1.0, 0.0), rng.gen_range(0.05..0.9)));
    }
    while tuples.len() < samples {
        let a = z(rng.gen_range(-2.0..6.0), rng.gen_range(-1.0..1.0));
        let b = z(rng.gen_range(-2.0..6.0), rng.gen_range(-1.0..1.0));
        let c = z(rng.gen_range(0.5..8.0), rng.gen_range(-1.0..1.0));
        tuples.push((a, b, c, rng.gen_range(-0.9..0.9)));
    }
    let mut res = Vec::with_capacity(samples);
    for (a, b, c, x) in tuples {
        let (ga, gb, gc) = hyp2f1_param_grad(Hyp2F1Args::new(a, b, c, x))?;
        let fd = fd_gradient(a, b, c, x)?;
        for (g, f) in [ga, gb, gc].into_iter().zip(fd) {
            res.push((g - f).norm() / f.norm().max(1.0));
        }
    }
    Ok(OracleCheck::from_residuals("hyp2f1-parameter-gradient", &res, 1e-6))
}

/// The Lipschitz summation formula Σ_m (z+m)^{−k} against its q-series.
pub fn lattice_sums() -> Result<OracleCheck> {
    let points = [(z(0.0, 1.0), 12), (z(0.3, 0.8), 4), (z(-0.45, 0.9), 6), (z(0.1, 1.7), 16), (z(0.5, 0.87), 26)];
    let res = points.iter().map(|&(w, k)| lattice_sum_check(w, k)).collect::<Result<Vec<_>>>()?;
    Ok(OracleCheck::from_residuals("lattice-sum", &res, 1e-10))
}

pub fn special_function_suite(seed: u64) -> Result<Vec<OracleCheck>> {
    Ok(vec![
        gamma_reflection(500, seed)?,
        gamma_recurrence(500, seed)?,
        zeta_functional_equation()?,
        hyp2f1_euler(100, seed)?,
        hyp2f1_gradient(50, seed)?,
        lattice_sums()?,
    ])
}

/// Matrices with entries at most 10, one shift pair per case.
pub fn orbital_cases() -> Result<Vec<(MatrixOrbit, Complex64, Complex64)>> {
    let real = (z(0.3, 0.0), z(0.1, 0.0));
    let cx = (z(0.07, 0.11), z(-0.13, 0.05));
    let spec = [
        (Cell::Omega1, 1, 2, 1, 1, 1, real),
        (Cell::Omega1, 3, 4, 1, 1, 1, cx),
        (Cell::Omega1, 2, 2, 2, 2, 3, cx),
        (Cell::Omega2, 2, 1, 1, 1, 1, real),
        (Cell::Omega2, 5, 1, 2, 1, 3, cx),
        (Cell::Omega3, 1, 1, 2, 1, 1, real),
        (Cell::Omega3, 2, 2, 3, 2, 2, cx),
        (Cell::Omega3, 1, 1, 1, 3, 2, real),
    ];
    spec.iter()
        .map(|&(cell, n, a, b, c, d, (s1, s2))| Ok((MatrixOrbit::new(cell, n, a, b, c, d)?, s1, s2)))
        .collect()
}

fn orbital_residual(o: &MatrixOrbit, k: u32, s1: Complex64, s2: Complex64) -> Result<f64> {
    let (closed, quad) = match o.cell {
        Cell::Omega1 => (w_closed_form::<f64>(o, k, s1, s2)?, orbital_quadrature_oracle(o, k, s1, s2)?),
        Cell::Omega3 => (v_closed_form::<f64>(o, k, s1, s2)?, orbital_quadrature_oracle(o, k, s1, s2)?),
        Cell::Omega2 => (u_pair_closed_form::<f64>(o, k, s1, s2)?, orbit_pair_quadrature(o, k, s1, s2)?),
    };
    Ok(rel(closed, quad))
}

/// Closed-form orbital integrals against 2-D quadrature at weight `k`.
pub fn orbital_suite(k: u32) -> Result<Vec<OracleCheck>> {
    orbital_cases()?
        .iter()
        .map(|(o, s1, s2)| {
            let r = orbital_residual(o, k, *s1, *s2)?;
            let (a, b, c, d) = (o.a, o.b, o.c, o.d);
            let name = format!("orbital-{:?}-n{}-[{a},{b};{c},{d}]", o.cell, o.n).to_lowercase();
            Ok(OracleCheck::from_residuals(&name, &[r], 1e-6))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let c = OracleCheck::from_residuals("x", &[1e-20, f64::NAN], 1.0);
        assert!(!c.pass);
        assert!(!OracleCheck::from_residuals("x", &[], 1.0).pass);
    }

    #[test]
    fn seeded_samples_repeat() {
        assert_eq!(gamma_reflection(20, 7).unwrap(), gamma_reflection(20, 7).unwrap());
    }
}
