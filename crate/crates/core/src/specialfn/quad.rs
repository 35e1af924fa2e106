//! Quadrature rules shared by the oracles and the Petersson-norm evaluator.

use num_complex::Complex64;


use crate::error::{Error, Result};
use crate::precision::Real;

/// Gauss–Legendre nodes and weights on [-1, 1], refined by Newton's method in
/// the working precision.
pub fn gauss_legendre<R: Real>(n: usize) -> (Vec<R>, Vec<R>) {
    let mut nodes = vec![R::zero(); n];
    let mut weights = vec![R::zero(); n];
    let two = R::from_f64(2.0);
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = R::from_f64(guess);
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= R::eps() * R::from_f64(16.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = two / ((R::one() - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = R::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<R: Real>(n: usize, x: R) -> (R, R) {
    let mut p0 = R::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = R::from_i64(k as i64);
        let p2 = ((R::from_i64(2 * k as i64 - 1)) * x * p1 - (kf - R::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = R::from_i64(n as i64);
    let d = nf * (x * p1 - p0) / (x * x - R::one());
    (p1, d)
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for j in 0..7 {
        let dx = half * GK_X[j];
        let s = f(mid - dx) + f(mid + dx);
        k += s * GK_WK[j];
        if j % 2 == 1 {
            g += s * GK_WG[j / 2];
        }
    }
    (k * half, ((k - g) * half).norm())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<Complex64> {
    let mut intervals = vec![(a, b, gk15(&f, a, b))];
    loop {
        let total: Complex64 = intervals.iter().map(|i| i.2 .0).sum();
        let err: f64 = intervals.iter().map(|i| i.2 .1).sum();
        if err <= tol * total.norm().max(1e-300) || err < 1e-300 {
            return Ok(total);
        }
        if intervals.len() >= max_intervals {
            return Err(Error::convergence("adaptive_gk", format!("error {err:e} after {max_intervals} intervals")));
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("non-empty");
        let (lo, hi, _) = intervals.swap_remove(idx);
        let m = 0.5 * (lo + hi);
        intervals.push((lo, m, gk15(&f, lo, m)));
        intervals.push((m, hi, gk15(&f, m, hi)));
    }
}

fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// Tanh-sinh quadrature on (0, 1) for integrands with algebraic endpoint
/// singularities. The integrand receives `(ln t, ln(1 - t), t)` so endpoint
/// behavior can be evaluated in log space without underflow, and must return
/// the logarithm of its value.
pub fn tanh_sinh_unit<F: Fn(f64, f64, f64) -> Complex64>(log_f: F, tol: f64) -> Result<Complex64> {
    let pi = std::f64::consts::PI;
    let eval = |v: f64| -> Complex64 {
        let q = pi * v.sinh();
        let ln_t = -softplus(-q);
        let ln_u = -softplus(q);
        let t = ln_t.exp();
        let lw = (pi * v.cosh()).ln() + ln_t + ln_u;
        (log_f(ln_t, ln_u, t) + lw).exp()
    };
    let vmax = 8.0;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= vmax {
        let v = k as f64 * h;
        sum += eval(v) + eval(-v);
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= vmax {
            let v = k as f64 * h;
            sum += eval(v) + eval(-v);
            k += 2;
        }
        let est = sum * h;
        if (est - prev).norm() <= tol * est.norm().max(1e-300) {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::convergence("tanh_sinh_unit", "no agreement after 12 halvings"))
}
