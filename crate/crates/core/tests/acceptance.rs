//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! The literal removable-singularity probe (criterion 3) cannot pass: the
//! moment is analytic but not constant near the origin, so its values on a
//! circle of radius 1e-2 differ from the centre by about 1e-2 relative. That
//! line is printed as FAIL and does not set the exit status unless
//! `RTF_ACCEPTANCE_STRICT=1` is set. Its mean-value and Laurent-coefficient
//! forms are checked at the same tolerance and do count.

use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use rtf_core::geometric::{geometric_total, j_sing, m2_main, prefactor, GeometricOptions, SpectralParams};
use rtf_core::lfunc::{arc_quadrature, completed_l, l_value, petersson_norm, root_number, sym2_l1};
use rtf_core::modforms::{delta_qexp, eigenform, eisenstein_qexp, factorize, SUPPORTED_WEIGHTS};
use rtf_core::verify::oracle::{orbital_suite, special_function_suite, OracleCheck, DEFAULT_SEED};
use rtf_core::verify::{
    batch_fingerprint, grid, scan, scan_serial, verify_corollary, verify_identity, Context, ToleranceConfig,
    VerificationReport, DEFAULT_SHIFTS,
};
use rtf_core::specialfn::upper_incomplete_gamma;
use rtf_core::{DoubleDouble, Precision, Real};

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Outcome {
    id: &'static str,
    pass: bool,
    /// Failing does not change the exit status outside strict mode.
    known_red: bool,
    detail: String,
}

impl Outcome {
    fn new(id: &'static str, pass: bool, detail: String) -> Self {
        Outcome { id, pass, known_red: false, detail }
    }
}

fn measured(r: &VerificationReport) -> f64 {
    match &r.residuals {
        Some(res) if res.criterion == rtf_core::verify::Criterion::Relative => res.rel_residual.unwrap_or(f64::INFINITY),
        Some(res) => res.abs_residual,
        None => f64::INFINITY,
    }
}

fn generic_identity(ctx: &Context) -> Outcome {
    let shifts = [(z(0.07, 0.11), z(-0.13, 0.05)), (z(0.31, 0.0), z(0.11, -0.17))];
    let points = grid(&SUPPORTED_WEIGHTS, 1..=10, &shifts);
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    let mut failures = Vec::new();
    let mut absolute = 0;
    for p in &points {
        let t = Instant::now();
        match verify_identity(ctx, p) {
            Ok(r) => {
                worst = worst.max(measured(&r));
                if r.residuals.is_some_and(|x| x.criterion == rtf_core::verify::Criterion::Absolute) {
                    absolute += 1;
                }
                if !r.pass {
                    failures.push(format!("k={} n={}", p.k, p.n));
                }
            }
            Err(e) => failures.push(format!("k={} n={}: {e}", p.k, p.n)),
        }
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    // one double-double spot check at the most expensive corner
    let dd = Context::new(ToleranceConfig::default().with_precision(Precision::DoubleDouble)).unwrap();
    let t = Instant::now();
    let p = SpectralParams::new(26, 10, shifts[1].0, shifts[1].1).unwrap();
    let dd_ok = verify_identity(&dd, &p).map(|r| r.pass).unwrap_or(false);
    let dd_secs = t.elapsed().as_secs_f64();
    let pass = failures.is_empty() && slowest < 5.0 && dd_ok && dd_secs < 60.0;
    Outcome::new(
        "1 identity",
        pass,
        format!(
            "{} points ({absolute} absolute), worst residual {worst:.2e} < 1e-8, slowest {slowest:.2}s < 5s, \
             double-double k=26 n=10 {} in {dd_secs:.1}s < 60s{}",
            points.len(),
            if dd_ok { "ok" } else { "FAILED" },
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

fn corollary(ctx: &Context) -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_zero = 0.0f64;
    let mut failures = Vec::new();
    for &k in &SUPPORTED_WEIGHTS {
        for n in 1..=10 {
            match verify_corollary(ctx, k, n) {
                Ok(r) => {
                    worst = worst.max(measured(&r));
                    let mut ok = r.pass;
                    if root_number(k) == -1 {
                        let g = r.geometric.as_ref().map_or(f64::INFINITY, |g| Complex64::from(g.total).norm());
                        let s = r.spectral.map_or(f64::INFINITY, |s| Complex64::from(s).norm());
                        worst_zero = worst_zero.max(g).max(s);
                        ok &= g < 1e-8 && s < 1e-8;
                    }
                    if !ok {
                        failures.push(format!("k={k} n={n}"));
                    }
                }
                Err(e) => failures.push(format!("k={k} n={n}: {e}")),
            }
        }
    }
    Outcome::new(
        "2 corollary",
        failures.is_empty(),
        format!(
            "60 points, worst residual {worst:.2e} < 1e-8, k in {{18,22,26}} max |value| {worst_zero:.2e} < 1e-8{}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

/// The bi-circle s₁ = r e^{iθ}, s₂ = (r/√2) e^{i(θ+1)} is t·(1, e^{i}/√2)
/// with t = r e^{iθ}, so the samples lie on one analytic slice g(t).
fn removable_singularity() -> Vec<Outcome> {
    let r = 1e-2;
    let tol = 1e-5;
    let dir = z(0.0, 1.0).exp() / 2f64.sqrt();
    let opts = GeometricOptions::default();
    let mut literal = 0.0f64;
    let mut mean_dev = 0.0f64;
    let mut laurent = 0.0f64;
    let mut err = None;
    for &(k, n) in &[(12u32, 1u64), (16, 2), (20, 3)] {
        let centre = match geometric_total::<f64>(&SpectralParams::origin(k, n).unwrap(), &opts) {
            Ok(g) => g.total,
            Err(e) => {
                err = Some(e.to_string());
                continue;
            }
        };
        let mut samples = Vec::new();
        for j in 0..8 {
            let t = z(0.0, 2.0 * PI * j as f64 / 8.0).exp() * r;
            let p = SpectralParams::new(k, n, t, t * dir).unwrap();
            match geometric_total::<f64>(&p, &opts) {
                Ok(g) => samples.push((t, g.total)),
                Err(e) => err = Some(e.to_string()),
            }
        }
        if samples.len() != 8 {
            continue;
        }
        let scale = centre.norm();
        for (_, g) in &samples {
            literal = literal.max((g - centre).norm() / scale);
        }
        let mean: Complex64 = samples.iter().map(|(_, g)| g).sum::<Complex64>() / 8.0;
        mean_dev = mean_dev.max((mean - centre).norm() / scale);
        for m in 1..=4 {
            let c: Complex64 = samples.iter().map(|(t, g)| g * t.powi(m)).sum::<Complex64>() / 8.0;
            laurent = laurent.max(c.norm() / r.powi(m) / scale);
        }
    }
    let failed = err.map(|e| format!("; error: {e}")).unwrap_or_default();
    let ok = failed.is_empty();
    vec![
        Outcome {
            id: "3 removable-singularity",
            pass: ok && literal < tol,
            known_red: true,
            detail: format!(
                "literal probe, r=1e-2, max relative deviation {literal:.2e} vs tolerance 1e-5 \
                 (first-order variation of a non-constant analytic function){failed}"
            ),
        },
        Outcome::new(
            "3a removable-singularity (mean value)",
            ok && mean_dev < tol,
            format!("8-point circle mean vs origin pathway, max relative deviation {mean_dev:.2e} < 1e-5{failed}"),
        ),
        Outcome::new(
            "3b removable-singularity (Laurent)",
            ok && laurent < tol,
            format!("principal-part coefficients t^-1..t^-4 on the circle, max relative size {laurent:.2e} < 1e-5{failed}"),
        ),
    ]
}

fn singular_consistency() -> Outcome {
    let shifts = [
        (z(0.3, 0.0), z(0.1, 0.0)),
        (z(0.07, 0.11), z(-0.13, 0.05)),
        (z(-1.2, 2.0), z(0.4, -0.7)),
        (z(2.0, 0.0), z(3.0, 0.5)),
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    for &(k, n) in &[(12u32, 1u64), (16, 3), (20, 10)] {
        for &(s1, s2) in &shifts {
            let p = SpectralParams::new(k, n, s1, s2).unwrap();
            let r = (|| -> rtf_core::Result<f64> {
                let m2: Complex64 = m2_main::<f64>(&p)?.iter().sum();
                let via_j = j_sing::<f64>(&p)? / prefactor::<f64>(&p)? * (2.0 * PI * PI / (k as f64 - 1.0));
                Ok((via_j - m2).norm() / m2.norm())
            })()
            .unwrap_or(f64::INFINITY);
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
            count += 1;
        }
    }
    Outcome::new("4 singular-orbital", worst < 1e-10, format!("{count} points, worst relative residual {worst:.2e} < 1e-10"))
}

fn oracle_outcome(id: &'static str, checks: rtf_core::Result<Vec<OracleCheck>>, min: usize) -> Outcome {
    match checks {
        Ok(cs) => {
            let parts: Vec<String> =
                cs.iter().map(|c| format!("{} {:.1e}/{:.0e}", c.name, c.max_residual, c.tolerance)).collect();
            Outcome::new(id, cs.len() >= min && cs.iter().all(|c| c.pass), parts.join(", "))
        }
        Err(e) => Outcome::new(id, false, format!("error: {e}")),
    }
}

/// τ(1..n) by multiplying out q Π (1 − q^m)^{24} one factor at a time.
fn tau_product_oracle(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n];
    p[0] = 1;
    for m in 1..n {
        for _ in 0..24 {
            for j in (m..n).rev() {
                p[j] -= p[j - m];
            }
        }
    }
    p
}

/// τ(0..n) from Δ = q·(Σ_m (−1)^m (2m+1) q^{m(m+1)/2})⁸.
fn jacobi_tau(n: usize) -> Vec<i128> {
    let mut jacobi = Vec::new();
    let mut m = 0usize;
    while m * (m + 1) / 2 < n {
        jacobi.push((m * (m + 1) / 2, if m.is_multiple_of(2) { 1 } else { -1 } * (2 * m as i128 + 1)));
        m += 1;
    }
    let mut p = vec![0i128; n];
    p[0] = 1;
    for _ in 0..8 {
        let mut next = vec![0i128; n];
        for (i, &pi) in p.iter().enumerate().filter(|(_, &x)| x != 0) {
            for &(e, c) in jacobi.iter().take_while(|(e, _)| i + e < n) {
                next[i + e] += pi * c;
            }
        }
        p = next;
    }
    let mut tau = vec![0i128; n + 1];
    tau[1..].copy_from_slice(&p);
    tau
}

fn modular_exactness() -> Outcome {
    let n = 2000;
    let mut bad = Vec::new();
    for &k in &SUPPORTED_WEIGHTS {
        let f = eigenform(k, n).unwrap();
        let a = |m: usize| f.coeff(m).unwrap();
        let mult = (1..=n).all(|m| (1..=n / m).all(|l| m.gcd(&l) != 1 || a(m) * a(l) == *a(m * l)));
        let hecke = (2..=n).filter(|&p| factorize(p as u64) == [(p as u64, 1)]).all(|p| {
            let pk = BigInt::from(p).pow(k - 1);
            let (mut prev, mut cur, mut q) = (BigInt::from(1), a(p).clone(), p);
            while q * p <= n {
                let next = a(p) * &cur - &pk * &prev;
                if next != *a(q * p) {
                    return false;
                }
                prev = std::mem::replace(&mut cur, next);
                q *= p;
            }
            true
        });
        if !mult || !hecke {
            bad.push(format!("k={k}"));
        }
    }
    let e4 = eisenstein_qexp(4, n).unwrap();
    let e6 = eisenstein_qexp(6, n).unwrap();
    let diff = e4.mul(&e4).mul(&e4).sub(&e6.mul(&e6));
    let delta = delta_qexp(n).unwrap();
    let eisenstein_ok = *diff.constant_term() == BigInt::from(0)
        && (1..=n).all(|m| {
            let (q, r) = diff.coeff(m).unwrap().div_rem(&BigInt::from(1728));
            r == BigInt::from(0) && &q == delta.coeff(m).unwrap()
        });
    let tau = tau_product_oracle(400);
    let oracle_ok = tau[1] == -24
        && tau[5] == tau[1] * tau[2]
        && (1..=400).all(|m| delta.coeff(m).unwrap() == &BigInt::from(tau[m - 1]));
    let pass = bad.is_empty() && eisenstein_ok && oracle_ok;
    Outcome::new(
        "7 modular-exactness",
        pass,
        format!(
            "multiplicativity and Hecke recursion to {n} for six weights {}, Δ = (E4³−E6²)/1728 to {n} {}, \
             τ(2) = {}, τ(6) = τ(2)τ(3) from product oracle {}",
            if bad.is_empty() { "ok".into() } else { format!("FAILED {}", bad.join(",")) },
            if eisenstein_ok { "ok" } else { "FAILED" },
            tau[1],
            if oracle_ok { "ok" } else { "FAILED" },
        ),
    )
}

fn kahan(it: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in it {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// L(1, sym² f) as the slope in X of Σ b(n) e^{−n/X}, b(n) = Σ_{m²|n} λ(n/m²)².
fn smoothed_sym2(lambda: &[f64]) -> f64 {
    let n_max = lambda.len() - 1;
    let b: Vec<f64> = (0..=n_max)
        .map(|n| {
            let mut acc = 0.0;
            let mut m = 1;
            while n > 0 && m * m <= n {
                if n % (m * m) == 0 {
                    acc += lambda[n / (m * m)].powi(2);
                }
                m += 1;
            }
            acc
        })
        .collect();
    let smoothed = |x: f64| kahan((1..=n_max).map(|n| b[n] * (-(n as f64) / x).exp()));
    (smoothed(40.0) - smoothed(20.0)) / 20.0
}

/// Λ(1/2 + s) from the Mellin integral of f(iy) split at y₀ instead of 1. The
/// two halves only recombine into Λ when f is modular with sign i^k, so this
/// checks the functional equation against the library's y₀ = 1 evaluation.
fn completed_l_split(f: &rtf_core::modforms::Eigenform, s: Complex64, y0: f64) -> rtf_core::Result<Complex64> {
    let half = (f.weight / 2) as f64;
    let eps = root_number(f.weight) as f64;
    let (w, w_dual) = (s + half, -s + half);
    let mut re = Vec::new();
    let mut im = Vec::new();
    for n in 1..=80 {
        let x = 2.0 * PI * n as f64;
        let a: f64 = f.coeff_real(n)?;
        let up = upper_incomplete_gamma(w, x * y0)? * (-w * x.ln()).exp();
        let down = upper_incomplete_gamma(w_dual, x / y0)? * (-w_dual * x.ln()).exp();
        let t = (up + down * eps) * a;
        re.push(t.re);
        im.push(t.im);
    }
    Ok(z(kahan(re.into_iter()), kahan(im.into_iter())))
}

fn l_machinery() -> rtf_core::Result<Outcome> {
    let mut fe = 0.0f64;
    let mut arc = 0.0f64;
    let mut sym2 = 0.0f64;
    for &k in &SUPPORTED_WEIGHTS {
        let f = eigenform(k, 2200)?;
        let eps = root_number(k) as f64;
        let bound = k as f64 / 2.0 - 1.0;
        for i in 0..5 {
            for j in 0..4 {
                let s = z(-0.9 * bound + 0.45 * bound * i as f64, -3.0 + 2.0 * j as f64);
                let a = completed_l_split(&f, s, 1.25)?;
                let b = completed_l(&f, -s)?.value;
                fe = fe.max((a - b * eps).norm() / a.norm());
            }
        }
        let order = sym2_l1::<f64>(&f)?.quadrature_order;
        let total: f64 = petersson_norm(&f)?;
        let a: f64 = arc_quadrature(&f, order)?;
        let b: f64 = arc_quadrature(&f, 2 * order)?;
        arc = arc.max((a - b).abs() / total);
        let lambda: Vec<f64> = (0..=2200).map(|n| if n == 0 { Ok(0.0) } else { f.lambda(n) }).collect::<rtf_core::Result<_>>()?;
        let slow = smoothed_sym2(&lambda);
        let got = sym2_l1::<f64>(&f)?.sym2_at_1;
        sym2 = sym2.max((got - slow).abs() / slow);
    }

    // |λ(n)| ≤ d(n) bounds each tail: below 1e-11 for 50000 terms at Re w = 3.5
    // and for 2000 terms at Re w ≥ 5, where w = 1/2 + s
    let tau = jacobi_tau(50_000);
    let w = 3.5;
    let direct = kahan((1..tau.len()).map(|n| tau[n] as f64 / (n as f64).powf(5.5) * (n as f64).powf(-w)));
    let got = l_value(&eigenform(12, 200)?, z(w - 0.5, 0.0))?.value;
    let mut dirichlet = (got - direct).norm() / direct.abs().max(1.0);
    for &(k, s) in &[(16u32, z(6.0, 1.5)), (20, z(4.5, 10.0)), (26, z(4.5, -4.0))] {
        let f = eigenform(k, 2000)?;
        let w = z(0.5, 0.0) + s;
        let mut re = Vec::with_capacity(2000);
        let mut im = Vec::with_capacity(2000);
        for n in 1..=2000 {
            let v = (-w * (n as f64).ln()).exp() * f.lambda::<f64>(n)?;
            re.push(v.re);
            im.push(v.im);
        }
        let direct = z(kahan(re.into_iter()), kahan(im.into_iter()));
        let got = l_value(&f, s)?.value;
        dirichlet = dirichlet.max((got - direct).norm() / direct.norm().max(1.0));
    }

    let mut central = 0.0f64;
    for k in [18, 22, 26] {
        let f = eigenform(k, 200)?;
        central = central.max(l_value(&f, z(0.0, 0.0))?.value.norm());
        let dd = l_value::<DoubleDouble>(&f, Default::default())?.value;
        central = central.max(dd.re.to_f64().abs().hypot(dd.im.to_f64()));
        // the library's value vanishes by symmetry alone; the split form only by modularity
        let gamma_factor = (2.0 * PI).powf(k as f64 / 2.0) / rtf_core::specialfn::gamma_real::<f64>(k as f64 / 2.0)?;
        central = central.max(completed_l_split(&f, z(0.0, 0.0), 1.25)?.norm() * gamma_factor);
    }

    let pass = fe < 1e-11 && dirichlet < 1e-10 && central < 1e-10 && arc < 1e-9 && sym2 < 1e-4;
    Ok(Outcome::new(
        "8 l-machinery",
        pass,
        format!(
            "functional equation (split at 1.25) {fe:.1e} < 1e-11, Dirichlet series {dirichlet:.1e} < 1e-10, \
             central zero {central:.1e} < 1e-10, arc self-convergence {arc:.1e} < 1e-9, \
             sym² cross-check {sym2:.1e} < 1e-4"
        ),
    ))
}

fn determinism() -> Outcome {
    let mut shifts = DEFAULT_SHIFTS.to_vec();
    shifts.push((z(0.0, 0.0), z(0.0, 0.0)));
    let points = grid(&SUPPORTED_WEIGHTS, 1..=3, &shifts);
    let first = scan(&Context::new(ToleranceConfig::default()).unwrap(), &points);
    let second = scan(&Context::new(ToleranceConfig::default()).unwrap(), &points);
    let serial = scan_serial(&Context::new(ToleranceConfig::default()).unwrap(), &points);
    let same = |a: &[VerificationReport], b: &[VerificationReport]| {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.canonical_json() == y.canonical_json())
    };
    let errors = first.iter().filter(|r| r.error.is_some()).count();
    let pass = errors == 0 && same(&first, &second) && same(&first, &serial);
    Outcome::new(
        "9 determinism",
        pass,
        format!(
            "{} reports; repeat {}, serial {}; fingerprint {}",
            points.len(),
            if same(&first, &second) { "identical" } else { "DIFFERS" },
            if same(&first, &serial) { "identical" } else { "DIFFERS" },
            &batch_fingerprint(&first)[..16]
        ),
    )
}

fn main() {
    let strict = std::env::var("RTF_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let ctx = Context::new(ToleranceConfig::default()).unwrap();
    let start = Instant::now();
    let timed = |f: &dyn Fn() -> Vec<Outcome>| {
        let t = Instant::now();
        let mut v = f();
        let secs = t.elapsed().as_secs_f64();
        if let Some(o) = v.first_mut() {
            o.detail += &format!(" [{secs:.1}s]");
        }
        v
    };
    let mut outcomes = Vec::new();
    outcomes.extend(timed(&|| vec![generic_identity(&ctx)]));
    outcomes.extend(timed(&|| vec![corollary(&ctx)]));
    outcomes.extend(timed(&removable_singularity));
    outcomes.extend(timed(&|| vec![singular_consistency()]));
    outcomes.extend(timed(&|| vec![oracle_outcome("5 orbital-oracle", orbital_suite(12), 6)]));
    outcomes.extend(timed(&|| vec![oracle_outcome("6 special-functions", special_function_suite(DEFAULT_SEED), 6)]));
    outcomes.extend(timed(&|| vec![modular_exactness()]));
    outcomes.extend(timed(&|| {
        vec![l_machinery().unwrap_or_else(|e| Outcome::new("8 l-machinery", false, format!("error: {e}")))]
    }));
    outcomes.extend(timed(&|| vec![determinism()]));

    let mut blocking = 0;
    for o in &outcomes {
        let tag = match (o.pass, o.known_red) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] {}: {}", o.id, o.detail);
        if !o.pass && (strict || !o.known_red) {
            blocking += 1;
        }
    }
    let red = outcomes.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} of {} lines pass, {red} red, {blocking} blocking, {:.1}s", outcomes.len() - red, outcomes.len(), start.elapsed().as_secs_f64());
    if blocking > 0 {
        std::process::exit(1);
    }
}
