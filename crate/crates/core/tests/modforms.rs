use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rtf_core::modforms::{
    delta_qexp, divisors, eigenform, eisenstein_qexp, factorize, sigma0, Eigenform, QExpansion, SUPPORTED_WEIGHTS,
};
use rtf_core::Error;

/// τ(1..=n) from q Π (1 − q^m)^{24}, multiplying one factor at a time.
fn tau_oracle(n: usize) -> Vec<i128> {
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

fn sigma_oracle(n: u64, k: u32) -> i128 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as i128).pow(k)).sum()
}

#[test]
fn delta_matches_product_oracle() {
    let n = 400;
    let oracle = tau_oracle(n);
    let d = delta_qexp(n).unwrap();
    for (i, t) in oracle.iter().enumerate() {
        assert_eq!(d.coeff(i + 1).unwrap(), &BigInt::from(*t), "τ({})", i + 1);
    }
}

#[test]
fn tau_small_values() {
    let d = delta_qexp(12).unwrap();
    let t = |i: usize| d.coeff(i).unwrap().clone();
    assert_eq!(t(1), BigInt::from(1));
    assert_eq!(t(2), BigInt::from(-24));
    assert_eq!(t(6), t(2) * t(3));
}

#[test]
fn eisenstein_coefficients() {
    let e4 = eisenstein_qexp(4, 200).unwrap();
    let e6 = eisenstein_qexp(6, 200).unwrap();
    assert_eq!(e4.constant_term(), &BigInt::from(1));
    for m in 1..=200usize {
        assert_eq!(e4.coeff(m).unwrap(), &BigInt::from(240 * sigma_oracle(m as u64, 3)));
        assert_eq!(e6.coeff(m).unwrap(), &BigInt::from(-504 * sigma_oracle(m as u64, 5)));
    }
    assert!(matches!(eisenstein_qexp(8, 10), Err(Error::Domain { .. })));
}

#[test]
fn delta_from_eisenstein_series() {
    let n = 1000;
    let e4 = eisenstein_qexp(4, n).unwrap();
    let e6 = eisenstein_qexp(6, n).unwrap();
    let diff = e4.mul(&e4).mul(&e4).sub(&e6.mul(&e6));
    let d = delta_qexp(n).unwrap();
    assert_eq!(diff.constant_term(), &BigInt::from(0));
    for m in 1..=n {
        let (q, r) = diff.coeff(m).unwrap().div_rem(&BigInt::from(1728));
        assert_eq!(r, BigInt::from(0));
        assert_eq!(&q, d.coeff(m).unwrap(), "m = {m}");
    }
}

fn hecke_checks(k: u32, n: usize) {
    let f = eigenform(k, n).unwrap();
    let a = |m: usize| f.coeff(m).unwrap().clone();
    for m in 1..=n {
        for l in 1..=(n / m) {
            if m.gcd(&l) == 1 {
                assert_eq!(a(m) * a(l), a(m * l), "k={k} a({m})a({l})");
            }
        }
    }
    for p in (2..=n).filter(|&p| factorize(p as u64).len() == 1 && factorize(p as u64)[0].1 == 1) {
        let pk = BigInt::from(p).pow(k - 1);
        let mut prev = BigInt::from(1);
        let mut cur = a(p);
        let mut q = p;
        while q * p <= n {
            let next = a(p) * &cur - &pk * &prev;
            assert_eq!(a(q * p), next, "k={k} p={p} q={q}");
            prev = cur;
            cur = next;
            q *= p;
        }
    }
}

#[test]
fn multiplicativity_and_hecke_recursion() {
    for k in SUPPORTED_WEIGHTS {
        hecke_checks(k, 2000);
    }
}

#[test]
fn weight_sixteen_is_delta_times_e4() {
    let n = 300;
    let f = eigenform(16, n).unwrap();
    let tau = tau_oracle(n);
    for m in 1..=n {
        let mut c: i128 = tau[m - 1];
        for j in 1..m {
            c += tau[m - j - 1] * 240 * sigma_oracle(j as u64, 3);
        }
        assert_eq!(f.coeff(m).unwrap(), &BigInt::from(c), "m = {m}");
    }
}

#[test]
fn cache_round_trip_is_exact() {
    let f = eigenform(26, 500).unwrap();
    let text = f.qexp.to_cache_string();
    let back = QExpansion::from_cache_str(&text).unwrap();
    assert_eq!(&back, f.qexp.as_ref());
    assert_eq!(back.to_cache_string(), text);

    let dir = std::env::temp_dir().join(format!("rtf-modforms-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k26.qexp");
    f.qexp.write_cache(&path).unwrap();
    assert_eq!(QExpansion::read_cache(&path).unwrap(), back);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_cache_is_rejected() {
    assert!(matches!(QExpansion::from_cache_str("not a cache"), Err(Error::CacheFormat(_))));
    let f = eigenform(12, 20).unwrap();
    let text = f.qexp.to_cache_string();
    let truncated = &text[..text.len() / 2];
    assert!(QExpansion::from_cache_str(truncated).is_err());
}

#[test]
fn unsupported_weights() {
    for k in [2, 10, 13, 14, 24, 28] {
        assert!(matches!(eigenform(k, 20), Err(Error::UnsupportedWeight(_))));
    }
}

fn cached_forms() -> &'static [Eigenform] {
    static FORMS: std::sync::OnceLock<Vec<Eigenform>> = std::sync::OnceLock::new();
    FORMS.get_or_init(|| SUPPORTED_WEIGHTS.iter().map(|&k| eigenform(k, 1500).unwrap()).collect())
}

proptest! {
    #[test]
    fn divisor_functions_agree(n in 1u64..5000) {
        let d = divisors(n);
        prop_assert_eq!(d.len() as u64, sigma0(n));
        prop_assert!(d.iter().all(|x| n % x == 0));
        prop_assert_eq!(d.len() as u64, (1..=n).filter(|x| n % x == 0).count() as u64);
        let product: u64 = factorize(n).iter().map(|(p, e)| p.pow(*e)).product();
        prop_assert_eq!(product, n);
    }

    #[test]
    fn deligne_bound_holds(ki in 0usize..6, m in 1usize..1500) {
        let f = &cached_forms()[ki];
        let lambda: f64 = f.lambda(m).unwrap();
        prop_assert!(lambda.abs() <= sigma0(m as u64) as f64 * (1.0 + 1e-12));
    }
}
