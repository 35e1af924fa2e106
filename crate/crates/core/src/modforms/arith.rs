//! Divisor functions σ_v and τ_v by trial-division factorization.

use num_traits::One;

use crate::precision::{CExt, Cx, Real};

/// Prime factorization as (p, e) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of n, unsorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

/// σ_v(n) = Σ_{d | n} d^v.
pub fn sigma_v<R: Real>(v: Cx<R>, n: u64) -> Cx<R> {
    assert!(n >= 1, "sigma_v requires n >= 1");
    let mut acc = Cx::<R>::one();
    for (p, e) in factorize(n) {
        let pv = v.scale_by(R::from_i64(p as i64).ln()).cexp();
        let mut term = Cx::<R>::one();
        let mut local = Cx::<R>::one();
        for _ in 0..e {
            term *= pv;
            local += term;
        }
        acc *= local;
    }
    acc
}

/// σ_0(n), the number of divisors.
pub fn sigma0(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// τ_v(n) = σ_{2v}(n) / n^v, assembled as Π_p Σ_i p^{(2i−e)v} so that
/// τ_v = τ_{−v} holds up to the summation order.
pub fn tau_v<R: Real>(v: Cx<R>, n: u64) -> Cx<R> {
    assert!(n >= 1, "tau_v requires n >= 1");
    let mut acc = Cx::<R>::one();
    for (p, e) in factorize(n) {
        let lp = R::from_i64(p as i64).ln();
        let mut local = Cx::<R>::default();
        for i in 0..=e {
            let k = 2 * i as i64 - e as i64;
            local += v.scale_by(lp * R::from_i64(k)).cexp();
        }
        acc *= local;
    }
    acc
}

/// n^v for a positive integer n, through the real logarithm.
pub fn int_pow<R: Real>(n: u64, v: Cx<R>) -> Cx<R> {
    if n == 1 {
        return Cx::one();
    }
    v.scale_by(R::from_i64(n as i64).ln()).cexp()
}
