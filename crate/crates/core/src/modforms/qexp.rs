//! Exact integer q-expansions and the line-oriented cache format.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest truncation length accepted by the builders.
pub const MAX_COEFFICIENTS: usize = 50_000;

const CACHE_MAGIC: &str = "QEXP1";

/// A truncated q-expansion Σ_{n=0}^{N} a(n) qⁿ with exact integer coefficients.
///
/// `a(0)` is stored separately from `a(1..=N)`; it is zero for cusp forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: u32,
    constant: BigInt,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(weight: u32, constant: BigInt, coeffs: Vec<BigInt>) -> Self {
        Self {
            weight,
            constant,
            coeffs,
        }
    }

    fn from_dense(weight: u32, mut dense: Vec<BigInt>) -> Self {
        let constant = if dense.is_empty() {
            BigInt::zero()
        } else {
            dense.remove(0)
        };
        Self::new(weight, constant, dense)
    }

    fn dense(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(self.constant.clone());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    /// Truncation length N.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    /// a(n) for 0 ≤ n ≤ N.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        if n == 0 {
            Some(&self.constant)
        } else {
            self.coeffs.get(n - 1)
        }
    }

    /// a(1..=N).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_cusp_form(&self) -> bool {
        self.constant.is_zero()
    }

    /// Product truncated to the shorter of the two lengths.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let len = self.len().min(other.len()) + 1;
        let prod = mul_truncated(&self.dense(), &other.dense(), len);
        QExpansion::from_dense(self.weight + other.weight, prod)
    }

    pub fn sub(&self, other: &QExpansion) -> QExpansion {
        let len = self.len().min(other.len()) + 1;
        let a = self.dense();
        let b = other.dense();
        let diff = (0..len).map(|i| &a[i] - &b[i]).collect();
        QExpansion::from_dense(self.weight, diff)
    }

    pub fn truncate(&self, n: usize) -> QExpansion {
        let mut q = self.clone();
        q.coeffs.truncate(n);
        q
    }

    /// Serialize to the `QEXP1` text format.
    pub fn to_cache_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CACHE_MAGIC} weight={} count={}", self.weight, self.len());
        if !self.constant.is_zero() {
            let _ = writeln!(s, "0 {}", self.constant);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            let _ = writeln!(s, "{} {}", i + 1, a);
        }
        s
    }

    pub fn from_cache_str(text: &str) -> Result<QExpansion> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("empty input".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(CACHE_MAGIC) {
            return Err(Error::CacheFormat(format!("bad header '{header}'")));
        }
        let mut weight = None;
        let mut count = None;
        for p in parts {
            let (key, value) = p
                .split_once('=')
                .ok_or_else(|| Error::CacheFormat(format!("bad header field '{p}'")))?;
            let v: usize = value
                .parse()
                .map_err(|_| Error::CacheFormat(format!("bad header value '{p}'")))?;
            match key {
                "weight" => weight = Some(v as u32),
                "count" => count = Some(v),
                _ => return Err(Error::CacheFormat(format!("unknown header field '{key}'"))),
            }
        }
        let weight = weight.ok_or_else(|| Error::CacheFormat("missing weight".into()))?;
        let count = count.ok_or_else(|| Error::CacheFormat("missing count".into()))?;
        if count > MAX_COEFFICIENTS {
            return Err(Error::Resource(format!("count {count} exceeds {MAX_COEFFICIENTS}")));
        }
        let mut constant = BigInt::zero();
        let mut coeffs = Vec::with_capacity(count);
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (n, a) = line
                .trim()
                .split_once(' ')
                .ok_or_else(|| Error::CacheFormat(format!("line {}: expected '<n> <a(n)>'", lineno + 2)))?;
            let n: usize = n
                .parse()
                .map_err(|_| Error::CacheFormat(format!("line {}: bad index", lineno + 2)))?;
            let a: BigInt = a
                .trim()
                .parse()
                .map_err(|_| Error::CacheFormat(format!("line {}: bad coefficient", lineno + 2)))?;
            if n == 0 && coeffs.is_empty() {
                constant = a;
            } else if n == coeffs.len() + 1 {
                coeffs.push(a);
            } else {
                return Err(Error::CacheFormat(format!("line {}: index {n} out of sequence", lineno + 2)));
            }
        }
        if coeffs.len() != count {
            return Err(Error::CacheFormat(format!("expected {count} coefficients, found {}", coeffs.len())));
        }
        Ok(QExpansion::new(weight, constant, coeffs))
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_cache_string())?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<QExpansion> {
        QExpansion::from_cache_str(&std::fs::read_to_string(path)?)
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// Truncated product of dense coefficient vectors. Falls back from `i128` to
/// big-integer accumulation when the bound on the result could overflow.
fn mul_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let len = len.min(a.len()).min(b.len());
    let a = &a[..len];
    let b = &b[..len];
    let log_len = (usize::BITS - len.leading_zeros()) as u64;
    if max_bits(a) + max_bits(b) + log_len < 126 {
        let ai: Vec<i128> = a.iter().map(|x| x.to_i128().expect("fits")).collect();
        let bi: Vec<i128> = b.iter().map(|x| x.to_i128().expect("fits")).collect();
        let mut out = vec![0i128; len];
        for (i, &x) in ai.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in bi[..len - i].iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b[..len - i].iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Resource("truncation length must be >= 1".into()));
    }
    if n > MAX_COEFFICIENTS {
        return Err(Error::Resource(format!("{n} coefficients exceeds cap {MAX_COEFFICIENTS}")));
    }
    Ok(())
}

/// Π_{m≥1}(1 − q^m) to O(q^len) by the pentagonal number theorem.
fn euler_product(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for jj in [j, -j] {
            let e = (jj * (3 * jj - 1) / 2) as usize;
            if e < len {
                any = true;
                let sign = if jj.rem_euclid(2) == 0 { 1 } else { -1 };
                p[e] = BigInt::from(sign);
            }
            if j == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    p
}

/// Δ = q Π(1 − q^m)^{24}, coefficients τ(1..=N).
pub fn delta_qexp(n: usize) -> Result<QExpansion> {
    check_len(n)?;
    let p = euler_product(n);
    let p2 = mul_truncated(&p, &p, n);
    let p4 = mul_truncated(&p2, &p2, n);
    let p8 = mul_truncated(&p4, &p4, n);
    let p16 = mul_truncated(&p8, &p8, n);
    let p24 = mul_truncated(&p16, &p8, n);
    Ok(QExpansion::new(12, BigInt::zero(), p24))
}

/// E₄ = 1 + 240 Σ σ₃(n)qⁿ and E₆ = 1 − 504 Σ σ₅(n)qⁿ.
pub fn eisenstein_qexp(weight: u32, n: usize) -> Result<QExpansion> {
    check_len(n)?;
    let (power, scale) = match weight {
        4 => (3u32, BigInt::from(240)),
        6 => (5u32, BigInt::from(-504)),
        _ => {
            return Err(Error::domain(
                "eisenstein_qexp",
                format!("weight {weight} not in {{4, 6}}"),
            ))
        }
    };
    let sig = divisor_power_sums(n, power);
    let coeffs = sig.into_iter().map(|s| &scale * s).collect();
    Ok(QExpansion::new(weight, BigInt::one(), coeffs))
}

/// σ_k(m) for m = 1..=n, exact, by a divisor sieve.
fn divisor_power_sums(n: usize, k: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for d in 1..=n {
        let dk = BigInt::from(d).pow(k);
        let mut m = d;
        while m <= n {
            out[m - 1] += &dk;
            m += d;
        }
    }
    out
}
