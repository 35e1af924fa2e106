use std::ops::RangeInclusive;

use num_complex::Complex64;

/// Parse `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` with optional exponents.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("'{text}' is not a complex number of the form a+bi");
    let real = |t: &str| -> Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Ok(Complex64::new(re, im))
}

/// `a..b` or `a..=b` (both inclusive), or a single index.
pub fn parse_index_range(text: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("'{text}' is not an index range like 1..10");
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("index range '{text}' must satisfy 1 <= start <= end"));
    }
    Ok(lo..=hi)
}

/// `s1;s2`, for instance `0.07+0.11i;-0.13+0.05i`.
pub fn parse_shift_pair(text: &str) -> Result<(Complex64, Complex64), String> {
    let (a, b) = text
        .split_once(';')
        .ok_or_else(|| format!("'{text}' is not a shift pair s1;s2"))?;
    Ok((parse_complex(a)?, parse_complex(b)?))
}
