use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use super::Real;

pub type Cx<R> = Complex<R>;

/// Complex constant from `f64` parts.
pub fn c<R: Real>(re: f64, im: f64) -> Cx<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

/// Real value embedded in the complex plane.
pub fn cr<R: Real>(x: R) -> Cx<R> {
    Complex::new(x, R::zero())
}

/// Transcendental functions on `Complex<R>` for any backend. Names carry a `c`
/// prefix to stay clear of the inherent `Complex<f64>` methods.
pub trait CExt<R: Real>: Sized {
    fn cabs(self) -> R;
    fn carg(self) -> R;
    fn cexp(self) -> Self;
    fn cexpm1(self) -> Self;
    fn cln(self) -> Self;
    fn csqrt(self) -> Self;
    fn csin(self) -> Self;
    fn ccos(self) -> Self;
    fn cpow(self, w: Self) -> Self;
    fn cpowi(self, n: i32) -> Self;
    fn crecip(self) -> Self;
    fn scale_by(self, r: R) -> Self;
    fn is_finite_c(self) -> bool;
    fn to_c64(self) -> Complex64;
    fn from_c64(z: Complex64) -> Self;
}

fn atan2<R: Real>(y: R, x: R) -> R {
    // f64 seed refined by one Newton step on tan, in the working precision
    let seed = y.to_f64().atan2(x.to_f64());
    if R::DIGITS <= 16 {
        return R::from_f64(seed);
    }
    let mut t = R::from_f64(seed);
    let r = x.hypot(y);
    if r == R::zero() {
        return R::zero();
    }
    for _ in 0..2 {
        let (s, co) = t.sin_cos();
        // minimize |(x, y)/r - (cos t, sin t)| along the circle
        t += (y * co - x * s) / r;
    }
    t
}

impl<R: Real> CExt<R> for Complex<R> {
    fn cabs(self) -> R {
        self.re.hypot(self.im)
    }

    fn carg(self) -> R {
        atan2(self.im, self.re)
    }

    fn cexp(self) -> Self {
        let m = self.re.exp();
        let (s, co) = self.im.sin_cos();
        Complex::new(m * co, m * s)
    }

    fn cexpm1(self) -> Self {
        if self.cabs() > R::from_f64(0.5) {
            return self.cexp() - Self::one();
        }
        let em1 = self.re.exp_m1();
        let (s, co) = self.im.sin_cos();
        let half_s = (self.im / R::from_f64(2.0)).sin();
        let two = R::from_f64(2.0);
        Complex::new(em1 * co - two * half_s * half_s, (em1 + R::one()) * s)
    }

    fn cln(self) -> Self {
        Complex::new(self.cabs().ln(), self.carg())
    }

    fn csqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        (self.cln() / R::from_f64(2.0)).cexp()
    }

    fn csin(self) -> Self {
        let (s, co) = self.re.sin_cos();
        let (sh, ch) = sinh_cosh(self.im);
        Complex::new(s * ch, co * sh)
    }

    fn ccos(self) -> Self {
        let (s, co) = self.re.sin_cos();
        let (sh, ch) = sinh_cosh(self.im);
        Complex::new(co * ch, -(s * sh))
    }

    fn cpow(self, w: Self) -> Self {
        if self.is_zero() {
            return if w.is_zero() { Self::one() } else { Self::zero() };
        }
        (w * self.cln()).cexp()
    }

    fn cpowi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.crecip()
        } else {
            acc
        }
    }

    fn crecip(self) -> Self {
        // Smith's algorithm keeps intermediate magnitudes bounded
        let (a, b) = (self.re, self.im);
        if a.abs() >= b.abs() {
            let r = b / a;
            let d = a + b * r;
            Complex::new(R::one() / d, -r / d)
        } else {
            let r = a / b;
            let d = a * r + b;
            Complex::new(r / d, -R::one() / d)
        }
    }

    fn scale_by(self, r: R) -> Self {
        Complex::new(self.re * r, self.im * r)
    }

    fn is_finite_c(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn from_c64(z: Complex64) -> Self {
        Complex::new(R::from_f64(z.re), R::from_f64(z.im))
    }
}

fn sinh_cosh<R: Real>(y: R) -> (R, R) {
    let two = R::from_f64(2.0);
    if y.abs() < R::one() {
        let a = y.exp_m1();
        let b = (-y).exp_m1();
        ((a - b) / two, (a + b) / two + R::one())
    } else {
        let e = y.exp();
        let ei = R::one() / e;
        ((e - ei) / two, (e + ei) / two)
    }
}
