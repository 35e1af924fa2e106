//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Num, One, Zero};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const fn dd(hi: f64, lo: f64) -> DoubleDouble {
    DoubleDouble { hi, lo }
}

impl DoubleDouble {
    pub const ZERO: Self = dd(0.0, 0.0);
    pub const ONE: Self = dd(1.0, 0.0);
    pub const PI: Self = dd(std::f64::consts::PI, 1.2246467991473532e-16);
    pub const LN2: Self = dd(std::f64::consts::LN_2, 2.3190468138462996e-17);
    pub const EULER: Self = dd(0.5772156649015329, -4.942915152430645e-18);
    pub const HALF_LN_2PI: Self = dd(0.9189385332046728, -3.8782941580672414e-17);
    pub const EPSILON: f64 = 4.93038065763132e-32;

    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        dd(hi, lo)
    }

    pub fn new(x: f64) -> Self {
        dd(x, 0.0)
    }

    pub fn normalized(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        dd(h, l)
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Multiplication by an exact power of two.
    pub fn ldexp(self, e: i32) -> Self {
        if e.abs() > 1000 {
            return self.ldexp(e / 2).ldexp(e - e / 2);
        }
        let f = 2f64.powi(e);
        dd(self.hi * f, self.lo * f)
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p, e + self.lo * b);
        dd(h, l)
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (h, l) = quick_two_sum(hi, lo);
            dd(h, l)
        } else {
            dd(hi, 0.0)
        }
    }

    pub fn round(self) -> Self {
        (self + dd(0.5, 0.0)).floor()
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::ZERO } else { dd(f64::NAN, f64::NAN) };
        }
        let y = self.hi.sqrt();
        let yy = Self::new(y);
        let r = self - yy.sqr();
        yy + dd(r.hi / (2.0 * y), 0.0)
    }

    /// `exp(x) - 1`, accurate near zero.
    pub fn exp_m1(self) -> Self {
        if self.hi.abs() > 0.5 {
            return self.exp() - Self::ONE;
        }
        Self::expm1_reduced(self)
    }

    // Taylor series on x / 2^10, then undo the scaling with e -> e(e + 2).
    fn expm1_reduced(x: Self) -> Self {
        const SQUARINGS: i32 = 10;
        let r = x.ldexp(-SQUARINGS);
        let mut term = r;
        let mut sum = r;
        let mut j = 2.0;
        while term.hi.abs() > 1e-36 * sum.hi.abs().max(1e-300) {
            term = term * r / Self::new(j);
            sum += term;
            j += 1.0;
            if j > 40.0 {
                break;
            }
        }
        for _ in 0..SQUARINGS {
            sum = sum * (sum + Self::new(2.0));
        }
        sum
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return dd(f64::INFINITY, 0.0);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let m = (self.hi / Self::LN2.hi).round();
        let r = self - Self::LN2.mul_f64(m);
        let e = Self::expm1_reduced(r) + Self::ONE;
        e.ldexp(m as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                dd(f64::NEG_INFINITY, 0.0)
            } else {
                dd(f64::NAN, f64::NAN)
            };
        }
        let mut y = Self::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let half_pi = Self::PI.ldexp(-1);
        let j = (self.hi / half_pi.hi).round();
        let r = self - half_pi * Self::new(j);
        let r2 = r.sqr();
        // sin and cos Taylor series for |r| <= pi/4
        let mut s = r;
        let mut c = Self::ONE;
        let mut ts = r;
        let mut tc = Self::ONE;
        let mut i = 1.0;
        loop {
            ts = -ts * r2 / Self::new((2.0 * i) * (2.0 * i + 1.0));
            tc = -tc * r2 / Self::new((2.0 * i - 1.0) * (2.0 * i));
            s += ts;
            c += tc;
            i += 1.0;
            if (ts.hi.abs() < 1e-34 && tc.hi.abs() < 1e-34) || i > 30.0 {
                break;
            }
        }
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            Self::ONE / acc
        } else {
            acc
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e}, {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi + self.lo)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        dd(-self.hi, -self.lo)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        dd(h, l)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        dd(h, l)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        dd(h, l) + Self::new(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let q = if q.hi < 0.0 { -((-q).floor()) } else { q.floor() };
        self - q * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Self::new)
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}
