//! Working-precision abstraction. Every numerical kernel is generic over [`Real`],
//! with hardware `f64` and software [`DoubleDouble`] as the two backends.

mod complex;
mod dd;
mod sum;

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_traits::NumAssign;
use serde::{Deserialize, Serialize};

pub use complex::{c, cr, CExt, Cx};
pub use dd::{two_prod, two_sum, DoubleDouble};
pub use sum::CompensatedSum;

pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + Display
    + Default
    + PartialOrd
    + NumAssign
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    const NAME: &'static str;
    /// Approximate number of significant decimal digits.
    const DIGITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Exact for the high component; used to carry double-double constants.
    fn from_dd(x: DoubleDouble) -> Self;
    fn to_dd(self) -> DoubleDouble;

    fn eps() -> Self;
    fn pi() -> Self;
    fn ln2() -> Self;
    fn euler_gamma() -> Self;
    fn half_ln_2pi() -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn floor(self) -> Self;
    fn round(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn powf(self, y: Self) -> Self {
        (y * self.ln()).exp()
    }
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const NAME: &'static str = "double";
    const DIGITS: u32 = 16;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_dd(x: DoubleDouble) -> Self {
        x.hi + x.lo
    }
    fn to_dd(self) -> DoubleDouble {
        DoubleDouble::new(self)
    }
    fn eps() -> Self {
        f64::EPSILON
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln2() -> Self {
        std::f64::consts::LN_2
    }
    fn euler_gamma() -> Self {
        0.5772156649015329
    }
    fn half_ln_2pi() -> Self {
        0.9189385332046728
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn exp_m1(self) -> Self {
        f64::exp_m1(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn powf(self, y: Self) -> Self {
        f64::powf(self, y)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

impl Real for DoubleDouble {
    const NAME: &'static str = "double-double";
    const DIGITS: u32 = 32;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::new(x)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn from_dd(x: DoubleDouble) -> Self {
        x
    }
    fn to_dd(self) -> DoubleDouble {
        self
    }
    fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        DoubleDouble::normalized(hi, lo)
    }
    fn eps() -> Self {
        DoubleDouble::new(DoubleDouble::EPSILON)
    }
    fn pi() -> Self {
        DoubleDouble::PI
    }
    fn ln2() -> Self {
        DoubleDouble::LN2
    }
    fn euler_gamma() -> Self {
        DoubleDouble::EULER
    }
    fn half_ln_2pi() -> Self {
        DoubleDouble::HALF_LN_2PI
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn exp_m1(self) -> Self {
        DoubleDouble::exp_m1(self)
    }
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        DoubleDouble::sin_cos(self)
    }
    fn floor(self) -> Self {
        DoubleDouble::floor(self)
    }
    fn round(self) -> Self {
        DoubleDouble::round(self)
    }
    fn powi(self, n: i32) -> Self {
        DoubleDouble::powi(self, n)
    }
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
}

/// Runtime selector for the working-precision backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => f64::NAME,
            Precision::DoubleDouble => DoubleDouble::NAME,
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "double" | "f64" => Ok(Precision::Double),
            "double-double" | "dd" => Ok(Precision::DoubleDouble),
            other => Err(format!("unknown precision backend '{other}'")),
        }
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
