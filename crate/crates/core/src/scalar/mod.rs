//! Numeric fields the reconstruction kernels are generic over.
//!
//! [`Scalar`] is implemented for hardware `f64` and for the compensated
//! [`DoubleDouble`] type. Exact table generation uses [`Rational`] and never
//! goes through a floating type.

mod dd;
mod rational;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use dd::DoubleDouble;
pub use rational::{rat, rational_inverse, rational_solve, Rational};

/// A real-number field usable by every kernel in this crate.
///
/// Conversion from [`Rational`] must be exact whenever the value is
/// representable, and [`Scalar::epsilon`] must bound the unit roundoff.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Short backend name used in reports (`f64`, `dd`).
    const NAME: &'static str;
    /// Significant decimal digits printed for values of this field.
    const DIGITS: usize;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(self) -> f64;
    /// Exact rational value, or `None` for non-finite values.
    fn to_rational(self) -> Option<Rational>;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn epsilon() -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Real power; integral exponents take the exact repeated-product path.
    fn powf(self, e: f64) -> Self {
        if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
            self.powi(e as i32)
        } else {
            (self.ln() * Self::from_f64(e)).exp()
        }
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

    /// Scientific notation with [`Scalar::DIGITS`] significant digits.
    fn to_sci_string(self) -> String {
        match self.to_rational() {
            Some(q) => format_rational_sci(&q, Self::DIGITS),
            None => format!("{:?}", self.to_f64()),
        }
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";
    const DIGITS: usize = 17;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    fn to_rational(self) -> Option<Rational> {
        Rational::from_float(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn epsilon() -> Self {
        f64::EPSILON / 2.0
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    #[inline]
    fn max(self, other: Self) -> Self {
        f64::max(self, other)
    }
    #[inline]
    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }
    fn to_sci_string(self) -> String {
        if self.is_finite() {
            format!("{:.*e}", <Self as Scalar>::DIGITS - 1, self)
        } else {
            format!("{self}")
        }
    }
}

/// Formats an exact rational in scientific notation, rounding half away
/// from zero to `digits` significant digits.
pub fn format_rational_sci(q: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return format!("{:.*e}", digits - 1, 0.0);
    }
    let neg = q.is_negative();
    let a = q.abs();
    // Estimate the decimal exponent, then correct it exactly.
    let approx = a.to_f64().filter(|v| *v > 0.0 && v.is_finite());
    let mut exp10: i64 = match approx {
        Some(v) => v.log10().floor() as i64,
        None => (a.numer().bits() as i64 - a.denom().bits() as i64) * 30103 / 100000,
    };
    let ten = Rational::from_integer(BigInt::from(10));
    let scaled = |e: i64| -> Rational {
        if e >= 0 {
            &a / num_traits::pow(ten.clone(), e as usize)
        } else {
            &a * num_traits::pow(ten.clone(), (-e) as usize)
        }
    };
    let mut s = scaled(exp10);
    while s >= ten {
        exp10 += 1;
        s = scaled(exp10);
    }
    while s < Rational::one() {
        exp10 -= 1;
        s = scaled(exp10);
    }
    let shift = num_traits::pow(BigInt::from(10), digits - 1);
    let t = s * Rational::from_integer(shift.clone());
    let half = rat(1, 2);
    let mut m = (t + half).floor().to_integer();
    if m >= &shift * BigInt::from(10) {
        m /= BigInt::from(10);
        exp10 += 1;
    }
    let ds = m.to_string();
    let (lead, rest) = ds.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(lead);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(rest);
    }
    out.push('e');
    out.push_str(&exp10.to_string());
    out
}

/// `exp(x)` by argument halving and a Taylor series, for fields without a
/// native exponential. The series runs on `expm1` so the squarings do not
/// amplify relative error.
pub(crate) fn exp_by_halving<S: Scalar>(x: S, halvings: u32, terms: usize) -> S {
    let scale = S::from_f64((1u64 << halvings) as f64);
    let y = x / scale;
    let mut m = expm1_series(y, terms);
    let two = S::from_f64(2.0);
    for _ in 0..halvings {
        m = m * (m + two);
    }
    m + S::one()
}

/// Taylor series of `exp(y) - 1`; intended for `|y| < 0.1`.
pub(crate) fn expm1_series<S: Scalar>(y: S, terms: usize) -> S {
    let mut term = y;
    let mut sum = y;
    for n in 2..=terms {
        term = term * y / S::from_f64(n as f64);
        sum += term;
    }
    sum
}

/// Accurate `exp(x) - 1` in any field.
pub fn expm1<S: Scalar>(x: S) -> S {
    if x.abs().to_f64() < 0.5 {
        let mut m = expm1_series(x / S::from_f64(64.0), 24);
        let two = S::from_f64(2.0);
        for _ in 0..6 {
            m = m * (m + two);
        }
        m
    } else {
        x.exp() - S::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_prints_seventeen_digits() {
        assert_eq!(1.8f64.to_sci_string(), "1.8000000000000000e0");
        assert_eq!((-0.1f64).to_sci_string(), "-1.0000000000000001e-1");
    }

    #[test]
    fn sci_format_matches_std_for_f64_digits() {
        for v in [1.0, -2.5e-7, 123456.789, 9.999999999999999e22, 1e-300] {
            let q = Rational::from_float(v).unwrap();
            assert_eq!(format_rational_sci(&q, 17), format!("{:.16e}", v));
        }
    }

    #[test]
    fn sci_format_rounds_carry() {
        assert_eq!(format_rational_sci(&rat(9999, 1000), 3), "1.00e1");
        assert_eq!(format_rational_sci(&rat(-1, 3), 4), "-3.333e-1");
    }

    #[test]
    fn generic_powi_matches_f64() {
        let x = DoubleDouble::from_f64(1.5);
        assert_eq!(x.powi(5).to_f64(), 1.5f64.powi(5));
        assert_eq!(x.powi(-2).to_f64(), 1.0 / 2.25);
        assert_eq!(x.powi(0), DoubleDouble::one());
    }

    #[test]
    fn expm1_small_arguments() {
        let x = 1e-10_f64;
        assert!((expm1(x) - x.exp_m1()).abs() < 1e-25);
        let y = -0.3_f64;
        assert!((expm1(y) - y.exp_m1()).abs() < 1e-16);
    }
}
