//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64
//! values with `|lo| <= ulp(hi) / 2`, giving roughly 106 bits of mantissa.
//!
//! The building blocks are the error-free transformations `two_sum` and
//! `two_prod`; products use fused multiply-add.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::ToPrimitive;

use super::{exp_by_halving, Rational, Scalar};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: 6.931_471_805_599_453e-1,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a normalized value from an arbitrary pair.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Self::renorm(s, e)
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        if hi.is_finite() {
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    #[inline]
    pub const fn from_f64_exact(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Multiplies by `2^n` exactly (barring over/underflow).
    pub fn ldexp(self, n: i32) -> Self {
        let f = 2f64.powi(n);
        Self {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    #[inline]
    fn add_dd(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (s, e) = quick_two_sum(s, e);
        Self::renorm(s, e)
    }

    #[inline]
    fn mul_dd(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (p, e) = quick_two_sum(p, e);
        Self::renorm(p, e)
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (p, e) = quick_two_sum(p, e);
        Self::renorm(p, e)
    }

    fn div_dd(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Self { hi: q1, lo: 0.0 };
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self::renorm(q1, q2) + Self::from_f64_exact(q3)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string())
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.add_dd(rhs)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.add_dd(-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.mul_dd(rhs)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        self.div_dd(rhs)
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}
impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}
impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Scalar for DoubleDouble {
    const NAME: &'static str = "dd";
    const DIGITS: usize = 32;

    fn zero() -> Self {
        Self::ZERO
    }
    fn one() -> Self {
        Self::ONE
    }
    fn from_f64(x: f64) -> Self {
        Self::from_f64_exact(x)
    }
    fn from_rational(q: &Rational) -> Self {
        let hi = q.to_f64().unwrap_or(f64::NAN);
        match Rational::from_float(hi) {
            Some(h) => {
                let lo = (q - h).to_f64().unwrap_or(0.0);
                Self::new(hi, lo)
            }
            None => Self::from_f64_exact(hi),
        }
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn to_rational(self) -> Option<Rational> {
        Some(Rational::from_float(self.hi)? + Rational::from_float(self.lo)?)
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64_exact(self.hi.sqrt());
        }
        let y = self.hi.sqrt();
        let yy = Self::from_f64_exact(y);
        let r = self - yy * yy;
        yy + Self::from_f64_exact(r.hi / (2.0 * y))
    }
    fn exp(self) -> Self {
        if !self.hi.is_finite() || self.hi > 709.0 || self.hi < -745.0 {
            return Self::from_f64_exact(self.hi.exp());
        }
        let k = (self.hi / LN2.hi).round();
        let red = self - LN2 * Self::from_f64_exact(k);
        exp_by_halving(red, 5, 16).ldexp(k as i32)
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 || !self.hi.is_finite() {
            return Self::from_f64_exact(self.hi.ln());
        }
        let mut y = Self::from_f64_exact(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }
    fn epsilon() -> Self {
        Self::from_f64_exact(2f64.powi(-104))
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}
