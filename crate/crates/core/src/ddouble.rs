//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` of two `f64` with `|lo| <= ulp(hi)/2`,
//! giving about 106 significant bits (roughly 32 decimal digits). The basic
//! operations are built on the error-free transforms `two_sum` and
//! `two_prod`; the latter relies on a fused multiply-add.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::real::Real;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a value from two components, renormalizing them.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from(f64::NAN)
            };
        }
        // One Newton correction on the double-precision root.
        let q = self.hi.sqrt();
        let (p, e) = two_prod(q, q);
        let r = (self - Self::new(p, e)).hi;
        let (hi, lo) = quick_two_sum(q, r / (2.0 * q));
        Self { hi, lo }
    }

    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi is already an integer; the fractional part lives in lo.
            let lo = self.lo.round();
            let (hi, lo) = quick_two_sum(hi, lo);
            Self { hi, lo }
        } else if (hi - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // Tie in hi broken by the sign of lo.
            let hi = if self.lo > 0.0 { self.hi.ceil() } else { self.hi.floor() };
            Self { hi, lo: 0.0 }
        } else {
            Self { hi, lo: 0.0 }
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl From<i64> for DoubleDouble {
    fn from(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Self::new(hi, lo)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + q3
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        let (s, e) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }
}

impl Sub<f64> for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        self + (-rhs)
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        Self { hi, lo }
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self / Self::from(rhs)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Real for DoubleDouble {
    type Work = DoubleDouble;

    const NAME: &'static str = "high";

    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }
    fn from_i64(n: i64) -> Self {
        Self::from(n)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn round(self) -> Self {
        DoubleDouble::round(self)
    }
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
    fn widen(self) -> Self {
        self
    }
    fn narrow(w: Self) -> Self {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS_DD: f64 = 1e-31;

    #[test]
    fn third_times_three_is_one() {
        let third = DoubleDouble::ONE / DoubleDouble::from(3.0);
        let back = third * 3.0 - 1.0;
        assert!(back.abs().to_f64() < EPS_DD);
        // the low word carries the bits a double cannot
        assert!(third.lo() != 0.0);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let two = DoubleDouble::from(2.0);
        let r = two.sqrt();
        assert!((r * r - two).abs().to_f64() < 4.0 * EPS_DD);
        assert_eq!(DoubleDouble::ZERO.sqrt(), DoubleDouble::ZERO);
        assert!(!DoubleDouble::from(-1.0).sqrt().is_finite());
    }

    #[test]
    fn addition_keeps_tiny_parts() {
        let x = DoubleDouble::from(1.0) + 1e-20;
        assert_eq!(x.hi(), 1.0);
        assert_eq!(x.lo(), 1e-20);
        assert_eq!((x - 1.0).to_f64(), 1e-20);
    }

    #[test]
    fn ordering_uses_low_word() {
        let a = DoubleDouble::from(1.0);
        let b = a + 1e-25;
        assert!(b > a);
        assert!(-b < -a);
    }

    #[test]
    fn round_handles_split_integers() {
        let x = DoubleDouble::from(4.0) - 1e-20;
        assert_eq!(x.round().to_f64(), 4.0);
        let y = DoubleDouble::from(2.5) + 1e-20;
        assert_eq!(y.round().to_f64(), 3.0);
        let z = DoubleDouble::from(-7.0);
        assert_eq!(z.round().to_f64(), -7.0);
    }

    #[test]
    fn large_integers_are_exact() {
        let n = (1_i64 << 60) + 1;
        let x = DoubleDouble::from(n);
        assert_eq!((x - DoubleDouble::from(1_i64 << 60)).to_f64(), 1.0);
    }
}
