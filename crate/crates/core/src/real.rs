//! Scalar abstraction shared by the double and extended-precision paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::ddouble::DoubleDouble;

/// Real scalar used throughout the crate.
///
/// Implemented for `f64` and [`DoubleDouble`]. Mixed arithmetic with `f64`
/// literals is part of the bound so formulas can be written with plain
/// integer-valued constants.
pub trait Real:
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
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Arithmetic used inside the series kernel.
    type Work: Real;

    const NAME: &'static str;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn round(self) -> Self;
    fn is_finite(self) -> bool;
    fn widen(self) -> Self::Work;
    fn narrow(w: Self::Work) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
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
}

impl Real for f64 {
    type Work = DoubleDouble;

    const NAME: &'static str = "double";

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn widen(self) -> DoubleDouble {
        DoubleDouble::from(self)
    }
    fn narrow(w: DoubleDouble) -> Self {
        w.to_f64()
    }
}

/// `|x - y| / max(|x|, |y|)`, or the absolute difference when both vanish.
pub fn rel_diff<T: Real>(x: T, y: T) -> f64 {
    let d = (x - y).abs().to_f64();
    let scale = x.abs().max(y.abs()).to_f64();
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

/// True when `|x| <= tol * scale`.
pub(crate) fn negligible<T: Real>(x: T, scale: T, tol: f64) -> bool {
    x.abs() <= scale.abs() * tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_products() {
        assert_eq!(Real::powi(2.0_f64, 10), 1024.0);
        assert_eq!(Real::powi(2.0_f64, -3), 0.125);
        assert_eq!(Real::powi(3.5_f64, 0), 1.0);
        let x = DoubleDouble::from(1.5);
        assert_eq!(x.powi(4).to_f64(), 5.0625);
    }

    #[test]
    fn rel_diff_handles_zero() {
        assert_eq!(rel_diff(0.0, 0.0), 0.0);
        assert!((rel_diff(1.0, 1.0 + 1e-12) - 1e-12).abs() < 1e-15);
    }
}
