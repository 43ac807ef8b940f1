//! Pochhammer symbols, gamma ratios with integer offsets and terminating
//! generalized hypergeometric series.
//!
//! Every series here terminates because one upper parameter is a
//! nonpositive integer `-m`; the sum then has exactly `m + 1` terms. Terms
//! are generated by their successive ratios and accumulated with
//! compensation. The accumulation runs in the scalar's `Work` type, which is
//! double-double for both `f64` and [`DoubleDouble`](crate::DoubleDouble), so
//! the `f64` path rounds only once at the end.

use thiserror::Error;

use crate::real::Real;

/// Distance within which a parameter is treated as an integer.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergeomError {
    #[error("unsupported non-terminating series")]
    NonTerminating,
    #[error("lower parameter {value} reaches zero at k = {pole}, before the series terminates at k = {terminates}")]
    LowerParameterPole { value: f64, pole: u32, terminates: u32 },
    #[error("gamma ratio needs x > 0 and x + k > 0 (x = {x}, k = {k})")]
    GammaArgument { x: f64, k: i32 },
}

/// `Some(m)` when `x` is within [`INTEGER_TOL`] of the nonpositive integer `-m`.
pub fn nonpositive_integer<T: Real>(x: T) -> Option<u32> {
    let r = x.round();
    let r64 = r.to_f64();
    if (x - r).abs().to_f64() < INTEGER_TOL && r64 <= 0.0 && r64 > -(u32::MAX as f64) {
        Some((-r64) as u32)
    } else {
        None
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Rising factorial `x (x+1) ... (x+k-1)`; `k = 0` gives 1.
pub fn pochhammer<T: Real>(x: T, k: u32) -> T {
    let x = x.widen();
    let mut acc = <T::Work as Real>::one();
    for j in 0..k {
        acc *= x + f64::from(j);
    }
    T::narrow(acc)
}

/// `Gamma(x + k) / Gamma(x)` as a rising product (`k >= 0`) or the reciprocal
/// of one (`k < 0`). No gamma function is evaluated.
pub fn gamma_ratio<T: Real>(x: T, k: i32) -> Result<T, HypergeomError> {
    let x64 = x.to_f64();
    if !(x64 > 0.0) || !(x64 + f64::from(k) > 0.0) {
        return Err(HypergeomError::GammaArgument { x: x64, k });
    }
    if k >= 0 {
        Ok(pochhammer(x, k as u32))
    } else {
        let shifted = x + f64::from(k);
        Ok(pochhammer(shifted, k.unsigned_abs()).recip())
    }
}

/// Parameters of `pFq(upper; lower; 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
}

/// Value of a terminating series together with the sum of term magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum<T> {
    pub value: T,
    /// `sum_k |t_k|`; `abs_sum / |value|` is the condition number of the sum.
    pub abs_sum: T,
    pub terms: u32,
}

impl<T: Real> SeriesSpec<T> {
    pub fn new(upper: impl Into<Vec<T>>, lower: impl Into<Vec<T>>) -> Self {
        Self {
            upper: upper.into(),
            lower: lower.into(),
        }
    }

    /// Termination indices contributed by each nonpositive-integer upper parameter.
    pub fn termination_indices(&self) -> Vec<u32> {
        self.upper.iter().filter_map(|&u| nonpositive_integer(u)).collect()
    }

    /// Smallest termination index `m*`, or `None` for a non-terminating series.
    pub fn termination_index(&self) -> Option<u32> {
        self.termination_indices().into_iter().min()
    }

    /// Checks termination and that no lower parameter hits a pole first.
    pub fn validate(&self) -> Result<u32, HypergeomError> {
        let m = self.termination_index().ok_or(HypergeomError::NonTerminating)?;
        self.check_lower(m)?;
        Ok(m)
    }

    fn check_lower(&self, last: u32) -> Result<(), HypergeomError> {
        for &l in &self.lower {
            if let Some(pole) = nonpositive_integer(l) {
                if pole < last {
                    return Err(HypergeomError::LowerParameterPole {
                        value: l.to_f64(),
                        pole,
                        terminates: last,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Upper parameters with terminating ones snapped to exact integers, both
/// lists sorted so that permutations produce identical arithmetic.
fn prepared<T: Real>(spec: &SeriesSpec<T>) -> (Vec<T::Work>, Vec<T::Work>) {
    let snap = |u: T| match nonpositive_integer(u) {
        Some(m) => <T::Work as Real>::from_i64(-i64::from(m)),
        None => u.widen(),
    };
    let mut upper: Vec<T::Work> = spec.upper.iter().map(|&u| snap(u)).collect();
    let mut lower: Vec<T::Work> = spec.lower.iter().map(|&l| l.widen()).collect();
    let by_value = |a: &T::Work, b: &T::Work| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
    upper.sort_by(by_value);
    lower.sort_by(by_value);
    (upper, lower)
}

fn sum_terms<W: Real>(upper: &[W], lower: &[W], x: W, last: u32) -> SeriesSum<W> {
    let mut acc = CompensatedSum::new();
    let mut abs_acc = CompensatedSum::new();
    let mut term = W::one();
    let mut terms = 0;
    for k in 0..=last {
        acc.add(term);
        abs_acc.add(term.abs());
        terms += 1;
        if k == last {
            break;
        }
        let kf = f64::from(k);
        for &u in upper {
            term *= u + kf;
        }
        // Past the terminating index; also avoids 0/0 against a lower pole at m*.
        if term == W::zero() {
            break;
        }
        for &l in lower {
            term /= l + kf;
        }
        term = term * x / (kf + 1.0);
    }
    SeriesSum {
        value: acc.value(),
        abs_sum: abs_acc.value(),
        terms,
    }
}

fn narrow_sum<T: Real>(s: SeriesSum<T::Work>) -> SeriesSum<T> {
    SeriesSum {
        value: T::narrow(s.value),
        abs_sum: T::narrow(s.abs_sum),
        terms: s.terms,
    }
}

/// `pFq(upper; lower; 1)` summed exactly up to its termination index.
pub fn hyp_terminating<T: Real>(spec: &SeriesSpec<T>) -> Result<T, HypergeomError> {
    hyp_terminating_detailed(spec).map(|s| s.value)
}

/// Like [`hyp_terminating`], also reporting the magnitude sum.
pub fn hyp_terminating_detailed<T: Real>(spec: &SeriesSpec<T>) -> Result<SeriesSum<T>, HypergeomError> {
    let m = spec.validate()?;
    let (upper, lower) = prepared(spec);
    Ok(narrow_sum::<T>(sum_terms(&upper, &lower, <T::Work as Real>::one(), m)))
}

/// Sums up to `last >= m*`; the terms past `m*` vanish identically, so the
/// result must equal [`hyp_terminating`].
pub fn hyp_terminating_to<T: Real>(spec: &SeriesSpec<T>, last: u32) -> Result<T, HypergeomError> {
    let m = spec.validate()?;
    let (upper, lower) = prepared(spec);
    let last = last.max(m);
    Ok(T::narrow(sum_terms(&upper, &lower, <T::Work as Real>::one(), last).value))
}

/// `3F2(u1, u2, u3; l1, l2; 1)`.
pub fn hyp3f2<T: Real>(upper: [T; 3], lower: [T; 2]) -> Result<T, HypergeomError> {
    hyp_terminating(&SeriesSpec::new(upper, lower))
}

/// `1F1(-m; lower; x)`.
pub fn hyp1f1_terminating<T: Real>(m: u32, lower: T, x: T) -> Result<T, HypergeomError> {
    let spec = SeriesSpec::new(vec![T::from_i64(-i64::from(m))], vec![lower]);
    spec.check_lower(m)?;
    let (upper, lower) = prepared(&spec);
    Ok(T::narrow(sum_terms(&upper, &lower, x.widen(), m).value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddouble::DoubleDouble;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(2.5, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(-3.0, 5), 0.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio(3.2, 0).unwrap(), 1.0);
        let nu = 0.866_f64;
        let x = 2.0 * nu + 1.0;
        assert!((gamma_ratio(x, 1).unwrap() - x).abs() < 1e-15);
        assert!((gamma_ratio(4.0, -2).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!(matches!(gamma_ratio(1.5, -2), Err(HypergeomError::GammaArgument { .. })));
        assert!(gamma_ratio(-0.5, 3).is_err());
    }

    #[test]
    fn upper_zero_gives_one() {
        let v = hyp3f2([0.0, 3.7, -2.0], [1.5, 1.0]).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn two_term_series() {
        // 1 + (-1)(-1)(2) / ((3)(1) 1!) = 5/3
        let v = hyp3f2([-1.0, -1.0, 2.0], [3.0, 1.0]).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
        // (-1)_2 = 0 truncates after k = 1: 1 + (-2)(-1)(2)/3 = 7/3
        let v = hyp3f2([-2.0, -1.0, 2.0], [3.0, 1.0]).unwrap();
        assert!((v - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn non_terminating_rejected() {
        let err = hyp3f2([0.5, 1.5, 2.0], [3.0, 1.0]).unwrap_err();
        assert_eq!(err, HypergeomError::NonTerminating);
        assert_eq!(err.to_string(), "unsupported non-terminating series");
    }

    #[test]
    fn lower_pole_before_termination_rejected() {
        let err = hyp3f2([-3.0, 1.0, 1.0], [-1.0, 1.0]).unwrap_err();
        assert!(matches!(err, HypergeomError::LowerParameterPole { pole: 1, terminates: 3, .. }));
        // pole at or past m* is harmless: 2F1(-2, b; -2; 1) is a finite sum
        assert!(hyp_terminating(&SeriesSpec::new(vec![-2.0, 1.5], vec![-2.0])).is_ok());
    }

    #[test]
    fn near_integer_detection() {
        assert_eq!(nonpositive_integer(-3.0 + 1e-12), Some(3));
        assert_eq!(nonpositive_integer(0.0), Some(0));
        assert_eq!(nonpositive_integer(-3.0 + 1e-6), None);
        assert_eq!(nonpositive_integer(2.0), None);
    }

    #[test]
    fn one_f_one_examples() {
        assert_eq!(hyp1f1_terminating(0, 2.5, 7.0).unwrap(), 1.0);
        let alpha = 0.3;
        let x = 1.7;
        let v = hyp1f1_terminating(1, alpha + 1.0, x).unwrap();
        assert!((v - (1.0 - x / (alpha + 1.0))).abs() < 1e-15);
        assert_eq!(hyp1f1_terminating(2, 1.0, 0.0).unwrap(), 1.0);
        assert!(hyp1f1_terminating(3, -1.0, 0.5).is_err());
    }

    #[test]
    fn termination_index_is_independent_of_bound() {
        let spec = SeriesSpec::new(vec![-3.0, -5.0, 2.4], vec![1.7, 1.0]);
        let a = hyp_terminating(&spec).unwrap();
        let b = hyp_terminating_to(&spec, 5).unwrap();
        let c = hyp_terminating_to(&spec, 40).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn double_and_high_agree() {
        let spec = SeriesSpec::new(vec![-6.0, -7.0, 8.0], vec![2.0 * 1.3 + 1.0, 1.0]);
        let d = hyp_terminating(&spec).unwrap();
        let spec_hp = SeriesSpec::new(
            spec.upper.iter().map(|&x| DoubleDouble::from(x)).collect::<Vec<_>>(),
            spec.lower.iter().map(|&x| DoubleDouble::from(x)).collect::<Vec<_>>(),
        );
        let h = hyp_terminating(&spec_hp).unwrap();
        assert!(crate::real::rel_diff(d, h.to_f64()) < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_addends() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-16).abs() < 1e-30);
    }
}
