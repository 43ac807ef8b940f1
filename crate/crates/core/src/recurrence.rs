//! Recurrences in the power `p`.
//!
//! The pair `(A_p, B_p)` obeys the first-order system
//! `(A_p, B_p)^T = S_p (A_{p-1}, B_{p-1})^T` with the transfer matrix `S_p`.
//! From it follow the upward and downward two-term steps, separated
//! three-term recurrences for `A` and `B` alone, a family of vector
//! three-term recurrences `t_{p+1} = M_p t_p + N_p t_{p-1}` valid whenever
//! `S_{p+1} = M_p + N_p S_p^{-1}`, and the reflection `p -> -p-3`.
//!
//! These routes serve as cross-checks on the closed forms; `C_p` is never
//! carried through a recurrence but rebuilt from the linear relation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::MomentTriple;
use crate::hypergeom::{gamma_ratio, HypergeomError};
use crate::params::DerivedParams;
use crate::real::{negligible, Real};

/// Relative size below which a denominator counts as vanishing.
pub const DENOMINATOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecurrenceError {
    #[error("S_p is undefined at p = -1 (division by p + 1)")]
    TransferUndefined,
    #[error("upward step from p = {p} divides by p + 2 = 0")]
    SingularUpStep { p: i32 },
    #[error("singular downward step at p = 0")]
    SingularDownStep,
    #[error("resonant denominator 4nu^2 - p^2 at p = {p}")]
    Resonant { p: i32 },
    #[error("target power p = {p} is inadmissible")]
    Inadmissible { p: i32 },
    #[error("b-chain breakdown at p = {p}")]
    AChainBreakdown { p: i32 },
    #[error("c-chain breakdown at p = {p}")]
    BChainBreakdown { p: i32 },
    #[error("{family} family breaks down at p = {p}: {entry} vanishes")]
    FamilyBreakdown { family: VectorFamily, entry: &'static str, p: i32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("reflection from p = {p} is inadmissible (needs 2nu - p - 2 > 0)")]
    ReflectionInadmissible { p: i32 },
    #[error("reflection from p = -2 divides by p + 2 = 0")]
    ReflectionSingular,
    #[error(transparent)]
    Series(#[from] HypergeomError),
}

/// A 2x2 matrix acting on `(A, B)` pairs, with a cached determinant.
///
/// The cache holds either `ad - bc` or a closed-form value supplied by the
/// constructor; [`TransferMatrix::det_residual`] measures their agreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    det: T,
}

impl<T: Real> TransferMatrix<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d, det: a * d - b * c }
    }

    pub fn with_det(a: T, b: T, c: T, d: T, det: T) -> Self {
        Self { a, b, c, d, det }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn diagonal(x: T, y: T) -> Self {
        Self::new(x, T::zero(), T::zero(), y)
    }

    pub fn anti_diagonal(x: T, y: T) -> Self {
        Self::new(T::zero(), x, y, T::zero())
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> T {
        self.det
    }

    pub fn entrywise_det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// `|det - (ad - bc)|` relative to `max(|ad|, |bc|)`.
    pub fn det_residual(&self) -> f64 {
        let ad = self.a * self.d;
        let bc = self.b * self.c;
        let diff = (self.det - (ad - bc)).abs();
        let scale = ad.abs().max(bc.abs());
        if scale == T::zero() {
            diff.to_f64()
        } else {
            (diff / scale).to_f64()
        }
    }

    pub fn max_abs(&self) -> T {
        self.entries().iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Inverse through the cached determinant, which for `S_p` avoids the
    /// cancellation in `ad - bc`.
    pub fn inverse(&self) -> Result<Self, RecurrenceError> {
        let det = self.det;
        if det == T::zero() || !det.is_finite() {
            return Err(RecurrenceError::SingularMatrix);
        }
        Ok(Self::with_det(self.d / det, -self.b / det, -self.c / det, self.a / det, det.recip()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::with_det(self.a * s, self.b * s, self.c * s, self.d * s, self.det * s * s)
    }

    pub fn apply(&self, v: (T, T)) -> (T, T) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Largest entrywise difference relative to the largest entry of either matrix.
    pub fn max_rel_diff(&self, o: &Self) -> f64 {
        let scale = self.max_abs().max(o.max_abs());
        let diff = self
            .entries()
            .iter()
            .zip(o.entries())
            .fold(T::zero(), |m, (x, y)| m.max((*x - y).abs()));
        if scale == T::zero() {
            diff.to_f64()
        } else {
            (diff / scale).to_f64()
        }
    }

    pub fn widen(&self) -> TransferMatrix<T::Work> {
        TransferMatrix::with_det(self.a.widen(), self.b.widen(), self.c.widen(), self.d.widen(), self.det.widen())
    }

    pub fn narrow(w: &TransferMatrix<T::Work>) -> Self {
        Self::with_det(T::narrow(w.a), T::narrow(w.b), T::narrow(w.c), T::narrow(w.d), T::narrow(w.det))
    }

    pub fn to_f64(&self) -> TransferMatrix<f64> {
        TransferMatrix::with_det(self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64(), self.det.to_f64())
    }
}

/// Closed-form `det S_p = (4nu^2 - p^2) p / ((2 a beta)^2 (p + 1))`.
pub fn s_matrix_det<T: Real>(dp: &DerivedParams<T>, p: i32) -> T {
    let pr = f64::from(p);
    let scale = dp.a * dp.beta * 2.0;
    (dp.nu * dp.nu * 4.0 - pr * pr) * pr / (scale * scale * (pr + 1.0))
}

/// The transfer matrix `S_p` carrying `(A_{p-1}, B_{p-1})` to `(A_p, B_p)`.
pub fn s_matrix<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<TransferMatrix<T>, RecurrenceError> {
    if p == -1 {
        return Err(RecurrenceError::TransferUndefined);
    }
    let DerivedParams { mu, nu, epsilon: e, beta, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let p1 = pr + 1.0;
    let a2 = dp.a * dp.a;
    let den = a2 * beta * mu * (4.0 * p1);
    let two_ke = k * e * 2.0;
    let a = -((nu * nu * e * 4.0 + k * (2.0 * p1) + e * pr * (two_ke + p1)) * pr) / den;
    let b = (mu * mu * (4.0 * p1) + (two_ke + pr) * (two_ke + p1) * pr) / den;
    let c = -((nu * nu * 4.0 + two_ke * (2.0 * pr + 1.0) + e * e * (pr * p1)) * pr) / den;
    let d = (mu * mu * e * (4.0 * p1) + (two_ke + pr) * (k * 2.0 + e * p1) * pr) / den;
    Ok(TransferMatrix::with_det(a, b, c, d, s_matrix_det(dp, p)))
}

fn ensure_direct<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(), RecurrenceError> {
    if dp.admissibility(p).is_direct() {
        Ok(())
    } else {
        Err(RecurrenceError::Inadmissible { p })
    }
}

/// `(A_p, B_p) -> (A_{p+1}, B_{p+1})` by the two-term upward relations.
pub fn step_up<T: Real>(dp: &DerivedParams<T>, p: i32, t: &MomentTriple<T>) -> Result<MomentTriple<T>, RecurrenceError> {
    if p == -2 {
        return Err(RecurrenceError::SingularUpStep { p });
    }
    ensure_direct(dp, p + 1)?;
    let DerivedParams { mu, nu, epsilon: e, beta, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let (p1, p2) = (pr + 1.0, pr + 2.0);
    let two_ke = k * e * 2.0;
    let a2 = dp.a * dp.a;
    let den = a2 * beta * mu * (4.0 * p2);
    let aa = -((nu * nu * e * 4.0 + k * (2.0 * p2) + e * p1 * (two_ke + p2)) * p1);
    let ab = mu * mu * (4.0 * p2) + (two_ke + p1) * (two_ke + p2) * p1;
    let ba = -((nu * nu * 4.0 + two_ke * (2.0 * pr + 3.0) + e * e * (p1 * p2)) * p1);
    let bb = mu * mu * e * (4.0 * p2) + (two_ke + p1) * (k * 2.0 + e * p2) * p1;
    let a_next = (aa * t.a + ab * t.b) / den;
    let b_next = (ba * t.a + bb * t.b) / den;
    Ok(MomentTriple::from_pair(dp, p + 1, a_next, b_next))
}

fn check_down<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<T, RecurrenceError> {
    let pr = f64::from(p);
    let four_nu2 = dp.nu * dp.nu * 4.0;
    let res = four_nu2 - pr * pr;
    if negligible(res, four_nu2.max(T::from_f64(pr * pr)), DENOMINATOR_TOL) {
        return Err(RecurrenceError::Resonant { p });
    }
    Ok(res)
}

/// `B_{p-1}` alone from `(A_p, B_p)`; unlike `A_{p-1}` it stays finite at `p = 0`.
pub fn step_down_b<T: Real>(dp: &DerivedParams<T>, p: i32, a: T, b: T) -> Result<T, RecurrenceError> {
    let res = check_down(dp, p)?;
    let DerivedParams { mu, nu, epsilon: e, beta, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let p1 = pr + 1.0;
    let two_ke = k * e * 2.0;
    let den = mu * res / beta;
    let ca = nu * nu * 4.0 + two_ke * (2.0 * pr + 1.0) + e * e * (pr * p1);
    let cb = nu * nu * e * 4.0 + k * (2.0 * p1) + e * pr * (two_ke + p1);
    Ok((ca * a - cb * b) / den)
}

/// `(A_p, B_p) -> (A_{p-1}, B_{p-1})` by the two-term downward relations.
pub fn step_down<T: Real>(dp: &DerivedParams<T>, p: i32, t: &MomentTriple<T>) -> Result<MomentTriple<T>, RecurrenceError> {
    if p == 0 {
        return Err(RecurrenceError::SingularDownStep);
    }
    let res = check_down(dp, p)?;
    ensure_direct(dp, p - 1)?;
    let DerivedParams { mu, epsilon: e, beta, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let p1 = pr + 1.0;
    let two_ke = k * e * 2.0;
    let den = mu * res * pr / beta;
    let ca = mu * mu * e * (4.0 * p1) + (two_ke + pr) * (k * 2.0 + e * p1) * pr;
    let cb = mu * mu * (4.0 * p1) + (two_ke + pr) * (two_ke + p1) * pr;
    let a_prev = (ca * t.a - cb * t.b) / den;
    let b_prev = step_down_b(dp, p, t.a, t.b)?;
    Ok(MomentTriple::from_pair(dp, p - 1, a_prev, b_prev))
}

/// `B_{-1}` read off both rows of `(1, epsilon)^T = S_0 (A_{-1}, B_{-1})^T`.
///
/// `S_0` has a vanishing first column, so each row alone determines `B_{-1}`.
pub fn b_minus_one_from_transfer<T: Real>(dp: &DerivedParams<T>) -> Result<(T, T), RecurrenceError> {
    let s0 = s_matrix(dp, 0)?;
    Ok((s0.b.recip(), dp.epsilon / s0.d))
}

/// Coefficients of the quartic `P(p)`, constant term first.
pub fn a_chain_polynomial_coefficients<T: Real>(dp: &DerivedParams<T>) -> [T; 5] {
    let k = dp.kappa_r();
    let e = dp.epsilon;
    let nu2 = dp.nu * dp.nu;
    let (k2, e2, e3) = (k * k, e * e, e * e * e);
    [
        k2 * e3 * 4.0 + k2 * e * 8.0 + k * e2 * 4.0 - k * 4.0 - nu2 * e * 12.0,
        k2 * e3 * 12.0 + k2 * e * 20.0 + k * e2 * 16.0 - k * 10.0 - nu2 * e * 20.0,
        k2 * e3 * 8.0 + k2 * e * 8.0 + k * e2 * 20.0 - k * 4.0 - nu2 * e * 8.0 + e * 3.0,
        k * e2 * 8.0 + e * 5.0,
        e * 2.0,
    ]
}

/// Coefficients of the cubic `Q(p)`, constant term first.
pub fn b_chain_polynomial_coefficients<T: Real>(dp: &DerivedParams<T>) -> [T; 4] {
    let k = dp.kappa_r();
    let e = dp.epsilon;
    let nu2 = dp.nu * dp.nu;
    let e2 = e * e;
    [
        nu2 * 12.0 + e2 * 2.0 + k * e * 6.0 - 2.0,
        nu2 * 8.0 + e2 * 7.0 + k * e * 16.0 - 4.0,
        e2 * 7.0 + k * e * 8.0 - 2.0,
        e2 * 2.0,
    ]
}

fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

pub fn a_chain_polynomial<T: Real>(dp: &DerivedParams<T>, p: T) -> T {
    horner(&a_chain_polynomial_coefficients(dp), p)
}

pub fn b_chain_polynomial<T: Real>(dp: &DerivedParams<T>, p: T) -> T {
    horner(&b_chain_polynomial_coefficients(dp), p)
}

/// Coefficients `(alpha, gamma)` with `A_{p+1} = alpha A_p + gamma A_{p-1}`, explicit form.
pub fn three_term_a_coefficients<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), RecurrenceError> {
    if p == -2 {
        return Err(RecurrenceError::SingularUpStep { p });
    }
    let DerivedParams { mu, nu, a, beta, epsilon: e, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let (p1, p2) = (pr + 1.0, pr + 2.0);
    let two_ke = k * e * 2.0;
    let left = mu * mu * (4.0 * p1);
    let right = (two_ke + pr) * (two_ke + p1) * pr;
    let den = left + right;
    if negligible(den, left.abs().max(right.abs()), DENOMINATOR_TOL) {
        return Err(RecurrenceError::AChainBreakdown { p });
    }
    let scale = a * beta * 2.0;
    let current = mu * a_chain_polynomial(dp, T::from_f64(pr)) / (a * a * beta * den * p2);
    let next_b = mu * mu * (4.0 * p2) + (two_ke + p1) * (two_ke + p2) * p1;
    let previous = -((nu * nu * 4.0 - pr * pr) * next_b * pr) / (scale * scale * den * p2);
    Ok((current, previous))
}

/// Coefficients `(alpha, gamma)` with `B_{p+1} = alpha B_p + gamma B_{p-1}`, explicit form.
pub fn three_term_b_coefficients<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), RecurrenceError> {
    if p == -2 {
        return Err(RecurrenceError::SingularUpStep { p });
    }
    let DerivedParams { mu, nu, a, beta, epsilon: e, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let (p1, p2) = (pr + 1.0, pr + 2.0);
    let two_ke = k * e * 2.0;
    let terms = [nu * nu * 4.0, two_ke * (2.0 * pr + 1.0), e * e * (pr * p1)];
    let den = terms[0] + terms[1] + terms[2];
    let scale_terms = terms.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if negligible(den, scale_terms, DENOMINATOR_TOL) {
        return Err(RecurrenceError::BChainBreakdown { p });
    }
    let scale = a * beta * 2.0;
    let current = e * mu * b_chain_polynomial(dp, T::from_f64(pr)) / (a * a * beta * den * p2);
    let next_c = nu * nu * 4.0 + two_ke * (2.0 * pr + 3.0) + e * e * (p1 * p2);
    let previous = -((nu * nu * 4.0 - pr * pr) * next_c * p1) / (scale * scale * den * p2);
    Ok((current, previous))
}

fn guard<T: Real>(x: T, scale: T, err: RecurrenceError) -> Result<T, RecurrenceError> {
    if negligible(x, scale, DENOMINATOR_TOL) {
        Err(err)
    } else {
        Ok(x)
    }
}

/// Separated `A` coefficients built from the entries of `S_p` and `S_{p+1}`.
pub fn three_term_a_generic_from<T: Real>(
    s: &TransferMatrix<T>,
    s_next: &TransferMatrix<T>,
    p: i32,
) -> Result<(T, T), RecurrenceError> {
    let b = guard(s.b, s.max_abs(), RecurrenceError::AChainBreakdown { p })?;
    let ratio = s_next.b / b;
    Ok((s_next.a + ratio * s.d, -(ratio * s.det())))
}

/// Separated `B` coefficients built from the entries of `S_p` and `S_{p+1}`.
pub fn three_term_b_generic_from<T: Real>(
    s: &TransferMatrix<T>,
    s_next: &TransferMatrix<T>,
    p: i32,
) -> Result<(T, T), RecurrenceError> {
    let c = guard(s.c, s.max_abs(), RecurrenceError::BChainBreakdown { p })?;
    let ratio = s_next.c / c;
    Ok((s_next.d + ratio * s.a, -(ratio * s.det())))
}

pub fn three_term_a_generic<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), RecurrenceError> {
    three_term_a_generic_from(&s_matrix(dp, p)?, &s_matrix(dp, p + 1)?, p)
}

pub fn three_term_b_generic<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), RecurrenceError> {
    three_term_b_generic_from(&s_matrix(dp, p)?, &s_matrix(dp, p + 1)?, p)
}

/// `A_{p+1}` from `A_p` and `A_{p-1}` alone.
pub fn three_term_a<T: Real>(dp: &DerivedParams<T>, p: i32, a_p: T, a_prev: T) -> Result<T, RecurrenceError> {
    let (cur, prev) = three_term_a_coefficients(dp, p)?;
    Ok(cur * a_p + prev * a_prev)
}

/// `B_{p+1}` from `B_p` and `B_{p-1}` alone.
pub fn three_term_b<T: Real>(dp: &DerivedParams<T>, p: i32, b_p: T, b_prev: T) -> Result<T, RecurrenceError> {
    let (cur, prev) = three_term_b_coefficients(dp, p)?;
    Ok(cur * b_p + prev * b_prev)
}

/// Choices of `N_p` in `t_{p+1} = M_p t_p + N_p t_{p-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorFamily {
    /// Diagonal `M`, diagonal `N`; divides by `b_p`, `c_p`.
    DiagBc,
    /// Diagonal `M`, off-diagonal `N`; divides by `a_p`, `d_p`.
    DiagAdOffdiag,
    /// Off-diagonal `M`, diagonal `N`; divides by `d_p`, `a_p`.
    OffdiagAd,
    /// Off-diagonal `M`, off-diagonal `N`; divides by `c_p`, `b_p`.
    OffdiagBc,
}

impl VectorFamily {
    pub const ALL: [VectorFamily; 4] = [
        VectorFamily::DiagBc,
        VectorFamily::DiagAdOffdiag,
        VectorFamily::OffdiagAd,
        VectorFamily::OffdiagBc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VectorFamily::DiagBc => "diag-bc",
            VectorFamily::DiagAdOffdiag => "diag-ad-offdiag",
            VectorFamily::OffdiagAd => "offdiag-ad",
            VectorFamily::OffdiagBc => "offdiag-bc",
        }
    }
}

impl fmt::Display for VectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(M_p, N_p)` of a family from `S_p` and `S_{p+1}`.
pub fn family_matrices_from<T: Real>(
    family: VectorFamily,
    s: &TransferMatrix<T>,
    s1: &TransferMatrix<T>,
    p: i32,
) -> Result<(TransferMatrix<T>, TransferMatrix<T>), RecurrenceError> {
    let scale = s.max_abs();
    let g = |x: T, entry: &'static str| guard(x, scale, RecurrenceError::FamilyBreakdown { family, entry, p });
    let delta = s.det();
    Ok(match family {
        VectorFamily::DiagBc => {
            let (b, c) = (g(s.b, "b_p")?, g(s.c, "c_p")?);
            (
                TransferMatrix::diagonal(s1.a + s1.b * s.d / b, s1.d + s1.c * s.a / c),
                TransferMatrix::diagonal(-(delta * s1.b / b), -(delta * s1.c / c)),
            )
        }
        VectorFamily::DiagAdOffdiag => {
            let (a, d) = (g(s.a, "a_p")?, g(s.d, "d_p")?);
            (
                TransferMatrix::diagonal(s1.a + s1.b * s.c / a, s1.d + s1.c * s.b / d),
                TransferMatrix::anti_diagonal(delta * s1.b / a, delta * s1.c / d),
            )
        }
        VectorFamily::OffdiagAd => {
            let (a, d) = (g(s.a, "a_p")?, g(s.d, "d_p")?);
            (
                TransferMatrix::anti_diagonal(s1.b + s1.a * s.b / d, s1.c + s1.d * s.c / a),
                TransferMatrix::diagonal(delta * s1.a / d, delta * s1.d / a),
            )
        }
        VectorFamily::OffdiagBc => {
            let (b, c) = (g(s.b, "b_p")?, g(s.c, "c_p")?);
            (
                TransferMatrix::anti_diagonal(s1.b + s1.a * s.a / c, s1.c + s1.d * s.d / b),
                TransferMatrix::anti_diagonal(-(delta * s1.a / c), -(delta * s1.d / b)),
            )
        }
    })
}

pub fn family_matrices<T: Real>(
    family: VectorFamily,
    dp: &DerivedParams<T>,
    p: i32,
) -> Result<(TransferMatrix<T>, TransferMatrix<T>), RecurrenceError> {
    family_matrices_from(family, &s_matrix(dp, p)?, &s_matrix(dp, p + 1)?, p)
}

/// `(A_{p+1}, B_{p+1})` from `(A_p, B_p)` and `(A_{p-1}, B_{p-1})` through a family.
pub fn vector_three_term<T: Real>(
    family: VectorFamily,
    dp: &DerivedParams<T>,
    p: i32,
    current: (T, T),
    previous: (T, T),
) -> Result<(T, T), RecurrenceError> {
    let (m, n) = family_matrices(family, dp, p)?;
    let x = m.apply(current);
    let y = n.apply(previous);
    Ok((x.0 + y.0, x.1 + y.1))
}

/// `t_{p+1} = (S_{p+1} - N S_p^{-1}) t_p + N t_{p-1}` for an arbitrary `N`.
pub fn general_vector_step<T: Real>(
    s: &TransferMatrix<T>,
    s_next: &TransferMatrix<T>,
    n: &TransferMatrix<T>,
    current: (T, T),
    previous: (T, T),
) -> Result<(T, T), RecurrenceError> {
    let m = s_next.add(&n.mul(&s.inverse()?).scale(-T::one()));
    let x = m.apply(current);
    let y = n.apply(previous);
    Ok((x.0 + y.0, x.1 + y.1))
}

/// `Gamma(2nu - p - 2) / Gamma(2nu + p + 3)`.
pub fn reflection_gamma_factor<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<T, HypergeomError> {
    gamma_ratio(dp.nu * 2.0 + f64::from(p) + 3.0, -(2 * p + 5))
}

/// Moments at `-p-3` from those at `p`.
pub fn reflect<T: Real>(dp: &DerivedParams<T>, p: i32, t: &MomentTriple<T>) -> Result<MomentTriple<T>, RecurrenceError> {
    if p == -2 {
        return Err(RecurrenceError::ReflectionSingular);
    }
    if !dp.admissibility(p).is_reflectable() {
        return Err(RecurrenceError::ReflectionInadmissible { p });
    }
    let DerivedParams { nu, epsilon: e, a, beta, .. } = *dp;
    let k = dp.kappa_r();
    let pr = f64::from(p);
    let (p1, p2, p3) = (pr + 1.0, pr + 2.0, 2.0 * pr + 3.0);
    let factor = (a * beta * 2.0).powi(2 * p + 3) * reflection_gamma_factor(dp, p)?;
    let nu2 = nu * nu * 4.0;
    let ek = e * k * 2.0;
    let a_ref = factor
        * (-((nu2 + ek * p3 - p2 * p2) * p1 / p2) * t.a + k * (e * k * 2.0 - 1.0) * (2.0 * p3) / p2 * t.b);
    let b_ref = factor * (e * (p1 * p3) * t.a + (nu2 - ek * p3 - p1 * p1) * t.b);
    let target = -p - 3;
    Ok(MomentTriple::from_pair(dp, target, a_ref, b_ref))
}
