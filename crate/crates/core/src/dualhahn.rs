//! Dual Hahn structure of the moment recurrences.
//!
//! The transformation `(X_p, Y_p)^T = T_p (A_p, B_p)^T` maps the moments onto
//! the two series of the traditional form. In the new variables the transfer
//! matrix `S~_p = T_p S_p T_{p-1}^{-1}` is simple, and each of `X_p`, `Y_p`
//! obeys the difference equation of a dual Hahn polynomial on the quadratic
//! lattice `x(s) = s(s + 1)` with `s = p`.

use thiserror::Error;

use crate::closedform::MomentTriple;
use crate::hypergeom::{gamma_ratio, hyp1f1_terminating, hyp3f2, pochhammer, HypergeomError};
use crate::params::DerivedParams;
use crate::real::{negligible, Real};
use crate::recurrence::{RecurrenceError, TransferMatrix, DENOMINATOR_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DualHahnError {
    #[error("transformation singular: mu^2 - a^2 kappa^2 vanishes")]
    SingularTransform,
    #[error("transformed step at p = 0 divides by p")]
    SingularStep,
    #[error("2nu + p vanishes at p = {p}")]
    Resonant { p: i32 },
    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Series(#[from] HypergeomError),
}

/// Degree and lattice parameters of `w_m^(c)(s(s+1), a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualHahnParams<T = f64> {
    pub m: u32,
    pub a: T,
    pub b: T,
    pub c: T,
    pub s: T,
}

impl<T: Real> DualHahnParams<T> {
    /// The special case `a = b = 0` used by the moment series.
    pub fn special(m: u32, c: T, s: T) -> Self {
        Self {
            m,
            a: T::zero(),
            b: T::zero(),
            c,
            s,
        }
    }

    pub fn at(&self, s: T) -> Self {
        Self { s, ..*self }
    }
}

/// `w_m^(c)(s(s+1), a, b) = (1+a-b)_m (1+a+c)_m / m! * 3F2(-m, a-s, a+s+1; 1+a-b, 1+a+c; 1)`.
pub fn dual_hahn<T: Real>(w: &DualHahnParams<T>) -> Result<T, DualHahnError> {
    let l1 = w.a - w.b + 1.0;
    let l2 = w.a + w.c + 1.0;
    let upper = [T::from_i64(-i64::from(w.m)), w.a - w.s, w.a + w.s + 1.0];
    let series = hyp3f2(upper, [l1, l2])?;
    let prefactor = pochhammer(l1, w.m) * pochhammer(l2, w.m) / pochhammer(T::one(), w.m);
    Ok(prefactor * series)
}

/// `L_m^alpha(x) = (alpha+1)_m / m! * 1F1(-m; alpha+1; x)`.
pub fn laguerre<T: Real>(m: u32, alpha: T, x: T) -> Result<T, DualHahnError> {
    let series = hyp1f1_terminating(m, alpha + 1.0, x)?;
    Ok(pochhammer(alpha + 1.0, m) / pochhammer(T::one(), m) * series)
}

fn lattice<T: Real>(s: T) -> T {
    s * (s + 1.0)
}

/// The three additive terms of the dual Hahn difference equation at `s`,
/// for values `y(s-1)`, `y(s)`, `y(s+1)` and eigenvalue `lambda`.
pub fn dual_hahn_terms<T: Real>(y_prev: T, y_curr: T, y_next: T, w: &DualHahnParams<T>, lambda: T) -> [T; 3] {
    let s = w.s;
    let sigma = (s - w.a) * (s + w.b) * (s - w.c);
    let sigma_reflected = (w.a + s + 1.0) * (w.b - s - 1.0) * (w.c + s + 1.0);
    let forward = lattice(s + 1.0) - lattice(s);
    let backward = lattice(s) - lattice(s - 1.0);
    let backward_mid = lattice(s + 0.5) - lattice(s - 0.5);
    [
        sigma_reflected * backward * y_next,
        sigma * forward * y_prev,
        (lambda * forward * backward * backward_mid - sigma_reflected * backward - sigma * forward) * y_curr,
    ]
}

/// Residual of the difference equation normalized by its largest term.
pub fn dual_hahn_residual<T: Real>(y_prev: T, y_curr: T, y_next: T, w: &DualHahnParams<T>, lambda: T) -> f64 {
    let terms = dual_hahn_terms(y_prev, y_curr, y_next, w, lambda);
    let scale = terms.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let sum = terms[0] + terms[1] + terms[2];
    if scale == T::zero() {
        sum.abs().to_f64()
    } else {
        (sum.abs() / scale).to_f64()
    }
}

/// `(2 a beta)^p Gamma(2nu+1) / Gamma(2nu+p+1)`.
fn transform_scale<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<T, HypergeomError> {
    Ok((dp.a * dp.beta * 2.0).powi(p) / gamma_ratio(dp.nu * 2.0 + 1.0, p)?)
}

fn coupling_sums<T: Real>(dp: &DerivedParams<T>) -> Result<(T, T), DualHahnError> {
    let ak = dp.a * dp.kappa_r();
    let (plus, minus) = (dp.mu + ak, dp.mu - ak);
    let scale = dp.mu + ak.abs();
    if negligible(plus, scale, DENOMINATOR_TOL) || negligible(minus, scale, DENOMINATOR_TOL) {
        return Err(DualHahnError::SingularTransform);
    }
    Ok((plus, minus))
}

/// The matrix `T_p` taking `(A_p, B_p)` to `(X_p, Y_p)`, with the closed-form determinant cached.
///
/// `mu^2 - a^2 kappa^2` vanishes identically for `n = 0`, so `T_p` exists only for `n >= 1`.
pub fn transform_t<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<TransferMatrix<T>, DualHahnError> {
    let (plus, minus) = coupling_sums(dp)?;
    let DerivedParams { mu, a, epsilon: e, .. } = *dp;
    let k = dp.kappa_r();
    let p1 = f64::from(p) + 1.0;
    let scale = transform_scale(dp, p)?;
    let f = scale / (a * a * 2.0);
    let rb = a * (k * 2.0 + e * p1);
    let ra = a * (e * k * 2.0 + p1);
    let det = scale * scale * mu * p1 / (a * plus * minus);
    Ok(TransferMatrix::with_det(
        f * (rb + mu * 2.0) / plus,
        -(f * (ra + e * mu * 2.0) / plus),
        -(f * (rb - mu * 2.0) / minus),
        f * (ra - e * mu * 2.0) / minus,
        det,
    ))
}

/// `S~_p` in closed form, with `det S~_p = (2nu - p) / (2nu + p)` cached.
pub fn transformed_transfer<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<TransferMatrix<T>, DualHahnError> {
    if p == 0 {
        return Err(DualHahnError::SingularStep);
    }
    let DerivedParams { mu, a, epsilon: e, nu, .. } = *dp;
    let pr = f64::from(p);
    let two_nu = nu * 2.0;
    if negligible(two_nu + pr, two_nu.max(T::from_f64(pr.abs())), DENOMINATOR_TOL) {
        return Err(DualHahnError::Resonant { p });
    }
    let gap = dp.coupling_gap() * 2.0;
    let quad = a * a * (pr * pr);
    let lin = a * e * mu * (2.0 * pr);
    let den = a * a * pr * (two_nu + pr);
    Ok(TransferMatrix::with_det(
        (-quad + lin - gap) / den,
        gap / den,
        -gap / den,
        (quad + lin + gap) / den,
        (two_nu - pr) / (two_nu + pr),
    ))
}

/// `T_p S_p T_{p-1}^{-1}` entry by entry, dividing by the cached `det T_{p-1}`.
pub fn similarity_product<T: Real>(
    t: &TransferMatrix<T>,
    s: &TransferMatrix<T>,
    t_prev: &TransferMatrix<T>,
) -> TransferMatrix<T> {
    let (al, be, ga, de) = (t.a, t.b, t.c, t.d);
    let (al0, be0, ga0, de0) = (t_prev.a, t_prev.b, t_prev.c, t_prev.d);
    let det_prev = t_prev.det();
    let a = (al * de0 * s.a - al * ga0 * s.b + be * de0 * s.c - be * ga0 * s.d) / det_prev;
    let b = (-(al * be0 * s.a) + al * al0 * s.b - be * be0 * s.c + be * al0 * s.d) / det_prev;
    let c = (ga * de0 * s.a - ga * ga0 * s.b + de * de0 * s.c - de * ga0 * s.d) / det_prev;
    let d = (-(ga * be0 * s.a) + ga * al0 * s.b - de * be0 * s.c + de * al0 * s.d) / det_prev;
    TransferMatrix::with_det(a, b, c, d, s.det() * t.det() / det_prev)
}

/// `S~_p` computed as the similarity product rather than in closed form.
///
/// `S_p` is close to singular for weakly bound states, and the product then
/// cancels several digits, so the whole route runs in the working precision.
pub fn transformed_transfer_via_similarity<T: Real>(
    dp: &DerivedParams<T>,
    p: i32,
) -> Result<TransferMatrix<T>, DualHahnError> {
    let w = dp.widen();
    let s = crate::recurrence::s_matrix(&w, p)?;
    Ok(TransferMatrix::narrow(&transformed_transfer_from(&w, &s, p)?))
}

/// `T_p S_p T_{p-1}^{-1}` for a caller-supplied `S_p`.
pub fn transformed_transfer_from<T: Real>(
    dp: &DerivedParams<T>,
    s: &TransferMatrix<T>,
    p: i32,
) -> Result<TransferMatrix<T>, DualHahnError> {
    Ok(similarity_product(&transform_t(dp, p)?, s, &transform_t(dp, p - 1)?))
}

/// The series pair `(X_p, Y_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HahnPair<T = f64> {
    pub p: i32,
    pub x: T,
    pub y: T,
}

impl<T: Real> HahnPair<T> {
    pub fn initial() -> Self {
        Self {
            p: 0,
            x: T::one(),
            y: T::one(),
        }
    }
}

/// One step `(X_{p-1}, Y_{p-1}) -> (X_p, Y_p)` of the transformed system.
pub fn hahn_step<T: Real>(dp: &DerivedParams<T>, prev: &HahnPair<T>) -> Result<HahnPair<T>, DualHahnError> {
    let p = prev.p + 1;
    let (x, y) = transformed_transfer(dp, p)?.apply((prev.x, prev.y));
    Ok(HahnPair { p, x, y })
}

/// `(X_p, Y_p)` by iterating [`hahn_step`] from `(1, 1)` at `p = 0`.
pub fn hahn_pair_iterated<T: Real>(dp: &DerivedParams<T>, p: u32) -> Result<HahnPair<T>, DualHahnError> {
    let mut pair = HahnPair::initial();
    for _ in 0..p {
        pair = hahn_step(dp, &pair)?;
    }
    Ok(pair)
}

/// `(X_p, Y_p)` summed directly.
pub fn hahn_pair_direct<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<HahnPair<T>, DualHahnError> {
    let (x, y) = crate::closedform::traditional_series(dp, p)?;
    Ok(HahnPair { p, x, y })
}

/// `(X_p, Y_p) = T_p (A_p, B_p)`.
pub fn hahn_pair_from_moments<T: Real>(dp: &DerivedParams<T>, t: &MomentTriple<T>) -> Result<HahnPair<T>, DualHahnError> {
    let (x, y) = transform_t(dp, t.p)?.apply((t.a, t.b));
    Ok(HahnPair { p: t.p, x, y })
}

/// Largest entrywise gap between the two sides of the matrix identity behind
/// the closed form of `S~_p`, relative to the largest entry on either side.
///
/// Inputs are `epsilon`, `kappa`, `nu` and a real `p`; `a^2 = 1 - epsilon^2`
/// and `mu^2 = kappa^2 - nu^2` are formed internally, so the spectral relation
/// between them is not assumed.
pub fn matrix_identity_residual<T: Real>(epsilon: T, kappa: T, nu: T, p: T) -> Result<f64, DualHahnError> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(DualHahnError::Degenerate("epsilon must lie in (0, 1)"));
    }
    if !(kappa * kappa > nu * nu) {
        return Err(DualHahnError::Degenerate("needs kappa^2 > nu^2"));
    }
    let e = epsilon;
    let k = kappa;
    let a = (-(e * e) + 1.0).sqrt();
    let mu = (k * k - nu * nu).sqrt();
    let ak = a * k;
    let (plus, minus) = (mu + ak, mu - ak);
    let scale = mu + ak.abs();
    if negligible(plus, scale, DENOMINATOR_TOL) || negligible(minus, scale, DENOMINATOR_TOL) {
        return Err(DualHahnError::Degenerate("mu +- a kappa vanishes"));
    }
    let p1 = p + 1.0;
    let two_ek = e * k * 2.0;
    let nu2 = nu * nu * 4.0;

    let left = TransferMatrix::new(
        (a * (k * 2.0 + e * p1) + mu * 2.0) / plus,
        -((a * (two_ek + p1) + e * mu * 2.0) / plus),
        -((a * (k * 2.0 + e * p1) - mu * 2.0) / minus),
        (a * (two_ek + p1) - e * mu * 2.0) / minus,
    );
    let middle = TransferMatrix::new(
        -(p * (nu2 * e + k * 2.0 * p1 + e * p * (two_ek + p1))),
        mu * mu * 4.0 * p1 + p * (two_ek + p) * (two_ek + p1),
        -(p * (nu2 + two_ek * (p * 2.0 + 1.0) + e * e * p * p1)),
        mu * mu * e * 4.0 * p1 + p * (two_ek + p) * (k * 2.0 + e * p1),
    );
    let right = TransferMatrix::new(
        plus * (a * (two_ek + p) - e * mu * 2.0),
        minus * (a * (two_ek + p) + e * mu * 2.0),
        plus * (a * (k * 2.0 + e * p) - mu * 2.0),
        minus * (a * (k * 2.0 + e * p) + mu * 2.0),
    );
    let gap = (mu * mu - a * a * k * k) * 2.0;
    let quad = a * a * p * p;
    let lin = a * e * mu * p * 2.0;
    let factor = a * a * mu * mu * p1 * 8.0;
    let rhs = TransferMatrix::new(-quad + lin - gap, gap, -gap, quad + lin + gap).scale(factor);
    let lhs = left.mul(&middle).mul(&right);
    // At p = -1 both sides vanish, so the gap is measured against the size of
    // the factors rather than of the result.
    let magnitude = abs_matrix(&left).mul(&abs_matrix(&middle)).mul(&abs_matrix(&right));
    let scale = magnitude.max_abs().max(rhs.max_abs());
    let diff = lhs
        .entries()
        .iter()
        .zip(rhs.entries())
        .fold(T::zero(), |m, (x, y)| m.max((*x - y).abs()));
    Ok((diff / scale).to_f64())
}

fn abs_matrix<T: Real>(m: &TransferMatrix<T>) -> TransferMatrix<T> {
    TransferMatrix::new(m.a.abs(), m.b.abs(), m.c.abs(), m.d.abs())
}
