//! Closed forms of the moments `A_p`, `B_p`, `C_p`.
//!
//! Two representations are available. The *traditional* one combines
//! `X_p = 3F2(1-n, -p, p+1; 2nu+1, 1; 1)` and `Y_p = 3F2(-n, -p, p+1; 2nu+1, 1; 1)`;
//! the *Nikiforov–Uvarov* one combines `3F2(1-n, p+2, -p-1; 2nu+2, 1; 1)` and
//! `3F2(-n, p+2, -p-1; 2nu, 1; 1)` with gamma-ratio weights. Both carry a
//! left-hand normalization proportional to `(p + 1)`, so `p = -1` is refused.
//!
//! The three moments are linearly dependent:
//! `(2kappa + epsilon(p+1)) A_p - (2 epsilon kappa + p + 1) B_p = 4 mu C_p`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergeom::{gamma_ratio, hyp3f2, HypergeomError};
use crate::params::DerivedParams;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("p = -1: left-hand prefactor vanishes; A_-1 and C_-1 are undetermined")]
    PrefactorVanishes,
    #[error("power p = {p} is inadmissible (needs 2nu + p + 1 > 0)")]
    Inadmissible { p: i32 },
    #[error(transparent)]
    Series(#[from] HypergeomError),
}

/// Moments at one power `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentTriple<T = f64> {
    pub p: i32,
    /// `<r^p>`
    pub a: T,
    /// `<beta r^p>`
    pub b: T,
    /// `<i alpha.n beta r^p>`
    pub c: T,
}

impl<T: Real> MomentTriple<T> {
    /// Builds the triple from `A` and `B`, reconstituting `C` by the linear relation.
    pub fn from_pair(dp: &DerivedParams<T>, p: i32, a: T, b: T) -> Self {
        Self {
            p,
            a,
            b,
            c: linear_relation_c(dp, p, a, b),
        }
    }

    pub fn to_f64(&self) -> MomentTriple<f64> {
        MomentTriple {
            p: self.p,
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
        }
    }

    /// Multiplies all three moments by `s`.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            p: self.p,
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    #[serde(rename = "traditional")]
    Traditional,
    #[serde(rename = "nu")]
    NikiforovUvarov,
}

impl Representation {
    pub fn tag(self) -> &'static str {
        match self {
            Representation::Traditional => "traditional",
            Representation::NikiforovUvarov => "nu",
        }
    }
}

/// `C_p` from `A_p`, `B_p` through the linear relation.
pub fn linear_relation_c<T: Real>(dp: &DerivedParams<T>, p: i32, a: T, b: T) -> T {
    let (ca, cb) = linear_relation_coefficients(dp, p);
    (ca * a - cb * b) / (dp.mu * 4.0)
}

fn linear_relation_coefficients<T: Real>(dp: &DerivedParams<T>, p: i32) -> (T, T) {
    let k = dp.kappa_r();
    let e = dp.epsilon;
    let p1 = f64::from(p) + 1.0;
    (k * 2.0 + e * p1, e * k * 2.0 + p1)
}

/// Residual of the linear relation, relative to its largest term.
pub fn linear_relation_residual<T: Real>(dp: &DerivedParams<T>, t: &MomentTriple<T>) -> f64 {
    let (ca, cb) = linear_relation_coefficients(dp, t.p);
    let terms = [ca * t.a, -(cb * t.b), -(dp.mu * 4.0 * t.c)];
    let scale = terms.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let sum = terms[0] + terms[1] + terms[2];
    if scale == T::zero() {
        0.0
    } else {
        (sum.abs() / scale).to_f64()
    }
}

fn ensure_admissible<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(), MomentError> {
    if dp.admissibility(p).is_direct() {
        Ok(())
    } else {
        Err(MomentError::Inadmissible { p })
    }
}

/// `(X_p, Y_p)`: the two series of the traditional form.
pub fn traditional_series<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), HypergeomError> {
    let n = dp.n_r();
    let pr = T::from_i64(i64::from(p));
    let lower = [dp.nu * 2.0 + 1.0, T::one()];
    let x = hyp3f2([T::one() - n, -pr, pr + 1.0], lower)?;
    let y = hyp3f2([-n, -pr, pr + 1.0], lower)?;
    Ok((x, y))
}

/// The two series of the Nikiforov–Uvarov form, without gamma weights.
pub fn nu_series<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<(T, T), HypergeomError> {
    let n = dp.n_r();
    let pr = T::from_i64(i64::from(p));
    let two_nu = dp.nu * 2.0;
    let u = pr + 2.0;
    let v = -pr - 1.0;
    let first = hyp3f2([T::one() - n, u, v], [two_nu + 2.0, T::one()])?;
    let second = hyp3f2([-n, u, v], [two_nu, T::one()])?;
    Ok((first, second))
}

/// Right-hand sides of the traditional forms for `(A, B, C)`.
fn traditional_rhs<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<[T; 3], HypergeomError> {
    let (x, y) = traditional_series(dp, p)?;
    let DerivedParams { mu, a, epsilon: e, .. } = *dp;
    let k = dp.kappa_r();
    let p1 = f64::from(p) + 1.0;
    let plus = mu + a * k;
    let minus = mu - a * k;
    let ra = a * (e * k * 2.0 + p1);
    let rb = a * (k * 2.0 + e * p1);
    Ok([
        plus * (ra - e * mu * 2.0) * x + minus * (ra + e * mu * 2.0) * y,
        plus * (rb - mu * 2.0) * x + minus * (rb + mu * 2.0) * y,
        a * plus * x - a * minus * y,
    ])
}

/// Right-hand sides of the Nikiforov–Uvarov forms for `(A, B, C)`.
fn nu_rhs<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<[T; 3], HypergeomError> {
    let (f1, f2) = nu_series(dp, p)?;
    let DerivedParams { a, epsilon: e, nu, .. } = *dp;
    let k = dp.kappa_r();
    let p1 = f64::from(p) + 1.0;
    let two_nu = nu * 2.0;
    let x = gamma_ratio(two_nu + 2.0, p + 1)? * f1;
    let y = gamma_ratio(two_nu, p + 1)? * f2;
    let ekp = e * k + nu;
    let ekm = e * k - nu;
    Ok([
        a * ekp * (ekm * 2.0 + p1) * x - a * ekm * (ekp * 2.0 + p1) * y,
        a * ekp * x - a * ekm * y,
        a * ekp * (k * ekm * 2.0 + (k - e * nu) * p1) * x - a * ekm * (k * ekp * 2.0 + (k + e * nu) * p1) * y,
    ])
}

/// Moments from the traditional closed forms.
pub fn moments_traditional<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<MomentTriple<T>, MomentError> {
    if p == -1 {
        return Err(MomentError::PrefactorVanishes);
    }
    ensure_admissible(dp, p)?;
    let [ra, rb, rc] = traditional_rhs(dp, p)?;
    let scale = (dp.a * dp.beta * 2.0).powi(p) / gamma_ratio(dp.nu * 2.0 + 1.0, p)?;
    let ab_norm = dp.a * dp.mu * (2.0 * (f64::from(p) + 1.0)) * scale;
    let c_norm = dp.mu * 4.0 * scale;
    Ok(MomentTriple {
        p,
        a: ra / ab_norm,
        b: rb / ab_norm,
        c: rc / c_norm,
    })
}

/// Moments from the Nikiforov–Uvarov closed forms.
pub fn moments_nu<T: Real>(dp: &DerivedParams<T>, p: i32) -> Result<MomentTriple<T>, MomentError> {
    if p == -1 {
        return Err(MomentError::PrefactorVanishes);
    }
    ensure_admissible(dp, p)?;
    let [ra, rb, rc] = nu_rhs(dp, p)?;
    let DerivedParams { mu, epsilon: e, nu, .. } = *dp;
    let scale = (dp.a * dp.beta * 2.0).powi(p);
    let p1 = f64::from(p) + 1.0;
    Ok(MomentTriple {
        p,
        a: ra / (e * mu * nu * (4.0 * p1) * scale),
        b: rb / (mu * nu * 4.0 * scale),
        c: rc / (e * mu * mu * nu * (8.0 * p1) * scale),
    })
}

pub fn moments<T: Real>(dp: &DerivedParams<T>, p: i32, repr: Representation) -> Result<MomentTriple<T>, MomentError> {
    match repr {
        Representation::Traditional => moments_traditional(dp, p),
        Representation::NikiforovUvarov => moments_nu(dp, p),
    }
}

/// Absolute right-hand sides of the `A` rows of both forms at `p = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorResidual {
    pub traditional: f64,
    pub nu: f64,
}

impl PrefactorResidual {
    pub fn max(&self) -> f64 {
        self.traditional.max(self.nu)
    }
}

/// At `p = -1` the left-hand sides vanish, so the right-hand sides must too.
pub fn residual_prefactor_vanishing<T: Real>(dp: &DerivedParams<T>) -> Result<PrefactorResidual, HypergeomError> {
    Ok(PrefactorResidual {
        traditional: traditional_rhs(dp, -1)?[0].abs().to_f64(),
        nu: nu_rhs(dp, -1)?[0].abs().to_f64(),
    })
}

/// `B_{-1} = a^2 beta / mu`, fixed by `S_0` mapping `(A_{-1}, B_{-1})` onto `(1, epsilon)`.
pub fn b_minus_one<T: Real>(dp: &DerivedParams<T>) -> T {
    dp.a * dp.a * dp.beta / dp.mu
}
