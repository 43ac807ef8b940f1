//! Linear relations between the terminating `3F2` series of the two closed forms.
//!
//! Each check evaluates both sides by direct summation and reports the
//! residual `|lhs - rhs| / max(|lhs|, |rhs|, 1)`. The parameter `nu` is treated
//! as a free positive real, not tied to a bound state.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergeom::{hyp3f2, HypergeomError};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("nu must be positive, got {0}")]
    NonPositiveNu(f64),
    #[error(transparent)]
    Series(#[from] HypergeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityName {
    L1,
    L2,
    L3,
    Chebyshev,
}

impl IdentityName {
    pub const ALL: [IdentityName; 4] = [IdentityName::L1, IdentityName::L2, IdentityName::L3, IdentityName::Chebyshev];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::L1 => "L1",
            IdentityName::L2 => "L2",
            IdentityName::L3 => "L3",
            IdentityName::Chebyshev => "Chebyshev",
        }
    }

    pub fn check<T: Real>(self, n: u32, nu: T, p: u32) -> Result<IdentityCheck, IdentityError> {
        match self {
            IdentityName::L1 => check_l1(n, nu, p),
            IdentityName::L2 => check_l2(n, nu, p),
            IdentityName::L3 => check_l3(n, nu, p),
            IdentityName::Chebyshev => check_chebyshev(n, nu, p),
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: IdentityName,
    pub n: u32,
    pub nu: f64,
    pub p: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityCheck {
    /// `n = 0` or `p = 0`: outside the range where the relations are asserted.
    pub fn is_edge(&self) -> bool {
        self.n == 0 || self.p == 0
    }
}

fn residual<T: Real>(lhs: T, rhs: T) -> f64 {
    let scale = lhs.abs().max(rhs.abs()).max(T::one());
    ((lhs - rhs).abs() / scale).to_f64()
}

fn record<T: Real>(name: IdentityName, n: u32, nu: T, p: u32, lhs: T, rhs: T, res: f64) -> IdentityCheck {
    IdentityCheck {
        name,
        n,
        nu: nu.to_f64(),
        p,
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
        residual: res,
    }
}

struct Args<T> {
    n: T,
    nu: T,
    p: T,
}

fn args<T: Real>(n: u32, nu: T, p: u32) -> Result<Args<T>, IdentityError> {
    if !(nu > T::zero()) {
        return Err(IdentityError::NonPositiveNu(nu.to_f64()));
    }
    Ok(Args {
        n: T::from_i64(i64::from(n)),
        nu,
        p: T::from_i64(i64::from(p)),
    })
}

/// The pair of series that both (L1) and (L2) expand into.
fn nu_pair<T: Real>(a: &Args<T>) -> Result<(T, T), IdentityError> {
    let Args { n, nu, p } = *a;
    let first = hyp3f2([T::one() - n, p + 2.0, -p - 1.0], [nu * 2.0 + 2.0, T::one()])?;
    let second = hyp3f2([-n, p + 2.0, -p - 1.0], [nu * 2.0, T::one()])?;
    Ok((first, second))
}

/// `3F2(1-n, -p, p+1; 2nu+1, 1)` as a combination of the Nikiforov–Uvarov series.
pub fn check_l1<T: Real>(n: u32, nu: T, p: u32) -> Result<IdentityCheck, IdentityError> {
    let a = args(n, nu, p)?;
    let Args { n: nr, p: pr, .. } = a;
    let lhs = hyp3f2([T::one() - nr, -pr, pr + 1.0], [nu * 2.0 + 1.0, T::one()])?;
    let (first, second) = nu_pair(&a)?;
    let two_nu = nu * 2.0;
    let w1 = (two_nu + nr) * (two_nu + pr + 1.0) * (two_nu + pr + 2.0) * (nr * 2.0 + pr + 1.0)
        / (nu * 4.0 * (two_nu + 1.0) * (nu + nr) * (pr + 1.0));
    let w2 = nr * (nu * 4.0 + nr * 2.0 + pr + 1.0) / ((nu + nr) * 2.0 * (pr + 1.0));
    let rhs = w1 * first - w2 * second;
    Ok(record(IdentityName::L1, n, nu, p, lhs, rhs, residual(lhs, rhs)))
}

/// `3F2(-n, -p, p+1; 2nu+1, 1)` as a combination of the Nikiforov–Uvarov series.
pub fn check_l2<T: Real>(n: u32, nu: T, p: u32) -> Result<IdentityCheck, IdentityError> {
    let a = args(n, nu, p)?;
    let Args { n: nr, p: pr, .. } = a;
    let lhs = hyp3f2([-nr, -pr, pr + 1.0], [nu * 2.0 + 1.0, T::one()])?;
    let (first, second) = nu_pair(&a)?;
    let two_nu = nu * 2.0;
    let w1 = nr * (nu * 4.0 + nr * 2.0 - pr - 1.0) * (two_nu + pr + 1.0) * (two_nu + pr + 2.0)
        / (nu * 4.0 * (two_nu + 1.0) * (nu + nr) * (pr + 1.0));
    let w2 = (two_nu + nr) * (nr * 2.0 - pr - 1.0) / ((nu + nr) * 2.0 * (pr + 1.0));
    let rhs = w1 * first - w2 * second;
    Ok(record(IdentityName::L2, n, nu, p, lhs, rhs, residual(lhs, rhs)))
}

/// The series with lower parameter 2 against two series with lower parameter 1.
pub fn check_l3<T: Real>(n: u32, nu: T, p: u32) -> Result<IdentityCheck, IdentityError> {
    let Args { n: nr, p: pr, .. } = args(n, nu, p)?;
    let two_nu = nu * 2.0;
    let lhs = pr * (pr + 1.0) / (two_nu + nr) * hyp3f2([T::one() - nr, pr + 1.0, -pr], [two_nu + 1.0, T::one() * 2.0])?;
    let first = hyp3f2([T::one() - nr, pr + 1.0, -pr], [two_nu + 2.0, T::one()])?;
    let second = hyp3f2([-nr, pr + 1.0, -pr], [two_nu, T::one()])?;
    let w1 = (pr - two_nu) * (two_nu + pr + 1.0) / ((two_nu + 1.0) * 2.0 * (nu + nr));
    let w2 = nu / (nu + nr);
    let rhs = w1 * first + w2 * second;
    Ok(record(IdentityName::L3, n, nu, p, lhs, rhs, residual(lhs, rhs)))
}

/// Both equalities of the discrete Chebyshev relation.
///
/// `lhs` is the first member, `rhs` the difference of the two traditional
/// series; the residual is the larger of the two pairwise residuals.
pub fn check_chebyshev<T: Real>(n: u32, nu: T, p: u32) -> Result<IdentityCheck, IdentityError> {
    let Args { n: nr, p: pr, .. } = args(n, nu, p)?;
    let two_nu = nu * 2.0;
    let pp = pr * (pr + 1.0);
    let two = T::one() * 2.0;
    let first = pp / (nr + two_nu) * hyp3f2([T::one() - nr, -pr, pr + 1.0], [two_nu + 1.0, two])?;
    let middle = pp / (two_nu + 1.0) * hyp3f2([T::one() - nr, T::one() - pr, pr + 2.0], [two_nu + 2.0, two])?;
    let lower = [two_nu + 1.0, T::one()];
    let diff = hyp3f2([-nr, -pr, pr + 1.0], lower)? - hyp3f2([T::one() - nr, -pr, pr + 1.0], lower)?;
    let res = residual(first, middle).max(residual(middle, diff));
    Ok(record(IdentityName::Chebyshev, n, nu, p, first, diff, res))
}

/// Every identity over `n, p` in `start..=max` and the listed `nu`, sorted by `(name, n, nu, p)`.
pub fn identity_grid<T: Real>(
    start: u32,
    n_max: u32,
    p_max: u32,
    nus: &[f64],
) -> Result<Vec<IdentityCheck>, IdentityError> {
    let mut out = Vec::new();
    for name in IdentityName::ALL {
        for n in start..=n_max {
            for &nu in nus {
                for p in start..=p_max {
                    out.push(name.check(n, T::from_f64(nu), p)?);
                }
            }
        }
    }
    out.sort_by(canonical_order);
    Ok(out)
}

fn canonical_order(x: &IdentityCheck, y: &IdentityCheck) -> Ordering {
    (x.name, x.n)
        .cmp(&(y.name, y.n))
        .then(x.nu.total_cmp(&y.nu))
        .then(x.p.cmp(&y.p))
}

/// Default `nu` values of the identity grid.
pub const DEFAULT_NUS: [f64; 5] = [0.6, 1.0, 1.732, 2.5, 4.9];
