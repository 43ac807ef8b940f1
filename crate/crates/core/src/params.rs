//! Quantum numbers of a Dirac hydrogenlike bound state and the continuous
//! parameters derived from them.
//!
//! Notation: `kappa` is the Dirac quantum number, `n` the radial quantum
//! number, `mu = alpha * Z` the Coulomb coupling and `beta = mc/hbar` the
//! inverse length scale. From these follow
//!
//! * `nu = sqrt(kappa^2 - mu^2)`,
//! * `epsilon = E / mc^2 = (n + nu) / sqrt((n + nu)^2 + mu^2)`,
//! * `a = sqrt(1 - epsilon^2) = mu / sqrt((n + nu)^2 + mu^2)`,
//!
//! tied together by the quantization condition `epsilon * mu = a * (nu + n)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;

/// Fine-structure constant used when the coupling is given as a nuclear charge.
pub const FINE_STRUCTURE: f64 = 0.0072973525693;

/// Powers within this margin of the admissibility boundary count as inadmissible.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("kappa must be a nonzero integer")]
    KappaZero,
    #[error("coupling mu must be positive")]
    CouplingNonPositive,
    #[error("coupling mu must be below |kappa| for a real nu")]
    CouplingTooLarge,
    #[error("no bound state: n = 0 requires kappa < 0")]
    NoBoundState,
    #[error("scale beta must be positive and finite")]
    BetaNonPositive,
    #[error("parameters must be finite")]
    NonFinite,
}

impl ParamError {
    /// Stable diagnostic code.
    pub fn code(self) -> &'static str {
        match self {
            ParamError::KappaZero => "kappa-zero",
            ParamError::CouplingNonPositive => "mu-nonpositive",
            ParamError::CouplingTooLarge => "mu-too-large",
            ParamError::NoBoundState => "no-bound-state",
            ParamError::BetaNonPositive => "beta-nonpositive",
            ParamError::NonFinite => "non-finite",
        }
    }
}

/// Discrete state labels plus coupling and scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub kappa: i32,
    pub mu: f64,
    pub beta: f64,
}

impl QuantumNumbers {
    /// State with `beta = 1`.
    pub fn new(n: u32, kappa: i32, mu: f64) -> Result<Self, ParamError> {
        Self::with_beta(n, kappa, mu, 1.0)
    }

    pub fn with_beta(n: u32, kappa: i32, mu: f64, beta: f64) -> Result<Self, ParamError> {
        let qn = Self { n, kappa, mu, beta };
        qn.validate()?;
        Ok(qn)
    }

    /// State whose coupling is `alpha * z`.
    pub fn from_charge(n: u32, kappa: i32, z: f64, alpha: f64, beta: f64) -> Result<Self, ParamError> {
        Self::with_beta(n, kappa, alpha * z, beta)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !self.mu.is_finite() || !self.beta.is_finite() {
            return Err(ParamError::NonFinite);
        }
        if self.kappa == 0 {
            return Err(ParamError::KappaZero);
        }
        if self.mu <= 0.0 {
            return Err(ParamError::CouplingNonPositive);
        }
        if self.mu >= f64::from(self.kappa.unsigned_abs()) {
            return Err(ParamError::CouplingTooLarge);
        }
        if self.n == 0 && self.kappa > 0 {
            return Err(ParamError::NoBoundState);
        }
        if self.beta <= 0.0 {
            return Err(ParamError::BetaNonPositive);
        }
        Ok(())
    }

    /// `|kappa| - mu`, the distance to the point where `nu` vanishes.
    pub fn degeneracy_gap(&self) -> f64 {
        f64::from(self.kappa.unsigned_abs()) - self.mu
    }
}

/// Continuous parameters of a bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T = f64> {
    pub n: u32,
    pub kappa: i32,
    pub mu: T,
    pub beta: T,
    pub nu: T,
    pub epsilon: T,
    pub a: T,
}

/// Derives `nu`, `epsilon` and `a` from a validated state.
pub fn derive_params<T: Real>(qn: &QuantumNumbers) -> Result<DerivedParams<T>, ParamError> {
    qn.validate()?;
    let mu = T::from_f64(qn.mu);
    let k = T::from_i64(i64::from(qn.kappa.unsigned_abs()));
    // (|k| - mu)(|k| + mu) avoids cancellation when mu is close to |kappa|.
    let nu = ((k - mu) * (k + mu)).sqrt();
    let shifted = nu + f64::from(qn.n);
    let hyp = (shifted * shifted + mu * mu).sqrt();
    Ok(DerivedParams {
        n: qn.n,
        kappa: qn.kappa,
        mu,
        beta: T::from_f64(qn.beta),
        nu,
        epsilon: shifted / hyp,
        a: mu / hyp,
    })
}

impl<T: Real> DerivedParams<T> {
    pub fn kappa_r(&self) -> T {
        T::from_i64(i64::from(self.kappa))
    }

    pub fn n_r(&self) -> T {
        T::from_i64(i64::from(self.n))
    }

    /// `mu^2 - a^2 kappa^2`, evaluated as `a^2 n (n + 2nu)`; zero for `n = 0`.
    pub fn coupling_gap(&self) -> T {
        let n = self.n_r();
        self.a * self.a * n * (n + self.nu * 2.0)
    }

    /// Relative residual of `nu^2 + mu^2 = kappa^2`.
    pub fn nu_residual(&self) -> f64 {
        let k = self.kappa_r();
        ((self.nu * self.nu + self.mu * self.mu - k * k) / (k * k)).abs().to_f64()
    }

    /// Residual of `a^2 + epsilon^2 = 1`.
    pub fn unit_residual(&self) -> f64 {
        (self.a * self.a + self.epsilon * self.epsilon - 1.0).abs().to_f64()
    }

    /// Relative residual of the quantization condition `epsilon mu = a (nu + n)`.
    pub fn spectral_residual(&self) -> f64 {
        let lhs = self.epsilon * self.mu;
        let rhs = self.a * (self.nu + self.n_r());
        crate::real::rel_diff(lhs, rhs)
    }

    /// The same values carried in the working precision.
    pub fn widen(&self) -> DerivedParams<T::Work> {
        DerivedParams {
            n: self.n,
            kappa: self.kappa,
            mu: self.mu.widen(),
            beta: self.beta.widen(),
            nu: self.nu.widen(),
            epsilon: self.epsilon.widen(),
            a: self.a.widen(),
        }
    }

    pub fn to_f64(&self) -> DerivedParams<f64> {
        DerivedParams {
            n: self.n,
            kappa: self.kappa,
            mu: self.mu.to_f64(),
            beta: self.beta.to_f64(),
            nu: self.nu.to_f64(),
            epsilon: self.epsilon.to_f64(),
            a: self.a.to_f64(),
        }
    }

    pub fn admissibility(&self, p: i32) -> Admissibility {
        admissible(MomentIndex(p), self)
    }
}

/// Integer power of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MomentIndex(pub i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Admissibility {
    /// `2 nu + p + 1 > 0`: the moment exists.
    Direct,
    /// Direct, and additionally `2 nu - p - 2 > 0`, so `p -> -p-3` is defined.
    Reflectable,
    Inadmissible,
}

impl Admissibility {
    pub fn is_direct(self) -> bool {
        !matches!(self, Admissibility::Inadmissible)
    }

    pub fn is_reflectable(self) -> bool {
        matches!(self, Admissibility::Reflectable)
    }
}

/// Classifies a power by positivity of the gamma arguments `2nu+p+1` and `2nu-p-2`.
pub fn admissible<T: Real>(p: MomentIndex, dp: &DerivedParams<T>) -> Admissibility {
    let two_nu = dp.nu.to_f64() * 2.0;
    let p = f64::from(p.0);
    if two_nu + p + 1.0 <= ADMISSIBILITY_TOL {
        Admissibility::Inadmissible
    } else if two_nu - p - 2.0 > ADMISSIBILITY_TOL {
        Admissibility::Reflectable
    } else {
        Admissibility::Direct
    }
}
