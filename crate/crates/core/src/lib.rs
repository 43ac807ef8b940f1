//! Relativistic Coulomb expectation values for Dirac hydrogenlike bound states.
//!
//! The moments `A_p = <r^p>`, `B_p = <beta r^p>` and `C_p = <i alpha.n beta r^p>`
//! are computed from two closed hypergeometric representations and checked
//! against two-term and three-term recurrences in `p`, the `p -> -p-3`
//! reflection, and a similarity transform onto dual Hahn polynomials.
//! [`verify`] runs all of these against one another over a parameter grid.

pub mod closedform;
pub mod ddouble;
pub mod dualhahn;
pub mod hypergeom;
pub mod identities;
pub mod params;
pub mod real;
pub mod recurrence;
pub mod verify;

pub use closedform::{moments_nu, moments_traditional, MomentError, MomentTriple, Representation};
pub use ddouble::DoubleDouble;
pub use params::{admissible, derive_params, Admissibility, DerivedParams, MomentIndex, ParamError, QuantumNumbers};
pub use real::Real;
pub use recurrence::TransferMatrix;
