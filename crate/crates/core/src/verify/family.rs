use serde::Serialize;

use super::config::Precision;

/// A group of checks sharing one relation and one tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    SpectralIdentity,
    Normalization,
    LinearRelation,
    Positivity,
    RepresentationAgreement,
    PrefactorVanishing,
    BMinusOne,
    StepUp,
    StepDown,
    RoundTrip,
    RoundTripNative,
    ChainConsistency,
    TransferMatrix,
    DetS,
    ThreeTermAlgebra,
    ThreeTermA,
    ThreeTermB,
    VectorFamily,
    FamilyMatrixIdentity,
    Reflection,
    TransformInitial,
    DetT,
    DetTransformed,
    TransformedSimilarity,
    HahnAgreement,
    DualHahnDifference,
    AppendixBPhysical,
    AppendixB,
    Identities,
    IdentityEdges,
}

/// Entry of the family listing in a report.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub relation: &'static str,
    pub tolerance: Option<f64>,
}

impl Family {
    pub const ALL: [Family; 30] = [
        Family::SpectralIdentity,
        Family::Normalization,
        Family::LinearRelation,
        Family::Positivity,
        Family::RepresentationAgreement,
        Family::PrefactorVanishing,
        Family::BMinusOne,
        Family::StepUp,
        Family::StepDown,
        Family::RoundTrip,
        Family::RoundTripNative,
        Family::ChainConsistency,
        Family::TransferMatrix,
        Family::DetS,
        Family::ThreeTermAlgebra,
        Family::ThreeTermA,
        Family::ThreeTermB,
        Family::VectorFamily,
        Family::FamilyMatrixIdentity,
        Family::Reflection,
        Family::TransformInitial,
        Family::DetT,
        Family::DetTransformed,
        Family::TransformedSimilarity,
        Family::HahnAgreement,
        Family::DualHahnDifference,
        Family::AppendixBPhysical,
        Family::AppendixB,
        Family::Identities,
        Family::IdentityEdges,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SpectralIdentity => "spectral_identity",
            Family::Normalization => "normalization",
            Family::LinearRelation => "linear_relation",
            Family::Positivity => "positivity",
            Family::RepresentationAgreement => "representation_agreement",
            Family::PrefactorVanishing => "prefactor_vanishing",
            Family::BMinusOne => "b_minus_one",
            Family::StepUp => "step_up",
            Family::StepDown => "step_down",
            Family::RoundTrip => "round_trip",
            Family::RoundTripNative => "round_trip_native",
            Family::ChainConsistency => "chain_consistency",
            Family::TransferMatrix => "transfer_matrix",
            Family::DetS => "det_s",
            Family::ThreeTermAlgebra => "three_term_algebra",
            Family::ThreeTermA => "three_term_a",
            Family::ThreeTermB => "three_term_b",
            Family::VectorFamily => "vector_family",
            Family::FamilyMatrixIdentity => "family_matrix_identity",
            Family::Reflection => "reflection",
            Family::TransformInitial => "transform_initial",
            Family::DetT => "det_t",
            Family::DetTransformed => "det_transformed",
            Family::TransformedSimilarity => "transformed_similarity",
            Family::HahnAgreement => "hahn_agreement",
            Family::DualHahnDifference => "dual_hahn_difference",
            Family::AppendixBPhysical => "appendix_b_physical",
            Family::AppendixB => "appendix_b",
            Family::Identities => "identities",
            Family::IdentityEdges => "identity_edges",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn relation(self) -> &'static str {
        match self {
            Family::SpectralIdentity => "epsilon mu = a (nu + n)",
            Family::Normalization => "A_0 = 1 and B_0 = epsilon, both closed forms",
            Family::LinearRelation => "C_p from the linear relation in A_p, B_p matches the closed form",
            Family::Positivity => "A_p > 0",
            Family::RepresentationAgreement => "traditional and Nikiforov-Uvarov closed forms agree",
            Family::PrefactorVanishing => "right-hand sides of the A rows vanish at p = -1",
            Family::BMinusOne => "B_-1 = a^2 beta / mu from S_0 and from the downward B step",
            Family::StepUp => "upward two-term step reproduces the closed form at p + 1",
            Family::StepDown => "downward two-term step reproduces the closed form at p - 1",
            Family::RoundTrip => "step up then down returns the input, working precision",
            Family::RoundTripNative => "step up then down in the caller's precision",
            Family::ChainConsistency => "upward chain from (1, epsilon) matches the closed forms",
            Family::TransferMatrix => "S_p (A_{p-1}, B_{p-1}) = (A_p, B_p)",
            Family::DetS => "closed-form det S_p matches the entrywise determinant",
            Family::ThreeTermAlgebra => "separated three-term coefficients from S_p entries match explicit forms",
            Family::ThreeTermA => "three-term A relation matches the upward step",
            Family::ThreeTermB => "three-term B relation matches the upward step",
            Family::VectorFamily => "vector three-term families match the upward step",
            Family::FamilyMatrixIdentity => "S_{p+1} = M_p + N_p S_p^{-1} for every family",
            Family::Reflection => "p -> -p-3 reflection matches the closed form",
            Family::TransformInitial => "T_0 (1, epsilon) = (1, 1)",
            Family::DetT => "closed-form det T_p matches the entrywise determinant",
            Family::DetTransformed => "det of transformed S_p equals (2nu - p) / (2nu + p)",
            Family::TransformedSimilarity => "transformed S_p in closed form equals T_p S_p T_{p-1}^{-1}",
            Family::HahnAgreement => "(X_p, Y_p) by series, by T_p (A_p, B_p) and by iteration agree",
            Family::DualHahnDifference => "X_p, Y_p satisfy the dual Hahn difference equation in p",
            Family::AppendixBPhysical => "matrix identity behind the transformed S_p on bound states",
            Family::AppendixB => "matrix identity behind the transformed S_p on random parameters",
            Family::Identities => "3F2 linear identities L1, L2, L3 and Chebyshev",
            Family::IdentityEdges => "the same identities at n = 0 or p = 0",
        }
    }

    /// `None` for informational families, which never fail.
    pub fn default_tolerance(self, precision: Precision) -> Option<f64> {
        Some(match self {
            Family::SpectralIdentity => 1e-14,
            Family::Normalization
            | Family::LinearRelation
            | Family::BMinusOne
            | Family::DetS
            | Family::ThreeTermAlgebra
            | Family::FamilyMatrixIdentity
            | Family::TransformInitial
            | Family::DetT
            | Family::DetTransformed
            | Family::AppendixBPhysical => 1e-12,
            Family::Positivity => 0.0,
            Family::RepresentationAgreement
            | Family::PrefactorVanishing
            | Family::StepUp
            | Family::StepDown
            | Family::TransferMatrix
            | Family::HahnAgreement
            | Family::DualHahnDifference
            | Family::AppendixB => 1e-10,
            Family::RoundTrip
            | Family::ThreeTermA
            | Family::ThreeTermB
            | Family::VectorFamily
            | Family::TransformedSimilarity => 1e-11,
            Family::ChainConsistency | Family::Reflection => 1e-9,
            Family::Identities => match precision {
                Precision::Double => 1e-10,
                Precision::High => 1e-25,
            },
            Family::RoundTripNative | Family::IdentityEdges => return None,
        })
    }

    pub fn info(self, tolerance: Option<f64>) -> FamilyInfo {
        FamilyInfo {
            name: self.name(),
            relation: self.relation(),
            tolerance,
        }
    }
}
