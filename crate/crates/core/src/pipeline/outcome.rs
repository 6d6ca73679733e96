use num_bigint::BigInt;

use super::counts::VariableCounts;
use super::pseudo::Pseudoexpectation;
use crate::certificates::{BitSizeReport, Failure, SosCertificate};
use crate::sdp::{InfeasibleReport, RationalizeFailure};

/// Why a search at one degree produced no certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchFailure {
    SolverInfeasible(InfeasibleReport),
    RationalizationFailed(RationalizeFailure),
    /// An exact candidate was assembled but rejected by verification.
    VerificationFailed(Vec<Failure>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Certified {
        certificate: SosCertificate,
        bits: BitSizeReport,
        /// The rounding bound at which the exact certificate was found.
        denominator_bound: BigInt,
    },
    NoCertificate {
        failure: SearchFailure,
        /// A numeric pseudoexpectation of matching degree, when one was found.
        dual: Option<Pseudoexpectation>,
    },
}

impl SearchOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, SearchOutcome::Certified { .. })
    }

    pub fn certificate(&self) -> Option<&SosCertificate> {
        match self {
            SearchOutcome::Certified { certificate, .. } => Some(certificate),
            SearchOutcome::NoCertificate { .. } => None,
        }
    }

    /// `certified`, or a no-certificate label saying what backs it.
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Certified { .. } => "certified",
            SearchOutcome::NoCertificate { dual: Some(_), .. } => "no-certificate-at-degree (dual witness, numeric)",
            SearchOutcome::NoCertificate { dual: None, .. } => "no-certificate-at-degree (numeric evidence)",
        }
    }
}

/// The result of one search at a fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    /// The half degree `d` that was searched.
    pub degree: u32,
    /// Degree bound of the certificate ansatz.
    pub proof_degree: u32,
    pub counts: VariableCounts,
    pub outcome: SearchOutcome,
    pub notes: Vec<String>,
}
