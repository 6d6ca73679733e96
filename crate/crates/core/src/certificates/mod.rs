//! Sum-of-squares proof objects: exact expansion and verification, the
//! constructive order-unit certificates, symmetrization over a group, bit-size
//! reports and the JSON exchange format.

mod bitsize;
mod certificate;
pub mod format;
mod order_unit;
mod symmetrize;

pub use bitsize::{bit_size, BitSizeReport};
pub use certificate::{
    expand, verify, EqualityTerm, Failure, GroebnerTerm, Multiplier, ProofMode, SosCertificate, Verdict,
};
pub use format::{from_json, to_json};
pub use order_unit::{boolean_archimedean_witness, order_unit_certificate, OrderUnit, Sign};
pub use symmetrize::{symmetrize, ELEMENT_CAP};
