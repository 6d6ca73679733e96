//! Exact sum-of-squares certificates for polynomial systems that are
//! invariant under products of symmetric groups.
//!
//! The crate is layered bottom-up:
//!
//! - [`poly`]: exact sparse polynomials, monomial bases and Gram matrices;
//! - [`groebner`]: division with quotients and proof reconstruction modulo a
//!   Gröbner basis;
//! - [`symmetry`]: block-symmetric group actions, Reynolds averaging and
//!   orbit tables;
//! - [`certificates`]: proof objects, exact verification, order-unit
//!   constructions, symmetrization and bit-size reports;
//! - [`sdp`]: feasibility systems, the block-diagonal encoding, a small
//!   numeric solver and rationalization;
//! - [`pipeline`]: the end-to-end prove / refute / pseudoexpectation searches.
//!
//! Numeric values appear only inside [`sdp`]; everything a caller is asked to
//! trust goes through [`certificates::verify`].

pub mod certificates;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod rational;
pub mod sdp;
pub mod symmetry;

pub use error::{Error, Result};
pub use rational::Rational;
