//! Exact sparse multivariate polynomials over the rationals.

mod basis;
mod gram;
mod monomial;
mod parse;
mod polynomial;

pub use basis::{basis_size, MonomialBasis};
pub use gram::{coefficient_vector, GramMatrix};
pub use monomial::{grlex_compare, Monomial};
pub use parse::{monomial, parse_polynomial, parse_polynomial_at, poly};
pub use polynomial::Polynomial;
