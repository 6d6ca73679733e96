use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::certificate::{verify, GroebnerTerm, SosCertificate};
use crate::error::{Error, Result};
use crate::groebner::boolean_basis;
use crate::poly::{Monomial, Polynomial};
use crate::rational::{frac, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A certificate for `n_prime ± m`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderUnit {
    pub n_prime: Rational,
    pub certificate: SosCertificate,
}

/// Builds a certificate for `N' ± m` from an Archimedean witness
/// `N − Σ xᵢ²`, following the inductive construction: first `N₁ − m₁²` for
/// monomials of degree at most `d`, then the two half-sum identities for
/// `m = m₁·m₂`.
///
/// The output's degree bound is `2(d + k − 1)` where `2k` is the witness
/// degree bound.
pub fn order_unit_certificate(witness: &SosCertificate, m: &Monomial, d: u32, sign: Sign) -> Result<OrderUnit> {
    let n = witness.n();
    if m.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.n() });
    }
    if !verify(witness).is_accepted() {
        return Err(Error::InvalidWitness("the witness certificate does not verify".into()));
    }
    let mut shifted = witness.target.clone();
    for i in 0..n {
        shifted.add_term(Monomial::var(n, i).mul(&Monomial::var(n, i)), Rational::one());
    }
    if shifted.degree() > 0 {
        return Err(Error::InvalidWitness("the witness target is not of the form N - sum of squares".into()));
    }
    let n_k = shifted.constant_term();
    if n_k.is_negative() {
        return Err(Error::InvalidWitness("the witness constant is negative".into()));
    }
    if d == 0 || m.degree() > 2 * d {
        return Err(Error::InvalidInstance(format!("monomial {m} has degree above 2d = {}", 2 * d)));
    }
    let k = witness.degree_bound.div_ceil(2).max(1);

    let mut builder = ClaimBuilder { n, witness, n_k, memo: HashMap::new() };
    let (n_prime, mut certificate) = if m.is_one() {
        let n_prime = Rational::one();
        let value = match sign {
            Sign::Plus => int(2),
            Sign::Minus => Rational::zero(),
        };
        (n_prime, SosCertificate::constant(n, &value))
    } else {
        let (m1, m2) = split(m);
        let (n1, c1) = builder.claim(&m1);
        let (n2, c2) = builder.claim(&m2);
        let big = if n1 > n2 { n1.clone() } else { n2.clone() };
        // N − mᵢ² = (Nᵢ − mᵢ²) + (N − Nᵢ).
        let lift1 = c1.plus(&SosCertificate::constant(n, &(&big - &n1)));
        let lift2 = c2.plus(&SosCertificate::constant(n, &(&big - &n2)));
        let p1 = Polynomial::term(m1.clone(), Rational::one());
        let p2 = Polynomial::term(m2.clone(), Rational::one());
        let one = Polynomial::one(n);
        let squares = match sign {
            Sign::Plus => [&one - &p1, &one - &p2, &(&one + &p1) + &p2],
            Sign::Minus => [&one - &p1, &one + &p2, &(&one + &p1) - &p2],
        };
        let mut sum = lift1.scaled(&int(2)).plus(&lift2.scaled(&int(2)));
        for s in &squares {
            sum = sum.plus(&SosCertificate::square(s));
        }
        let half = frac(1, 2);
        (&big * int(2) + frac(3, 2), sum.scaled(&half))
    };
    certificate.degree_bound = 2 * (d + k - 1);
    certificate.epsilon = Rational::zero();
    let mut expected = Polynomial::constant(n, n_prime.clone());
    let mono = Polynomial::term(m.clone(), Rational::one());
    expected = match sign {
        Sign::Plus => &expected + &mono,
        Sign::Minus => &expected - &mono,
    };
    debug_assert_eq!(certificate.target, expected);
    certificate.target = expected;
    Ok(OrderUnit { n_prime, certificate })
}

/// `m = m₁·m₂` with `deg m₁ = ⌈|m|/2⌉`, splitting variables in index order.
fn split(m: &Monomial) -> (Monomial, Monomial) {
    let mut need = m.degree().div_ceil(2);
    let mut first = vec![0; m.n()];
    let mut second = m.exponents().to_vec();
    for i in 0..m.n() {
        let take = second[i].min(need);
        first[i] = take;
        second[i] -= take;
        need -= take;
    }
    (Monomial::new(first), Monomial::new(second))
}

struct ClaimBuilder<'a> {
    n: usize,
    witness: &'a SosCertificate,
    n_k: Rational,
    memo: HashMap<Monomial, (Rational, SosCertificate)>,
}

impl ClaimBuilder<'_> {
    /// `(N', cert)` with `cert` proving `N' − m²`.
    fn claim(&mut self, m: &Monomial) -> (Rational, SosCertificate) {
        if let Some(hit) = self.memo.get(m) {
            return hit.clone();
        }
        let n = self.n;
        let out = if m.is_one() {
            (Rational::one(), SosCertificate::zero(n))
        } else {
            let i = m.exponents().iter().position(|&e| e > 0).expect("nonconstant monomial");
            let xi = Monomial::var(n, i);
            let m2 = xi.quotient_of(m).expect("xi divides m");
            // N_k − xᵢ² = (N_k − Σ xⱼ²) + Σ_{j≠i} xⱼ².
            let mut base = self.witness.clone();
            for j in (0..n).filter(|&j| j != i) {
                base = base.plus(&SosCertificate::square(&Polynomial::var(n, j)));
            }
            if m2.is_one() {
                (self.n_k.clone(), base)
            } else {
                let (n_tilde, inner) = self.claim(&m2);
                let big = if self.n_k > n_tilde { self.n_k.clone() } else { n_tilde.clone() };
                // N² − xᵢ²m₂² = (N − m₂²)·xᵢ² + N·(N − xᵢ²).
                let shifted_inner = inner.plus(&SosCertificate::constant(n, &(&big - &n_tilde)));
                let shifted_base = base.plus(&SosCertificate::constant(n, &(&big - &self.n_k)));
                let cert = shifted_inner.times_monomial_square(&xi).plus(&shifted_base.scaled(&big));
                (&big * &big, cert)
            }
        };
        self.memo.insert(m.clone(), out.clone());
        out
    }
}

/// The Boolean-cube witness `n − Σ xᵢ² = Σ [(1 − xᵢ)² − 2(xᵢ² − xᵢ)]`.
pub fn boolean_archimedean_witness(n: usize) -> SosCertificate {
    let basis = boolean_basis(n);
    let mut cert = SosCertificate::zero(n);
    for i in 0..n {
        let one_minus = &Polynomial::one(n) - &Polynomial::var(n, i);
        cert = cert.plus(&SosCertificate::square(&one_minus));
    }
    cert.groebner = basis
        .generators()
        .iter()
        .map(|g| GroebnerTerm { generator: g.clone(), multiplier: Polynomial::constant(n, int(-2)) })
        .collect();
    cert.target = &cert.target
        + &cert.groebner.iter().fold(Polynomial::zero(n), |acc, t| &acc + &t.product());
    cert.degree_bound = 2;
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial, poly};

    #[test]
    fn boolean_witness_is_archimedean() {
        let w = boolean_archimedean_witness(3);
        assert!(verify(&w).is_accepted());
        assert_eq!(w.target, poly("3 - x1^2 - x2^2 - x3^2", 3));
    }

    #[test]
    fn linear_monomial() {
        let w = boolean_archimedean_witness(2);
        for sign in [Sign::Plus, Sign::Minus] {
            let out = order_unit_certificate(&w, &monomial("x1", 2), 1, sign).unwrap();
            assert!(verify(&out.certificate).is_accepted(), "{sign:?}");
            assert_eq!(out.certificate.degree_bound, 2);
        }
    }

    #[test]
    fn constant_monomial() {
        let w = boolean_archimedean_witness(2);
        let plus = order_unit_certificate(&w, &Monomial::one(2), 1, Sign::Plus).unwrap();
        assert!(plus.n_prime >= int(1));
        assert_eq!(plus.certificate.sigma.to_polynomial(), poly("2", 2));
        let minus = order_unit_certificate(&w, &Monomial::one(2), 1, Sign::Minus).unwrap();
        assert!(verify(&minus.certificate).is_accepted());
    }

    #[test]
    fn product_monomial_uses_half_sum_identity() {
        let w = boolean_archimedean_witness(2);
        let out = order_unit_certificate(&w, &monomial("x1*x2", 2), 1, Sign::Minus).unwrap();
        // N₁ = N₂ = 2 for the Boolean witness on two variables.
        assert_eq!(out.n_prime, frac(11, 2));
        assert_eq!(out.certificate.target, poly("11/2 - x1*x2", 2));
        assert!(verify(&out.certificate).is_accepted());
    }

    #[test]
    fn higher_degree_respects_bound() {
        let w = boolean_archimedean_witness(3);
        for (m, d) in [("x1^2*x2", 2), ("x1^2*x2^2", 2), ("x1*x2*x3^3", 3)] {
            for sign in [Sign::Plus, Sign::Minus] {
                let out = order_unit_certificate(&w, &monomial(m, 3), d, sign).unwrap();
                assert!(verify(&out.certificate).is_accepted(), "{m} {sign:?}");
                assert_eq!(out.certificate.degree_bound, 2 * d);
            }
        }
    }

    #[test]
    fn rejects_bad_witness() {
        let mut w = boolean_archimedean_witness(2);
        w.target = poly("2 - x1^2", 2);
        assert!(matches!(
            order_unit_certificate(&w, &monomial("x1", 2), 1, Sign::Plus),
            Err(Error::InvalidWitness(_))
        ));
    }
}
