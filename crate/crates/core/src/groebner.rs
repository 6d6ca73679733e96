//! Multivariate division with quotient tracking, reduction of proof
//! identities modulo a Gröbner basis, and reconstruction of full proofs from
//! reduced ones.
//!
//! Bases are supplied by the caller; nothing here runs Buchberger's
//! algorithm. [`GroebnerBasis::s_pair_residuals`] and
//! [`GroebnerBasis::sample_check`] exist to catch inputs that are not
//! Gröbner bases.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::poly::{Monomial, MonomialBasis, Polynomial};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    n: usize,
    generators: Vec<Polynomial>,
    leading: Vec<(Monomial, Rational)>,
    assumed_groebner: bool,
}

/// `dividend = Σ quotients[i]·generators[i] + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl GroebnerBasis {
    pub fn new(n: usize, generators: Vec<Polynomial>, assumed_groebner: bool) -> Result<Self> {
        let mut leading = Vec::with_capacity(generators.len());
        for g in &generators {
            check_dim(n, g.n())?;
            let (m, c) = g
                .leading_term()
                .ok_or_else(|| Error::InvalidSystem("zero polynomial in a Gröbner basis".into()))?;
            leading.push((m.clone(), c.clone()));
        }
        Ok(GroebnerBasis { n, generators, leading, assumed_groebner })
    }

    pub fn empty(n: usize) -> Self {
        GroebnerBasis { n, generators: Vec::new(), leading: Vec::new(), assumed_groebner: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.leading.iter().map(|(m, _)| m)
    }

    pub fn is_assumed_groebner(&self) -> bool {
        self.assumed_groebner
    }

    fn first_divisor(&self, m: &Monomial) -> Option<usize> {
        self.leading.iter().position(|(lm, _)| lm.divides(m))
    }

    pub fn divide(&self, dividend: &Polynomial) -> Result<DivisionResult> {
        divide(dividend, self)
    }

    pub fn remainder(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(divide(p, self)?.remainder)
    }

    /// Remainders of all S-polynomials that do not reduce to zero. Empty
    /// exactly when the generators form a Gröbner basis (Buchberger's
    /// criterion).
    pub fn s_pair_residuals(&self) -> Result<Vec<(usize, usize, Polynomial)>> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let (mi, ci) = &self.leading[i];
                let (mj, cj) = &self.leading[j];
                let l = mi.lcm(mj);
                let ti = mi.quotient_of(&l).expect("lcm is a multiple");
                let tj = mj.quotient_of(&l).expect("lcm is a multiple");
                let s = &self.generators[i].mul_monomial(&ti, &ci.recip())
                    - &self.generators[j].mul_monomial(&tj, &cj.recip());
                let r = self.remainder(&s)?;
                if !r.is_zero() {
                    out.push((i, j, r));
                }
            }
        }
        Ok(out)
    }

    /// Reduces `samples` random ideal elements `Σ cₖ·mₖ·f_{iₖ}` and returns
    /// the first one with a nonzero remainder, if any.
    pub fn sample_check(&self, seed: u64, samples: usize) -> Result<Option<Polynomial>> {
        if self.is_empty() {
            return Ok(None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let multipliers = MonomialBasis::new(self.n, 2);
        for _ in 0..samples {
            let mut element = Polynomial::zero(self.n);
            for _ in 0..3 {
                let g = &self.generators[rng.gen_range(0..self.len())];
                let m = multipliers.get(rng.gen_range(0..multipliers.len()));
                let c = int(rng.gen_range(-3..=3));
                element.add_scaled(&g.mul_monomial(m, &Rational::one()), &c);
            }
            let r = self.remainder(&element)?;
            if !r.is_zero() {
                return Ok(Some(element));
            }
        }
        Ok(None)
    }
}

/// Division by the generators in list order: the current leading term is
/// cancelled by the first generator whose leading monomial divides it, or
/// moved to the remainder when none does.
pub fn divide(dividend: &Polynomial, basis: &GroebnerBasis) -> Result<DivisionResult> {
    check_dim(basis.n, dividend.n())?;
    let n = basis.n;
    let mut quotients = vec![Polynomial::zero(n); basis.len()];
    let mut remainder = Polynomial::zero(n);
    let mut p = dividend.clone();
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.first_divisor(&m) {
            Some(i) => {
                let (lm, lc) = &basis.leading[i];
                let t = lm.quotient_of(&m).expect("divisor found");
                let coef = &c / lc;
                quotients[i].add_term(t.clone(), coef.clone());
                p.add_scaled(&basis.generators[i].mul_monomial(&t, &Rational::one()), &-coef);
            }
            None => {
                remainder.add_term(m.clone(), c.clone());
                p.add_term(m, -c);
            }
        }
    }
    let result = DivisionResult { quotients, remainder };
    debug_assert_eq!(&result.recombine(basis), dividend);
    Ok(result)
}

impl DivisionResult {
    pub fn recombine(&self, basis: &GroebnerBasis) -> Polynomial {
        let mut total = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(basis.generators()) {
            total = &total + &(q * g);
        }
        total
    }
}

/// `Dᵢ = ∏ⱼ (xᵢ − ρⱼ)` for every variable.
pub fn finite_domain_basis(n: usize, roots: &[Rational]) -> Result<GroebnerBasis> {
    if roots.len() < 2 || roots.len() % 2 == 1 {
        return Err(Error::DomainArity(roots.len()));
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].contains(a) {
            return Err(Error::InvalidDomain(format!("duplicate root {a}")));
        }
    }
    let generators = (0..n)
        .map(|i| {
            roots.iter().fold(Polynomial::one(n), |acc, rho| {
                &acc * &(&Polynomial::var(n, i) - &Polynomial::constant(n, rho.clone()))
            })
        })
        .collect();
    GroebnerBasis::new(n, generators, true)
}

pub fn boolean_basis(n: usize) -> GroebnerBasis {
    finite_domain_basis(n, &[int(0), int(1)]).expect("{0, 1} is a valid domain")
}

/// Remainders of `σ` and of each product.
pub fn reduce_identity(
    sigma: &Polynomial,
    products: &[Polynomial],
    basis: &GroebnerBasis,
) -> Result<(Polynomial, Vec<Polynomial>)> {
    let reduced_sigma = basis.remainder(sigma)?;
    let reduced = products.iter().map(|p| basis.remainder(p)).collect::<Result<Vec<_>>>()?;
    Ok((reduced_sigma, reduced))
}

/// Given a reduced identity `r̄ = σ̄ + Σ (hₖpₖ)‾`, returns `g₁…g_t` with
/// `r = σ + Σ hₖpₖ + Σ gᵢfᵢ` exactly. Each `gᵢ = ρᵢ − qᵢ` where `ρ` are the
/// division quotients of `r` and `q` those of `σ + Σ hₖpₖ`.
pub fn reconstruct_proof(
    r: &Polynomial,
    sigma: &Polynomial,
    equality_products: &[(Polynomial, Polynomial)],
    basis: &GroebnerBasis,
) -> Result<Vec<Polynomial>> {
    check_dim(basis.n, r.n())?;
    check_dim(basis.n, sigma.n())?;
    let mut lhs = sigma.clone();
    for (h, p) in equality_products {
        check_dim(basis.n, h.n())?;
        check_dim(basis.n, p.n())?;
        lhs = &lhs + &(h * p);
    }
    let dr = divide(r, basis)?;
    let dl = divide(&lhs, basis)?;
    let residual = &dr.remainder - &dl.remainder;
    if !residual.is_zero() {
        return Err(Error::ReconstructionPrecondition { residual });
    }
    Ok(dr.quotients.iter().zip(&dl.quotients).map(|(rho, q)| rho - q).collect())
}

/// Memoized normal forms of monomials modulo a Gröbner basis.
///
/// For a Gröbner basis the remainder is unique and hence linear, so the
/// normal form of a polynomial is the combination of its monomials' normal
/// forms.
#[derive(Debug)]
pub struct Reducer<'a> {
    basis: &'a GroebnerBasis,
    memo: HashMap<Monomial, Polynomial>,
}

impl<'a> Reducer<'a> {
    pub fn new(basis: &'a GroebnerBasis) -> Self {
        Reducer { basis, memo: HashMap::new() }
    }

    pub fn basis(&self) -> &GroebnerBasis {
        self.basis
    }

    pub fn reduce_monomial(&mut self, m: &Monomial) -> Polynomial {
        if let Some(p) = self.memo.get(m) {
            return p.clone();
        }
        let out = match self.basis.first_divisor(m) {
            None => Polynomial::term(m.clone(), Rational::one()),
            Some(i) => {
                let (lm, lc) = self.basis.leading[i].clone();
                let t = lm.quotient_of(m).expect("divisor found");
                let scale = -lc.recip();
                let tail: Vec<(Monomial, Rational)> = self.basis.generators[i]
                    .terms()
                    .filter(|(mu, _)| **mu != lm)
                    .map(|(mu, c)| (mu.mul(&t), c * &scale))
                    .collect();
                let mut acc = Polynomial::zero(self.basis.n);
                for (mu, c) in tail {
                    let r = self.reduce_monomial(&mu);
                    acc.add_scaled(&r, &c);
                }
                acc
            }
        };
        self.memo.insert(m.clone(), out.clone());
        out
    }

    pub fn reduce(&mut self, p: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(p.n());
        for (m, c) in p.terms() {
            if c.is_zero() {
                continue;
            }
            let r = self.reduce_monomial(m);
            acc.add_scaled(&r, c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    fn single(n: usize, text: &str) -> GroebnerBasis {
        GroebnerBasis::new(n, vec![poly(text, n)], true).unwrap()
    }

    #[test]
    fn division_examples() {
        let b = single(1, "x1^2 - x1");
        let d = divide(&poly("x1^2", 1), &b).unwrap();
        assert_eq!(d.quotients, vec![poly("1", 1)]);
        assert_eq!(d.remainder, poly("x1", 1));

        let d = divide(&poly("x1^3", 1), &b).unwrap();
        assert_eq!(d.quotients[0], poly("x1 + 1", 1));
        assert_eq!(d.remainder, poly("x1", 1));

        let b2 = single(2, "x1^2 - x1");
        let d = divide(&poly("x2", 2), &b2).unwrap();
        assert!(d.quotients[0].is_zero());
        assert_eq!(d.remainder, poly("x2", 2));

        let d = divide(&Polynomial::zero(2), &b2).unwrap();
        assert!(d.remainder.is_zero() && d.quotients[0].is_zero());
    }

    #[test]
    fn finite_domain_examples() {
        let b = finite_domain_basis(2, &[int(0), int(1)]).unwrap();
        assert_eq!(b.generators(), &[poly("x1^2 - x1", 2), poly("x2^2 - x2", 2)]);
        let b = finite_domain_basis(1, &[int(-1), int(1)]).unwrap();
        assert_eq!(b.generators(), &[poly("x1^2 - 1", 1)]);
        let b = finite_domain_basis(1, &[int(0), int(1), int(2), int(3)]).unwrap();
        assert_eq!(b.generators(), &[poly("x1^4 - 6*x1^3 + 11*x1^2 - 6*x1", 1)]);
        assert!(matches!(finite_domain_basis(1, &[int(0), int(0)]), Err(Error::InvalidDomain(_))));
        assert!(matches!(finite_domain_basis(1, &[int(0), int(1), int(2)]), Err(Error::DomainArity(3))));
        assert!(matches!(finite_domain_basis(1, &[int(0)]), Err(Error::DomainArity(1))));
    }

    #[test]
    fn reduce_identity_examples() {
        let b = boolean_basis(1);
        let (s, p) = reduce_identity(&poly("(1 - x1)^2", 1), &[], &b).unwrap();
        assert_eq!(s, poly("1 - x1", 1));
        assert!(p.is_empty());
        let (s, p) = reduce_identity(&Polynomial::zero(1), &[poly("x1^2 - x1", 1)], &b).unwrap();
        assert!(s.is_zero());
        assert_eq!(p, vec![Polynomial::zero(1)]);
        let (s, _) = reduce_identity(&poly("1", 1), &[], &b).unwrap();
        assert_eq!(s, poly("1", 1));
    }

    #[test]
    fn reconstruct_examples() {
        let b = boolean_basis(1);
        let g = reconstruct_proof(&poly("x1", 1), &poly("x1^2", 1), &[], &b).unwrap();
        assert_eq!(g, vec![poly("-1", 1)]);

        let sigma = poly("(x1 - 1)^2", 1);
        let g = reconstruct_proof(&sigma, &sigma, &[], &b).unwrap();
        assert!(g.iter().all(Polynomial::is_zero));

        let empty = GroebnerBasis::empty(1);
        let products = [(poly("1", 1), poly("x1 - 1", 1)), (poly("-1", 1), poly("x1", 1))];
        let g = reconstruct_proof(&poly("-1", 1), &Polynomial::zero(1), &products, &empty).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn reconstruct_reports_residual() {
        let b = boolean_basis(1);
        match reconstruct_proof(&poly("x1 + 1", 1), &poly("x1^2", 1), &[], &b) {
            Err(Error::ReconstructionPrecondition { residual }) => assert_eq!(residual, poly("1", 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn buchberger_criterion_and_sampling() {
        assert!(boolean_basis(3).s_pair_residuals().unwrap().is_empty());
        assert!(boolean_basis(3).sample_check(7, 50).unwrap().is_none());
        // {x1*x2 - 1, x1^2 - x2} is not a Gröbner basis under grlex.
        let bad = GroebnerBasis::new(2, vec![poly("x1*x2 - 1", 2), poly("x1^2 - x2", 2)], true).unwrap();
        assert!(!bad.s_pair_residuals().unwrap().is_empty());
    }

    #[test]
    fn reducer_matches_division() {
        let b = finite_domain_basis(2, &[int(0), int(1), int(2), int(-1)]).unwrap();
        let mut red = Reducer::new(&b);
        let p = poly("x1^5*x2^4 - 3*x1^3*x2 + x2^6 - 2", 2);
        assert_eq!(red.reduce(&p), b.remainder(&p).unwrap());
    }
}
