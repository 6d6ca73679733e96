use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{check_dim, Result};
use crate::rational::Rational;

/// An exponent vector `α ∈ ℕⁿ` standing for `x^α`.
///
/// The derived `Ord` is the graded lexicographic order: total degree first,
/// then the exponent vectors lexicographically, so `x1^2 > x1*x2 > x2^2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; n] }
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product `x^α · x^β`. Panics on mismatched dimensions.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "monomial dimension mismatch");
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.n() == other.n() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Some(Monomial { degree: other.degree - self.degree, exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "monomial dimension mismatch");
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    /// The multinomial coefficient `|α|! / (α₁!⋯αₙ!)`.
    pub fn multinomial(&self) -> BigUint {
        let mut result = BigUint::one();
        let mut running = 0u32;
        // Product of binomials C(α₁+…+α_i, α_i) keeps every factor integral.
        for &e in &self.exps {
            for j in 1..=e {
                running += 1;
                result *= BigUint::from(running);
                result /= BigUint::from(j);
            }
        }
        result
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.n(), point.len())?;
        let mut value = Rational::one();
        for (x, &e) in point.iter().zip(&self.exps) {
            if e > 0 {
                value *= num_traits::pow(x.clone(), e as usize);
            }
        }
        Ok(value)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic comparison with a dimension check.
pub fn grlex_compare(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    check_dim(a.n(), b.n())?;
    Ok(a.cmp(b))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}
