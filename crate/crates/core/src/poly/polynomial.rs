use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::error::{check_dim, Error, Result};
use crate::rational::{format_compact, frac, Rational};

/// Sparse polynomial with rational coefficients in `n` variables.
///
/// Terms are kept in a grlex-ordered map without zero coefficients;
/// [`Polynomial::terms`] iterates in grlex descending order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::term(Monomial::var(n, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.n());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            check_dim(n, m.n())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree −1.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree() as i64)
    }

    /// Terms in grlex descending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.n))
    }

    /// Adds `c·m` in place. Panics on mismatched dimensions.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.n(), self.n, "polynomial dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        assert_eq!(other.n, self.n, "polynomial dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n, other.n)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.mul(mono), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn square(&self) -> Polynomial {
        self * self
    }

    /// Applies `f` to every exponent vector and re-collects the terms.
    pub fn map_monomials<F>(&self, mut f: F) -> Polynomial
    where
        F: FnMut(&Monomial) -> Monomial,
    {
        let mut out = Polynomial::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(f(m), v.clone());
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.n, point.len())?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            total += c * m.evaluate(point)?;
        }
        Ok(total)
    }

    /// `max_α |c_α| / multinomial(α)`, zero for the zero polynomial.
    pub fn coefficient_norm(&self) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| c.abs() / Rational::from_integer(m.multinomial().into()))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Largest `|p(x)|` over a uniform grid on `[−1, 1]ⁿ`; a lower bound on
    /// the sup norm over the cube.
    pub fn grid_sup_lower_bound(&self, points_per_axis: usize, cap: u64) -> Result<Rational> {
        if points_per_axis < 2 {
            return Err(Error::InvalidInstance(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        let total = (points_per_axis as u128).checked_pow(self.n as u32);
        match total {
            Some(t) if t <= cap as u128 => {}
            _ => {
                return Err(Error::ResourceLimit(format!(
                    "grid of {points_per_axis}^{} points exceeds cap {cap}",
                    self.n
                )))
            }
        }
        let axis: Vec<Rational> = (0..points_per_axis)
            .map(|j| frac(-1, 1) + frac(2 * j as i64, points_per_axis as i64 - 1))
            .collect();
        let mut index = vec![0usize; self.n];
        let mut best = Rational::zero();
        loop {
            let point: Vec<Rational> = index.iter().map(|&j| axis[j].clone()).collect();
            let v = self.evaluate(&point)?.abs();
            if v > best {
                best = v;
            }
            let mut k = 0;
            loop {
                if k == self.n {
                    return Ok(best);
                }
                index[k] += 1;
                if index[k] < points_per_axis {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
        }
    }

    /// `Σ |c_α|·|α|·h` where `h` is the grid spacing: bounds how much `|p|`
    /// can exceed its grid maximum anywhere in the cube.
    pub fn lipschitz_slack(&self, points_per_axis: usize) -> Rational {
        let h = frac(2, points_per_axis.max(2) as i64 - 1);
        self.terms
            .iter()
            .map(|(m, c)| c.abs() * Rational::from_integer(m.degree().into()) * &h)
            .fold(Rational::zero(), |a, b| a + b)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, other: Polynomial) -> Polynomial {
        &self + &other
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, other: Polynomial) -> Polynomial {
        &self - &other
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, other: Polynomial) -> Polynomial {
        &self * &other
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", format_compact(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_compact(&a))?;
            }
        }
        Ok(())
    }
}
