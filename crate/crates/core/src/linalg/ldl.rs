//! Exact LDLᵀ positive-semidefiniteness test with symmetric pivoting.

use num_traits::{One, Signed, Zero};

use super::RatMatrix;
use crate::rational::Rational;

/// `A = Σₖ dₖ lₖ lₖᵀ` with `dₖ > 0`; every `lₖ` has a 1 at its pivot index.
#[derive(Clone, Debug, PartialEq)]
pub struct LdlFactor {
    pub pivots: Vec<usize>,
    pub diagonal: Vec<Rational>,
    pub columns: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsdCheck {
    Psd(LdlFactor),
    /// `witnessᵀ A witness = value < 0`.
    NotPsd { witness: Vec<Rational>, value: Rational },
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Psd(_))
    }
}

/// Decides whether a symmetric rational matrix is PSD.
///
/// Pivots are taken on positive diagonal entries of the running Schur
/// complement. A negative diagonal entry, or a zero diagonal entry with a
/// nonzero row, yields a witness vector that is mapped back through the
/// elimination so that it certifies the original matrix.
pub fn ldl_psd(a: &RatMatrix) -> PsdCheck {
    assert!(a.is_square(), "LDL needs a square matrix");
    let n = a.rows();
    let mut s = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut factor = LdlFactor { pivots: Vec::new(), diagonal: Vec::new(), columns: Vec::new() };
    // Eliminated indices in order, with their multiplier column (over all indices).
    let mut eliminated: Vec<(usize, Vec<Rational>)> = Vec::new();

    loop {
        if let Some(&i) = active.iter().find(|&&i| s.get(i, i).is_negative()) {
            let mut w = vec![Rational::zero(); n];
            w[i] = Rational::one();
            return not_psd(a, &eliminated, w);
        }
        let mut dropped = Vec::new();
        for &i in &active {
            if !s.get(i, i).is_zero() {
                continue;
            }
            if let Some(&j) = active.iter().find(|&&j| j != i && !s.get(i, j).is_zero()) {
                // (t·eᵢ + eⱼ)ᵀ S (t·eᵢ + eⱼ) = 2t·sᵢⱼ + sⱼⱼ = −1 for the t below.
                let t = -(s.get(j, j) + Rational::one()) / (Rational::from_integer(2.into()) * s.get(i, j));
                let mut w = vec![Rational::zero(); n];
                w[i] = t;
                w[j] = Rational::one();
                return not_psd(a, &eliminated, w);
            }
            dropped.push(i);
        }
        active.retain(|i| !dropped.contains(i));
        let Some(pos) = active.iter().position(|&i| s.get(i, i).is_positive()) else {
            return PsdCheck::Psd(factor);
        };
        let p = active.remove(pos);
        let d = s.get(p, p).clone();
        let mut column = vec![Rational::zero(); n];
        column[p] = Rational::one();
        for &j in &active {
            column[j] = s.get(j, p) / &d;
        }
        for &j in &active {
            if column[j].is_zero() {
                continue;
            }
            let sjp = s.get(j, p).clone();
            for &k in &active {
                if column[k].is_zero() {
                    continue;
                }
                let delta = &sjp * &column[k];
                *s.get_mut(j, k) -= delta;
            }
        }
        factor.pivots.push(p);
        factor.diagonal.push(d);
        factor.columns.push(column.clone());
        eliminated.push((p, column));
    }
}

/// Lifts a Schur-complement witness `w` (supported on still-active indices)
/// to a witness for the original matrix by back substitution through the
/// unit triangular factor.
fn not_psd(a: &RatMatrix, eliminated: &[(usize, Vec<Rational>)], mut w: Vec<Rational>) -> PsdCheck {
    for (p, column) in eliminated.iter().rev() {
        let mut acc = Rational::zero();
        for (j, l) in column.iter().enumerate() {
            if j != *p && !l.is_zero() && !w[j].is_zero() {
                acc += l * &w[j];
            }
        }
        w[*p] = -acc;
    }
    let value = a.quadratic_form(&w);
    debug_assert!(value.is_negative());
    PsdCheck::NotPsd { witness: w, value }
}
