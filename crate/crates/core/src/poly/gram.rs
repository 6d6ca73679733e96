use num_traits::Zero;

use super::{MonomialBasis, Polynomial};
use crate::error::{check_dim, Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// A symmetric matrix `Q` indexed by a monomial basis `𝐱`; it stands for the
/// polynomial `⟨Q, 𝐱𝐱ᵀ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    basis: MonomialBasis,
    entries: RatMatrix,
}

impl GramMatrix {
    pub fn new(basis: MonomialBasis, entries: RatMatrix) -> Result<Self> {
        check_dim(basis.len(), entries.rows())?;
        check_dim(basis.len(), entries.cols())?;
        if !entries.is_symmetric() {
            return Err(Error::InvalidSystem("Gram matrix is not symmetric".into()));
        }
        Ok(GramMatrix { basis, entries })
    }

    pub fn zero(basis: MonomialBasis) -> Self {
        let k = basis.len();
        GramMatrix { basis, entries: RatMatrix::zeros(k, k) }
    }

    /// `v vᵀ` where `v` is the coefficient vector of `p` in the basis.
    pub fn rank_one(basis: MonomialBasis, p: &Polynomial) -> Result<Self> {
        let v = coefficient_vector(&basis, p)?;
        let k = basis.len();
        let mut entries = RatMatrix::zeros(k, k);
        for i in 0..k {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if !v[j].is_zero() {
                    entries.set(i, j, &v[i] * &v[j]);
                }
            }
        }
        Ok(GramMatrix { basis, entries })
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.entries.get(i, j)
    }

    /// `⟨Q, 𝐱𝐱ᵀ⟩ = Σᵢⱼ Qᵢⱼ x^{αᵢ+αⱼ}`.
    pub fn to_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.basis.n());
        let k = self.dim();
        for i in 0..k {
            for j in 0..k {
                let q = self.entries.get(i, j);
                if !q.is_zero() {
                    p.add_term(self.basis.get(i).mul(self.basis.get(j)), q.clone());
                }
            }
        }
        p
    }

    /// Re-indexes onto a basis of at least the same degree.
    pub fn embed(&self, target: &MonomialBasis) -> Result<GramMatrix> {
        check_dim(self.basis.n(), target.n())?;
        if target.degree() < self.basis.degree() {
            return Err(Error::InvalidSystem("cannot embed a Gram matrix into a smaller basis".into()));
        }
        let k = target.len();
        let mut entries = RatMatrix::zeros(k, k);
        let map: Vec<usize> = self
            .basis
            .entries()
            .iter()
            .map(|m| target.index_of(m).expect("smaller basis is contained in larger"))
            .collect();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let q = self.entries.get(i, j);
                if !q.is_zero() {
                    entries.set(map[i], map[j], q.clone());
                }
            }
        }
        Ok(GramMatrix { basis: target.clone(), entries })
    }

    /// Highest degree among basis monomials whose row is not identically
    /// zero, or `None` for the zero matrix.
    pub fn support_degree(&self) -> Option<u32> {
        (0..self.dim())
            .filter(|&i| self.entries.row(i).iter().any(|v| !v.is_zero()))
            .map(|i| self.basis.get(i).degree())
            .max()
    }
}

/// Coefficients of `p` in the basis; fails if `p` has a term outside it.
pub fn coefficient_vector(basis: &MonomialBasis, p: &Polynomial) -> Result<Vec<Rational>> {
    check_dim(basis.n(), p.n())?;
    let mut v = vec![Rational::zero(); basis.len()];
    for (m, c) in p.terms() {
        let i = basis
            .index_of(m)
            .ok_or_else(|| Error::InvalidSystem(format!("monomial {m} is outside the basis")))?;
        v[i] = c.clone();
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;
    use crate::rational::int;

    #[test]
    fn unit_entry_on_constant_is_one() {
        let b = MonomialBasis::new(1, 1);
        let mut q = RatMatrix::zeros(2, 2);
        q.set(0, 0, int(1));
        let g = GramMatrix::new(b, q).unwrap();
        assert_eq!(g.to_polynomial(), poly("1", 1));
    }

    #[test]
    fn rank_one_is_a_square() {
        let b = MonomialBasis::new(2, 1);
        let p = poly("x1 - 2*x2 + 3", 2);
        let g = GramMatrix::rank_one(b, &p).unwrap();
        assert_eq!(g.to_polynomial(), p.square());
        let bigger = g.embed(&MonomialBasis::new(2, 2)).unwrap();
        assert_eq!(bigger.to_polynomial(), p.square());
        assert_eq!(bigger.support_degree(), Some(1));
    }

    #[test]
    fn rejects_asymmetric_entries() {
        let b = MonomialBasis::new(1, 1);
        let q = RatMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]);
        assert!(GramMatrix::new(b, q).is_err());
    }
}
