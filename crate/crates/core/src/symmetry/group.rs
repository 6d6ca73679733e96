use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{check_dim, Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, Monomial, Polynomial};

/// `G = S_{n₁} × … × S_{n_t}` acting on contiguous blocks of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    blocks: Vec<usize>,
}

impl GroupSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInstance("a group needs at least one block".into()));
        }
        if blocks.iter().any(|&b| b == 0) {
            return Err(Error::InvalidInstance("block sizes must be positive".into()));
        }
        Ok(GroupSpec { blocks })
    }

    /// The full symmetric group on `n` variables.
    pub fn symmetric(n: usize) -> Self {
        GroupSpec { blocks: vec![n] }
    }

    /// The trivial group: `n` singleton blocks.
    pub fn trivial(n: usize) -> Self {
        GroupSpec { blocks: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|&b| {
                let r = start..start + b;
                start += b;
                r
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    /// `|G| = ∏ nᵢ!`.
    pub fn order(&self) -> BigUint {
        self.blocks.iter().fold(BigUint::one(), |acc, &b| acc * factorial(b))
    }

    /// Adjacent transpositions inside each block; they generate `G`.
    pub fn generators(&self) -> Vec<Permutation> {
        let n = self.n();
        self.block_ranges()
            .into_iter()
            .flat_map(|r| (r.start..r.end.saturating_sub(1)).map(move |i| Permutation::transposition(n, i, i + 1)))
            .collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.n() == self.n()
            && self.block_ranges().iter().all(|r| r.clone().all(|i| r.contains(&g.apply(i))))
    }

    /// Every element of `G`; refuses groups larger than `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Permutation>> {
        if self.order() > BigUint::from(cap) {
            return Err(Error::ResourceLimit(format!(
                "group {self} has order {} > {cap}",
                self.order()
            )));
        }
        let n = self.n();
        let mut out = vec![Permutation::identity(n)];
        for r in self.block_ranges() {
            let local = all_permutations(r.len());
            let mut next = Vec::with_capacity(out.len() * local.len());
            for g in &out {
                for p in &local {
                    let mut images = g.images.clone();
                    for (k, &pk) in p.iter().enumerate() {
                        images[r.start + k] = r.start + pk;
                    }
                    next.push(Permutation { images });
                }
            }
            out = next;
        }
        Ok(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("S({b})")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// All permutations of `0..k` in lexicographic order.
fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

/// Advances to the next lexicographic permutation; false at the last one.
/// Repeated values are handled, so this enumerates distinct arrangements of
/// a multiset.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A bijection of `{0, …, n−1}`; `images[i] = g(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    /// The cycle `c₀ → c₁ → … → c₀`.
    pub fn cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for (k, &c) in cycle.iter().enumerate() {
            if c >= n {
                return Err(Error::InvalidPermutation(format!("index {c} out of range")));
            }
            images[c] = cycle[(k + 1) % cycle.len()];
        }
        Permutation::new(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "permutation size mismatch");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &g) in self.images.iter().enumerate() {
            images[g] = i;
        }
        Permutation { images }
    }

    pub fn respects(&self, group: &GroupSpec) -> bool {
        group.contains(self)
    }

    /// `g·α`: the exponent at position `g(i)` is `αᵢ`.
    pub fn act_on_monomial(&self, m: &Monomial) -> Result<Monomial> {
        check_dim(self.n(), m.n())?;
        Ok(self.act_unchecked(m))
    }

    pub(crate) fn act_unchecked(&self, m: &Monomial) -> Monomial {
        let mut exps = vec![0; self.n()];
        for (i, &e) in m.exponents().iter().enumerate() {
            exps[self.images[i]] = e;
        }
        Monomial::new(exps)
    }

    pub fn act_on_polynomial(&self, p: &Polynomial) -> Result<Polynomial> {
        check_dim(self.n(), p.n())?;
        Ok(p.map_monomials(|m| self.act_unchecked(m)))
    }

    /// `(g⋆Q)(xᵅ, xᵝ) = Q(g⁻¹·xᵅ, g⁻¹·xᵝ)`, so that
    /// `⟨g⋆Q, 𝐱𝐱ᵀ⟩ = g·⟨Q, 𝐱𝐱ᵀ⟩` and `g⋆(h⋆Q) = (gh)⋆Q`.
    pub fn act_on_gram(&self, q: &GramMatrix) -> Result<GramMatrix> {
        check_dim(self.n(), q.basis().n())?;
        let inv = self.inverse();
        let basis = q.basis();
        let source: Vec<usize> = basis
            .entries()
            .iter()
            .map(|m| basis.index_of(&inv.act_unchecked(m)).expect("full bases are permutation closed"))
            .collect();
        let k = basis.len();
        let mut out = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, q.get(source[i], source[j]).clone());
            }
        }
        GramMatrix::new(basis.clone(), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial, poly, MonomialBasis};
    use crate::rational::int;

    #[test]
    fn monomial_action_examples() {
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(swap.act_on_monomial(&monomial("x1^2*x2", 2)).unwrap(), monomial("x1*x2^2", 2));
        let id = Permutation::identity(2);
        assert_eq!(id.act_on_monomial(&monomial("x1^2*x2", 2)).unwrap(), monomial("x1^2*x2", 2));
        let c = Permutation::cycle(3, &[0, 1, 2]).unwrap();
        assert_eq!(c.act_on_monomial(&monomial("x1", 3)).unwrap(), monomial("x2", 3));
        assert!(c.act_on_monomial(&monomial("x1", 2)).is_err());
    }

    #[test]
    fn polynomial_action_examples() {
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(swap.act_on_polynomial(&poly("x1 + 2*x2", 2)).unwrap(), poly("x2 + 2*x1", 2));
        let sym = poly("x1^2 + x2^2", 2);
        assert_eq!(swap.act_on_polynomial(&sym).unwrap(), sym);
        assert_eq!(swap.act_on_polynomial(&poly("x1 - 1", 2)).unwrap(), poly("x2 - 1", 2));
    }

    #[test]
    fn gram_action_examples() {
        let basis = MonomialBasis::new(2, 1);
        let id = GramMatrix::new(basis.clone(), RatMatrix::identity(3)).unwrap();
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(swap.act_on_gram(&id).unwrap(), id);
        assert_eq!(Permutation::identity(2).act_on_gram(&id).unwrap(), id);

        let q = GramMatrix::rank_one(basis, &poly("2*x1 - x2 + 3", 2)).unwrap();
        let moved = swap.act_on_gram(&q).unwrap();
        assert_eq!(moved.to_polynomial(), swap.act_on_polynomial(&q.to_polynomial()).unwrap());
        assert_eq!(moved.get(0, 0), &int(9));
    }

    #[test]
    fn group_structure() {
        let g = GroupSpec::new(vec![2, 1]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.to_string(), "S(2)xS(1)");
        assert_eq!(g.order(), BigUint::from(2u32));
        assert_eq!(g.generators(), vec![Permutation::transposition(3, 0, 1)]);
        let s4 = GroupSpec::symmetric(4);
        let elems = s4.elements(100).unwrap();
        assert_eq!(elems.len(), 24);
        assert!(elems.iter().all(|e| s4.contains(e)));
        assert!(!g.contains(&Permutation::transposition(3, 1, 2)));
        assert!(GroupSpec::symmetric(10).elements(1000).is_err());
        assert!(GroupSpec::new(vec![2, 0]).is_err());
    }

    #[test]
    fn multiset_permutations_are_distinct() {
        let mut v = vec![0, 0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 12);
    }
}
