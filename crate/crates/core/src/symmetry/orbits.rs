//! Orbits of monomials and monomial pairs under block-symmetric groups.
//!
//! Two exponent vectors lie in one orbit exactly when every block carries
//! the same multiset of exponents (or of exponent pairs, for the diagonal
//! action on pairs). Canonical forms sort each block descending, which
//! identifies orbits without touching group elements.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::One;

use super::group::{next_permutation, GroupSpec};
use crate::error::{check_dim, Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, Monomial, MonomialBasis, Polynomial};
use crate::rational::Rational;

pub type MonomialPair = (Monomial, Monomial);

/// Sorts the exponents of every block in descending order.
pub fn canonical_monomial(group: &GroupSpec, m: &Monomial) -> Monomial {
    let mut exps = m.exponents().to_vec();
    for r in group.block_ranges() {
        exps[r].sort_unstable_by(|a, b| b.cmp(a));
    }
    Monomial::new(exps)
}

/// Sorts the coordinate pairs `(αᵢ, βᵢ)` of every block in descending
/// lexicographic order and lays them back onto the block.
pub fn canonical_pair(group: &GroupSpec, a: &Monomial, b: &Monomial) -> MonomialPair {
    let mut pairs: Vec<(u32, u32)> = a.exponents().iter().copied().zip(b.exponents().iter().copied()).collect();
    for r in group.block_ranges() {
        pairs[r].sort_unstable_by(|x, y| y.cmp(x));
    }
    let (ea, eb): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
    (Monomial::new(ea), Monomial::new(eb))
}

/// `∏_blocks multinomial(n_b; multiplicities)` for a sequence of per-index keys.
fn arrangement_count<K: Ord + Clone>(group: &GroupSpec, keys: &[K]) -> BigUint {
    let mut total = BigUint::one();
    for r in group.block_ranges() {
        let mut block: Vec<K> = keys[r.clone()].to_vec();
        block.sort();
        let mut running = 0usize;
        let mut i = 0;
        while i < block.len() {
            let mut j = i;
            while j < block.len() && block[j] == block[i] {
                j += 1;
            }
            for t in 1..=(j - i) {
                running += 1;
                total *= BigUint::from(running);
                total /= BigUint::from(t);
            }
            i = j;
        }
    }
    total
}

pub fn monomial_orbit_size(group: &GroupSpec, m: &Monomial) -> BigUint {
    arrangement_count(group, m.exponents())
}

pub fn pair_orbit_size(group: &GroupSpec, a: &Monomial, b: &Monomial) -> BigUint {
    let keys: Vec<(u32, u32)> = a.exponents().iter().copied().zip(b.exponents().iter().copied()).collect();
    arrangement_count(group, &keys)
}

/// Every distinct image of `m` under the group, refusing orbits larger
/// than `cap`.
pub fn monomial_orbit(group: &GroupSpec, m: &Monomial, cap: u64) -> Result<Vec<Monomial>> {
    check_dim(group.n(), m.n())?;
    let size = monomial_orbit_size(group, m);
    if size > BigUint::from(cap) {
        return Err(Error::ResourceLimit(format!("orbit of {m} has {size} elements > {cap}")));
    }
    let mut out: Vec<Vec<u32>> = vec![m.exponents().to_vec()];
    for r in group.block_ranges() {
        let mut block: Vec<u32> = m.exponents()[r.clone()].to_vec();
        block.sort_unstable();
        let mut arrangements = vec![block.clone()];
        while next_permutation(&mut block) {
            arrangements.push(block.clone());
        }
        let mut next = Vec::with_capacity(out.len() * arrangements.len());
        for base in &out {
            for arr in &arrangements {
                let mut e = base.clone();
                e[r.clone()].copy_from_slice(arr);
                next.push(e);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(Monomial::new).collect())
}

/// Orbits of a finite set of elements: canonical representatives (sorted),
/// membership, and the members of each orbit in enumeration order.
#[derive(Clone, Debug)]
pub struct OrbitTable<E> {
    degree: u32,
    representatives: Vec<E>,
    orbit_of: HashMap<E, usize>,
    members: Vec<Vec<E>>,
}

pub type MonomialOrbitTable = OrbitTable<Monomial>;
pub type PairOrbitTable = OrbitTable<MonomialPair>;

impl<E: Clone + Eq + Hash + Ord> OrbitTable<E> {
    fn build<I, F>(degree: u32, elements: I, canonical: F) -> Self
    where
        I: IntoIterator<Item = E>,
        F: Fn(&E) -> E,
    {
        let mut groups: HashMap<E, Vec<E>> = HashMap::new();
        for e in elements {
            groups.entry(canonical(&e)).or_default().push(e);
        }
        let mut reps: Vec<E> = groups.keys().cloned().collect();
        reps.sort();
        let mut orbit_of = HashMap::new();
        let mut members = Vec::with_capacity(reps.len());
        for (i, rep) in reps.iter().enumerate() {
            let mut ms = groups.remove(rep).expect("representative present");
            ms.sort();
            for m in &ms {
                orbit_of.insert(m.clone(), i);
            }
            members.push(ms);
        }
        OrbitTable { degree, representatives: reps, orbit_of, members }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[E] {
        &self.representatives
    }

    pub fn orbit_of(&self, e: &E) -> Option<usize> {
        self.orbit_of.get(e).copied()
    }

    pub fn members(&self, orbit: usize) -> &[E] {
        &self.members[orbit]
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

/// Orbits of `W = {α : |α| ≤ d}`.
pub fn enumerate_monomial_orbits(group: &GroupSpec, d: u32) -> MonomialOrbitTable {
    let basis = MonomialBasis::new(group.n(), d);
    OrbitTable::build(d, basis.entries().iter().cloned(), |m| canonical_monomial(group, m))
}

/// Orbits of `Y = W × W` under the diagonal action.
pub fn enumerate_pair_orbits(group: &GroupSpec, d: u32) -> PairOrbitTable {
    let basis = MonomialBasis::new(group.n(), d);
    let pairs = basis
        .entries()
        .iter()
        .flat_map(|a| basis.entries().iter().map(move |b| (a.clone(), b.clone())));
    OrbitTable::build(d, pairs, |(a, b)| canonical_pair(group, a, b))
}

/// Invariant 0/1 polynomials `Σ_{α∈O} xᵅ`, one per monomial orbit.
pub fn orbit_sums(table: &MonomialOrbitTable, n: usize) -> Vec<Polynomial> {
    (0..table.len())
        .map(|i| {
            let mut p = Polynomial::zero(n);
            for m in table.members(i) {
                p.add_term(m.clone(), Rational::one());
            }
            p
        })
        .collect()
}

/// `p₂(k, l)`: multisets of nonzero pairs in `ℕ²` summing to `(k, l)`.
pub fn bipartition_count(k: u32, l: u32) -> u128 {
    let parts: Vec<(u32, u32)> = (0..=k)
        .flat_map(|a| (0..=l).map(move |b| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect();
    let mut memo = HashMap::new();
    count_from(k, l, 0, &parts, &mut memo)
}

fn count_from(k: u32, l: u32, start: usize, parts: &[(u32, u32)], memo: &mut HashMap<(u32, u32, usize), u128>) -> u128 {
    if k == 0 && l == 0 {
        return 1;
    }
    if let Some(&v) = memo.get(&(k, l, start)) {
        return v;
    }
    let mut total = 0;
    for (j, &(a, b)) in parts.iter().enumerate().skip(start) {
        if a <= k && b <= l {
            total += count_from(k - a, l - b, j, parts, memo);
        }
    }
    memo.insert((k, l, start), total);
    total
}

/// A symmetric indicator: a pair orbit merged with its transpose orbit,
/// given as cells of a basis-indexed matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorClass {
    pub representative: MonomialPair,
    pub cells: Vec<(usize, usize)>,
}

impl IndicatorClass {
    pub fn matrix(&self, size: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(size, size);
        for &(i, j) in &self.cells {
            m.set(i, j, Rational::one());
        }
        m
    }
}

pub fn indicator_classes(table: &PairOrbitTable, basis: &MonomialBasis) -> Result<Vec<IndicatorClass>> {
    if table.degree() != basis.degree() {
        return Err(Error::InvalidSystem(format!(
            "orbit table degree {} does not match basis degree {}",
            table.degree(),
            basis.degree()
        )));
    }
    let index = |m: &Monomial| basis.index_of(m).ok_or_else(|| Error::InvalidSystem(format!("{m} outside basis")));
    let mut out = Vec::new();
    for i in 0..table.len() {
        let (a, b) = &table.representatives()[i];
        let j = table
            .orbit_of(&(b.clone(), a.clone()))
            .ok_or_else(|| Error::InvalidSystem("transpose orbit missing".into()))?;
        if j < i {
            continue;
        }
        let mut cells = Vec::new();
        for orbit in if i == j { vec![i] } else { vec![i, j] } {
            for (x, y) in table.members(orbit) {
                cells.push((index(x)?, index(y)?));
            }
        }
        cells.sort_unstable();
        out.push(IndicatorClass { representative: (a.clone(), b.clone()), cells });
    }
    Ok(out)
}

/// The 0/1 matrices `Qᵢ` of the merged pair orbits. Their supports are
/// disjoint and sum to the all-ones matrix.
pub fn orbit_indicator_matrices(table: &PairOrbitTable, basis: &MonomialBasis) -> Result<Vec<GramMatrix>> {
    indicator_classes(table, basis)?
        .iter()
        .map(|c| GramMatrix::new(basis.clone(), c.matrix(basis.len())))
        .collect()
}
