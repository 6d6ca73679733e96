use std::collections::HashMap;

use super::monomial::Monomial;

/// All monomials of degree at most `d` in `n` variables, grlex ascending.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    d: u32,
    entries: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: u32) -> Self {
        let mut entries = Vec::new();
        for deg in 0..=d {
            let mut current = vec![0u32; n];
            compositions(n, deg, 0, &mut current, &mut entries);
        }
        entries.sort();
        let index = entries.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { n, d, entries, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Monomial] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.entries[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d
    }
}

impl Eq for MonomialBasis {}

/// Appends every exponent vector with entries from position `pos` on summing
/// to `remaining`.
fn compositions(n: usize, remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        compositions(n, remaining - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// `binomial(n + d, d)`, the size of [`MonomialBasis::new`]`(n, d)`.
pub fn basis_size(n: usize, d: u32) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (n as u128 + i) / i;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_binomials() {
        for n in 1..5 {
            for d in 0..4 {
                let b = MonomialBasis::new(n, d);
                assert_eq!(b.len() as u128, basis_size(n, d));
                assert!(b.entries().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn index_lookup() {
        let b = MonomialBasis::new(2, 1);
        let names: Vec<String> = b.entries().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1", "x2", "x1"]);
        assert_eq!(b.index_of(&Monomial::var(2, 0)), Some(2));
        assert_eq!(b.index_of(&Monomial::new(vec![1, 1])), None);
    }
}
