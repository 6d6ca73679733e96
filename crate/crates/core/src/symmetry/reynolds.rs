use std::collections::HashMap;

use num_traits::Zero;

use super::group::GroupSpec;
use super::orbits::{canonical_pair, monomial_orbit, MonomialPair};
use crate::error::{check_dim, Result};
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, Polynomial};
use crate::rational::Rational;

/// Largest single orbit the Reynolds operator will expand.
pub const ORBIT_CAP: u64 = 1_000_000;

/// `R_G(p) = (1/|G|) Σ_g g·p`, evaluated term by term as the average of
/// each monomial over its orbit.
pub fn reynolds_poly(group: &GroupSpec, p: &Polynomial) -> Result<Polynomial> {
    check_dim(group.n(), p.n())?;
    let mut out = Polynomial::zero(p.n());
    for (m, c) in p.terms() {
        let orbit = monomial_orbit(group, m, ORBIT_CAP)?;
        let share = c / Rational::from_integer((orbit.len() as i64).into());
        for o in orbit {
            out.add_term(o, share.clone());
        }
    }
    Ok(out)
}

/// `Q̄ = (1/|G|) Σ_g g⋆Q`: each entry becomes the mean of `Q` over the
/// pair orbit of its cell.
pub fn reynolds_gram(group: &GroupSpec, q: &GramMatrix) -> Result<GramMatrix> {
    let basis = q.basis();
    check_dim(group.n(), basis.n())?;
    let k = basis.len();
    let mut classes: HashMap<MonomialPair, (Rational, i64, Vec<(usize, usize)>)> = HashMap::new();
    for i in 0..k {
        for j in 0..k {
            let key = canonical_pair(group, basis.get(i), basis.get(j));
            let slot = classes.entry(key).or_insert_with(|| (Rational::zero(), 0, Vec::new()));
            slot.0 += q.get(i, j);
            slot.1 += 1;
            slot.2.push((i, j));
        }
    }
    let mut out = RatMatrix::zeros(k, k);
    for (sum, count, cells) in classes.into_values() {
        if sum.is_zero() {
            continue;
        }
        let mean = sum / Rational::from_integer(count.into());
        for (i, j) in cells {
            out.set(i, j, mean.clone());
        }
    }
    GramMatrix::new(basis.clone(), out)
}

/// True iff `p` is fixed by every generator of the group.
pub fn is_invariant(group: &GroupSpec, p: &Polynomial) -> bool {
    p.n() == group.n()
        && group
            .generators()
            .iter()
            .all(|g| g.act_on_polynomial(p).map(|q| &q == p).unwrap_or(false))
}

/// True iff every entry of the Gram matrix is fixed by the group.
pub fn is_invariant_gram(group: &GroupSpec, q: &GramMatrix) -> bool {
    group
        .generators()
        .iter()
        .all(|g| g.act_on_gram(q).map(|moved| &moved == q).unwrap_or(false))
}

/// Closure of a constraint list under the group, with its orbit partition
/// (indices into the list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemOrbits {
    pub closed: bool,
    pub orbits: Vec<Vec<usize>>,
}

impl SystemOrbits {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of(&self, i: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.contains(&i))
    }
}

pub fn is_invariant_system(group: &GroupSpec, system: &[Polynomial]) -> SystemOrbits {
    let mut position: HashMap<&Polynomial, usize> = HashMap::new();
    for (i, p) in system.iter().enumerate() {
        position.entry(p).or_insert(i);
    }
    let mut parent: Vec<usize> = (0..system.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut closed = true;
    for (i, p) in system.iter().enumerate() {
        if p.n() != group.n() {
            closed = false;
            continue;
        }
        for g in group.generators() {
            let image = g.act_on_polynomial(p).expect("dimension checked");
            match position.get(&image) {
                Some(&k) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => closed = false,
            }
        }
    }
    let mut by_root: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..system.len() {
        let r = find(&mut parent, i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            by_root.push(Vec::new());
            by_root.len() - 1
        });
        by_root[slot].push(i);
    }
    SystemOrbits { closed, orbits: by_root }
}
