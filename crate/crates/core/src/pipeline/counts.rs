use super::instance::{Goal, ProblemInstance};
use crate::error::Result;
use crate::poly::{basis_size, MonomialBasis};
use crate::symmetry::{enumerate_monomial_orbits, enumerate_pair_orbits, indicator_classes};

/// Size of the search before and after symmetry reduction.
///
/// Before reduction the unknowns are the `ω(ω+1)/2` entries of a symmetric
/// Gram matrix over `W` (`ω = |W|`) plus the multiplier coefficients: one
/// scalar per constraint in refute mode, one coefficient per monomial of
/// degree `≤ 2d − deg p` per constraint `p` in prove mode. After reduction
/// they are one weight per symmetric orbit-indicator class plus one scalar
/// per constraint orbit (refute) or one coefficient per monomial orbit per
/// constraint (prove).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableCounts {
    /// Degree of the Gram basis `W`.
    pub basis_degree: u32,
    /// `|W|`.
    pub monomials: u128,
    /// `|Y| = |W|²`.
    pub monomial_pairs: u128,
    /// `ℓ`, the number of orbits of `Y`.
    pub pair_orbits: usize,
    /// Pair orbits merged with their transposes.
    pub indicator_classes: usize,
    /// `z`, the number of constraint orbits.
    pub constraint_orbits: usize,
    /// Multiplier unknowns before reduction.
    pub multipliers_before: u128,
    /// Multiplier unknowns after reduction.
    pub multipliers_after: usize,
    pub before: u128,
    pub after: usize,
}

/// Counts for the ansatz the pipeline would assemble for `inst` at its
/// degree. Constraints too large for the degree bound are left out on both
/// sides.
pub fn variable_count_report(inst: &ProblemInstance) -> Result<VariableCounts> {
    let n = inst.n;
    let d = inst.degree;
    let refute = matches!(inst.goal, Goal::Refute);
    let basis_degree = if refute { d + inst.domain_half_degree() - 1 } else { d };
    let basis = MonomialBasis::new(n, basis_degree);
    let pairs = enumerate_pair_orbits(&inst.group, basis_degree);
    let classes = indicator_classes(&pairs, &basis)?;
    let omega = basis_size(n, basis_degree);
    let orbits = inst.constraint_orbits();

    let (multipliers_before, multipliers_after) = if refute {
        let usable: Vec<&Vec<usize>> = orbits
            .orbits
            .iter()
            .filter(|o| o.iter().all(|&j| inst.equalities[j].degree() <= basis_degree as i64))
            .collect();
        (usable.iter().map(|o| o.len() as u128).sum(), usable.len())
    } else {
        let mut before = 0u128;
        let mut after = 0usize;
        for p in &inst.equalities {
            let room = 2 * d as i64 - p.degree().max(0);
            if room < 0 {
                continue;
            }
            before += basis_size(n, room as u32);
            after += enumerate_monomial_orbits(&inst.group, room as u32).len();
        }
        (before, after)
    };
    Ok(VariableCounts {
        basis_degree,
        monomials: omega,
        monomial_pairs: omega * omega,
        pair_orbits: pairs.len(),
        indicator_classes: classes.len(),
        constraint_orbits: orbits.count(),
        multipliers_before,
        multipliers_after,
        before: omega * (omega + 1) / 2 + multipliers_before,
        after: classes.len() + multipliers_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Domain;
    use crate::poly::Polynomial;
    use crate::rational::{frac, int, Rational};
    use crate::symmetry::GroupSpec;

    fn knapsack(n: usize, d: u32) -> ProblemInstance {
        let mut p = Polynomial::constant(n, -(Rational::from_integer((n as i64).into()) + frac(1, 2)));
        for i in 0..n {
            p = &p + &Polynomial::var(n, i);
        }
        ProblemInstance::new(GroupSpec::symmetric(n), Domain::Finite(vec![int(0), int(1)]), vec![p], Goal::Refute, d)
            .unwrap()
    }

    #[test]
    fn four_variables_degree_one() {
        let c = variable_count_report(&knapsack(4, 1)).unwrap();
        assert_eq!(c.monomials, 5);
        // (1,1), (1,x), (x,1), (x,x), (x,y).
        assert_eq!(c.pair_orbits, 5);
        assert_eq!(c.indicator_classes, 4);
        assert_eq!(c.constraint_orbits, 1);
        assert_eq!(c.before, 15 + 1);
        assert_eq!(c.after, 4 + 1);
    }

    #[test]
    fn trivial_group_has_no_reduction() {
        let mut inst = knapsack(3, 1);
        inst.group = GroupSpec::trivial(3);
        inst.equalities = vec![Polynomial::var(3, 0)];
        let c = variable_count_report(&inst).unwrap();
        assert_eq!(c.before, c.after as u128);
    }

    #[test]
    fn after_count_is_constant_in_n() {
        for d in 1..=2u32 {
            let counts: Vec<VariableCounts> =
                (2 * d as usize..=2 * d as usize + 4).map(|n| variable_count_report(&knapsack(n, d)).unwrap()).collect();
            assert!(counts.windows(2).all(|w| w[0].after == w[1].after), "d = {d}");
            assert!(counts.windows(2).all(|w| w[0].before < w[1].before), "d = {d}");
        }
    }
}
