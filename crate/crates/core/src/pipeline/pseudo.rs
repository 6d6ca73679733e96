//! Degree-bounded pseudoexpectations: the dual objects whose existence rules
//! out a refutation of the same degree.

use std::collections::HashSet;

use num_traits::{One, Zero};

use super::assemble::denominator_ladder;
use super::instance::{Domain, PipelineOptions, ProblemInstance};
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, Reducer};
use crate::linalg::numeric::{min_eigenvalue, DMat};
use crate::linalg::RatMatrix;
use crate::poly::{Monomial, MonomialBasis, Polynomial};
use crate::rational::{to_f64, Rational};
use crate::sdp::{rationalize, solve_feasibility, FeasibilitySystem, RationalizeOutcome, SolveOutcome};
use crate::symmetry::{canonical_monomial, enumerate_monomial_orbits, is_invariant_system, GroupSpec};

/// Largest number of domain points enumerated looking for a solution.
pub const POINT_SEARCH_CAP: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum MomentValues {
    Exact(Vec<Rational>),
    Numeric(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PseudoSource {
    /// Orbit average of evaluation at a solution of the system.
    PointEvaluation { point: Vec<Rational> },
    /// Found by the moment SDP; values are exact when rounding succeeded.
    Solver { min_eigenvalue: f64, linear_residual: f64 },
}

/// A linear functional `L` on polynomials of degree at most `degree`, given
/// by its values on monomial-orbit representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Pseudoexpectation {
    pub n: usize,
    pub degree: u32,
    /// The group `L` is constant on the orbits of.
    pub group: GroupSpec,
    /// Sorted canonical representatives, one per orbit of degree `≤ degree`.
    pub representatives: Vec<Monomial>,
    pub values: MomentValues,
    pub source: PseudoSource,
}

/// How far a functional is from being a pseudoexpectation for an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoCheck {
    /// `|L(1) − 1|`.
    pub normalization_error: f64,
    /// Largest `|L(q·m)|` over constraints and domain generators `q` and
    /// monomials `m` with `deg(q·m) ≤ degree`.
    pub max_linear_violation: f64,
    /// Smallest eigenvalue of the moment matrix over all monomials of degree
    /// `≤ degree/2`.
    pub min_eigenvalue: f64,
}

impl PseudoCheck {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.normalization_error <= tolerance
            && self.max_linear_violation <= tolerance
            && self.min_eigenvalue >= -tolerance
    }
}

impl Pseudoexpectation {
    pub fn is_exact(&self) -> bool {
        matches!(self.values, MomentValues::Exact(_))
    }

    /// `L(xᵅ)`, or `None` above the degree.
    pub fn moment(&self, m: &Monomial) -> Option<f64> {
        if m.degree() > self.degree {
            return None;
        }
        let i = self.representatives.binary_search(&canonical_monomial(&self.group, m)).ok()?;
        Some(match &self.values {
            MomentValues::Exact(v) => to_f64(&v[i]),
            MomentValues::Numeric(v) => v[i],
        })
    }

    /// `L(xᵅ)` when the values are exact.
    pub fn exact_moment(&self, m: &Monomial) -> Option<Rational> {
        let MomentValues::Exact(v) = &self.values else { return None };
        if m.degree() > self.degree {
            return None;
        }
        let i = self.representatives.binary_search(&canonical_monomial(&self.group, m)).ok()?;
        Some(v[i].clone())
    }

    pub fn apply(&self, p: &Polynomial) -> Option<f64> {
        p.terms().map(|(m, c)| self.moment(m).map(|v| v * to_f64(c))).sum()
    }

    /// `M[α, β] = L(x^{α+β})` over all monomials of degree `≤ degree/2`.
    pub fn moment_matrix(&self) -> DMat {
        let basis = MonomialBasis::new(self.n, self.degree / 2);
        let k = basis.len();
        let mut data = Vec::with_capacity(k * k);
        for a in basis.entries() {
            for b in basis.entries() {
                data.push(self.moment(&a.mul(b)).expect("within degree"));
            }
        }
        DMat::from_vec(k, data)
    }

    /// Re-derives every defining condition from scratch against `inst`.
    pub fn check(&self, inst: &ProblemInstance) -> Result<PseudoCheck> {
        let basis = inst.groebner_basis()?;
        let one = self.moment(&Monomial::one(self.n)).unwrap_or(f64::NAN);
        let mut violation = 0.0f64;
        for q in inst.equalities.iter().chain(basis.generators()) {
            let room = self.degree as i64 - q.degree().max(0);
            if room < 0 {
                continue;
            }
            for m in MonomialBasis::new(self.n, room as u32).entries() {
                let v = self.apply(&q.mul_monomial(m, &Rational::one())).unwrap_or(f64::NAN);
                violation = violation.max(v.abs());
            }
        }
        Ok(PseudoCheck {
            normalization_error: (one - 1.0).abs(),
            max_linear_violation: violation,
            min_eigenvalue: min_eigenvalue(&self.moment_matrix()),
        })
    }
}

/// Looks for a degree-`degree` pseudoexpectation for the constraints and
/// domain of `inst`, constant on the orbits of its group.
///
/// On a small finite domain a solution of the system is searched for first
/// and its orbit-averaged evaluation returned exactly. Otherwise the
/// symmetric moment SDP is solved numerically and rounded when possible.
/// `None` means nothing was found within tolerance; it is not a proof that
/// none exists.
pub fn find_pseudoexpectation(
    inst: &ProblemInstance,
    degree: u32,
    opts: &PipelineOptions,
) -> Result<Option<Pseudoexpectation>> {
    let basis = inst.groebner_basis()?;
    let group = if is_invariant_system(&inst.group, &inst.equalities).closed
        && is_invariant_system(&inst.group, basis.generators()).closed
    {
        inst.group.clone()
    } else {
        GroupSpec::trivial(inst.n)
    };
    if let Domain::Finite(roots) = &inst.domain {
        if let Some(point) = find_solution(inst, roots)? {
            return Ok(Some(point_evaluation(inst.n, degree, group, point)?));
        }
    }
    match moment_search(inst, &basis, degree, group, opts) {
        Err(Error::ResourceLimit(_) | Error::Numeric(_)) => Ok(None),
        other => other,
    }
}

fn find_solution(inst: &ProblemInstance, roots: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let n = inst.n;
    let count = (roots.len() as u128).checked_pow(n as u32);
    if roots.is_empty() || count.map_or(true, |c| c > POINT_SEARCH_CAP) {
        return Ok(None);
    }
    let mut digits = vec![0usize; n];
    loop {
        let point: Vec<Rational> = digits.iter().map(|&i| roots[i].clone()).collect();
        let mut satisfied = true;
        for p in &inst.equalities {
            if !p.evaluate(&point)?.is_zero() {
                satisfied = false;
                break;
            }
        }
        if satisfied {
            return Ok(Some(point));
        }
        let Some(pos) = digits.iter().rposition(|&i| i + 1 < roots.len()) else {
            return Ok(None);
        };
        digits[pos] += 1;
        digits[pos + 1..].iter_mut().for_each(|i| *i = 0);
    }
}

fn point_evaluation(n: usize, degree: u32, group: GroupSpec, point: Vec<Rational>) -> Result<Pseudoexpectation> {
    let table = enumerate_monomial_orbits(&group, degree);
    let mut values = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let members = table.members(i);
        let mut sum = Rational::zero();
        for m in members {
            sum += m.evaluate(&point)?;
        }
        values.push(sum / Rational::from_integer(members.len().into()));
    }
    Ok(Pseudoexpectation {
        n,
        degree,
        group,
        representatives: table.representatives().to_vec(),
        values: MomentValues::Exact(values),
        source: PseudoSource::PointEvaluation { point },
    })
}

/// The symmetric moment system over standard monomials: one unknown per
/// orbit of monomials in normal form, moment matrix entries
/// `L(NF(x^{α+β}))`, and `L(NF(p·m)) = 0` for every constraint.
fn moment_search(
    inst: &ProblemInstance,
    basis: &GroebnerBasis,
    degree: u32,
    group: GroupSpec,
    opts: &PipelineOptions,
) -> Result<Option<Pseudoexpectation>> {
    let n = inst.n;
    let half = degree / 2;
    let standard = |m: &Monomial| !basis.leading_monomials().any(|lm| lm.divides(m));
    let table = enumerate_monomial_orbits(&group, degree);
    let unknowns: Vec<usize> = (0..table.len()).filter(|&i| standard(&table.representatives()[i])).collect();
    let column = |m: &Monomial| -> usize {
        let orbit = table.orbit_of(m).expect("monomial within degree");
        unknowns.binary_search(&orbit).expect("normal forms are standard")
    };
    let mut reducer = Reducer::new(basis);
    let mut row_of = |p: &Polynomial| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); unknowns.len()];
        for (m, c) in reducer.reduce(p).terms() {
            row[column(m)] += c;
        }
        row
    };

    let moment_basis: Vec<Monomial> =
        MonomialBasis::new(n, half).entries().iter().filter(|m| standard(m)).cloned().collect();
    let k = moment_basis.len();
    let mut pencil = vec![RatMatrix::zeros(k, k); unknowns.len()];
    for (a, ma) in moment_basis.iter().enumerate() {
        for (b, mb) in moment_basis.iter().enumerate() {
            for (j, c) in row_of(&Polynomial::term(ma.mul(mb), Rational::one())).into_iter().enumerate() {
                if !c.is_zero() {
                    pencil[j].set(a, b, c);
                }
            }
        }
    }

    let mut rows = vec![row_of(&Polynomial::one(n))];
    let mut rhs = vec![Rational::one()];
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    let multipliers: Vec<Monomial> =
        MonomialBasis::new(n, degree).entries().iter().filter(|m| standard(m)).cloned().collect();
    for p in &inst.equalities {
        for m in &multipliers {
            if p.degree().max(0) + m.degree() as i64 > degree as i64 {
                continue;
            }
            let row = row_of(&p.mul_monomial(m, &Rational::one()));
            if row.iter().any(|c| !c.is_zero()) && seen.insert(row.clone()) {
                rows.push(row);
                rhs.push(Rational::zero());
            }
        }
    }
    let names = unknowns.iter().map(|&i| format!("L[{}]", table.representatives()[i])).collect();
    let sys = FeasibilitySystem::new(k, pencil, 0, rows, rhs, names)?;

    let mut solver = opts.solver.clone();
    solver.tolerance = opts.pseudo_tolerance;
    let sol = match solve_feasibility(&sys, &solver)? {
        SolveOutcome::Feasible(sol) => sol,
        SolveOutcome::Infeasible(_) => return Ok(None),
    };
    let exact = denominator_ladder(&opts.denominator_bound).into_iter().find_map(|bound| match rationalize(&sol, &sys, &bound) {
        RationalizeOutcome::Exact(y) => Some(y),
        RationalizeOutcome::Failed(_) => None,
    });

    // Spread the standard-monomial values to every orbit through normal forms.
    let reps = table.representatives().to_vec();
    let values = match exact {
        Some(y) => MomentValues::Exact(
            reps.iter().map(|m| row_of(&Polynomial::term(m.clone(), Rational::one())).iter().zip(&y).map(|(c, v)| c * v).sum()).collect(),
        ),
        None => MomentValues::Numeric(
            reps.iter()
                .map(|m| {
                    row_of(&Polynomial::term(m.clone(), Rational::one()))
                        .iter()
                        .zip(&sol.values)
                        .map(|(c, v)| to_f64(c) * v)
                        .sum()
                })
                .collect(),
        ),
    };
    Ok(Some(Pseudoexpectation {
        n,
        degree,
        group,
        representatives: reps,
        values,
        source: PseudoSource::Solver {
            min_eigenvalue: sol.psd_min_eigenvalue_estimate,
            linear_residual: sol.linear_residual_norm,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Goal;
    use crate::poly::{monomial, poly};
    use crate::rational::{frac, int};

    fn boolean(n: usize, eqs: &[&str]) -> ProblemInstance {
        ProblemInstance::new(
            GroupSpec::symmetric(n),
            Domain::Finite(vec![int(0), int(1)]),
            eqs.iter().map(|e| poly(e, n)).collect(),
            Goal::Refute,
            1,
        )
        .unwrap()
    }

    #[test]
    fn point_evaluation_is_averaged() {
        let inst = boolean(2, &["x1 + x2 - 1"]);
        let pe = find_pseudoexpectation(&inst, 2, &PipelineOptions::default()).unwrap().unwrap();
        assert!(matches!(pe.source, PseudoSource::PointEvaluation { .. }));
        assert_eq!(pe.exact_moment(&monomial("x1", 2)), Some(frac(1, 2)));
        assert_eq!(pe.exact_moment(&monomial("x2^2", 2)), Some(frac(1, 2)));
        assert_eq!(pe.exact_moment(&monomial("x1*x2", 2)), Some(int(0)));
        assert!(pe.check(&inst).unwrap().holds(1e-12));
    }

    #[test]
    fn knapsack_moments() {
        // No 0/1 point has x1 + x2 + x3 = 3/2, so this goes through the SDP.
        let inst = boolean(3, &["x1 + x2 + x3 - 3/2"]);
        let pe = find_pseudoexpectation(&inst, 2, &PipelineOptions::default()).unwrap().expect("found");
        assert!(matches!(pe.source, PseudoSource::Solver { .. }));
        // L(p) = 0 forces L(x) = 1/2 and L(p·x1) = 0 forces L(x1x2) = 1/8.
        let x = pe.moment(&monomial("x1", 3)).unwrap();
        let xy = pe.moment(&monomial("x1*x3", 3)).unwrap();
        assert!((x - 0.5).abs() < 1e-9 && (xy - 0.125).abs() < 1e-9);
        assert!(pe.check(&inst).unwrap().holds(1e-6));
    }

    #[test]
    fn contradictory_constraints() {
        let mut inst = boolean(1, &["x1", "x1 - 1"]);
        inst.group = GroupSpec::trivial(1);
        assert_eq!(find_pseudoexpectation(&inst, 2, &PipelineOptions::default()).unwrap(), None);
    }

    #[test]
    fn open_system_falls_back_to_trivial_group() {
        let inst = boolean(2, &["x1 - 1"]);
        let pe = find_pseudoexpectation(&inst, 2, &PipelineOptions::default()).unwrap().unwrap();
        assert!(pe.group.is_trivial());
        assert_eq!(pe.exact_moment(&monomial("x1", 2)), Some(int(1)));
    }
}
