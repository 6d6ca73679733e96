//! Coefficient matching shared by the prove and refute searches.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::outcome::SearchFailure;
use super::PipelineOptions;
use crate::certificates::{verify, SosCertificate, Verdict};
use crate::error::Result;
use crate::groebner::Reducer;
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, Monomial, MonomialBasis, Polynomial};
use crate::rational::Rational;
use crate::sdp::{rationalize, solve_feasibility, FeasibilitySystem, RationalizeOutcome, SolveOutcome};
use crate::symmetry::{enumerate_pair_orbits, indicator_classes, GroupSpec};

/// The invariant Gram ansatz: one indicator matrix per merged pair orbit,
/// with the normal form of `⟨Qᵢ, 𝐱𝐱ᵀ⟩`.
pub(crate) struct GramAnsatz {
    pub basis: MonomialBasis,
    pub matrices: Vec<GramMatrix>,
    pub reduced: Vec<Polynomial>,
}

pub(crate) fn gram_ansatz(group: &GroupSpec, degree: u32, reducer: &mut Reducer<'_>) -> Result<GramAnsatz> {
    let n = group.n();
    let basis = MonomialBasis::new(n, degree);
    let pairs = enumerate_pair_orbits(group, degree);
    let classes = indicator_classes(&pairs, &basis)?;
    let mut matrices = Vec::with_capacity(classes.len());
    let mut reduced = Vec::with_capacity(classes.len());
    for class in &classes {
        let mut p = Polynomial::zero(n);
        for &(i, j) in &class.cells {
            p.add_term(basis.get(i).mul(basis.get(j)), Rational::one());
        }
        reduced.push(reducer.reduce(&p));
        matrices.push(GramMatrix::new(basis.clone(), class.matrix(basis.len()))?);
    }
    Ok(GramAnsatz { basis, matrices, reduced })
}

/// `Σ aᵢ·pencil_columnᵢ + Σ bⱼ·free_columnⱼ = rhs`, coefficient by
/// coefficient, with repeated equations removed.
pub(crate) fn matching_system(
    ansatz: &GramAnsatz,
    free_columns: &[Polynomial],
    rhs: &Polynomial,
    free_names: Vec<String>,
) -> Result<FeasibilitySystem> {
    let mut monomials: BTreeSet<&Monomial> = rhs.monomials().collect();
    for col in ansatz.reduced.iter().chain(free_columns) {
        monomials.extend(col.monomials());
    }
    let mut seen: HashSet<(Vec<Rational>, Rational)> = HashSet::new();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for m in monomials {
        let row: Vec<Rational> = ansatz.reduced.iter().chain(free_columns).map(|c| c.coefficient(m)).collect();
        let value = rhs.coefficient(m);
        if seen.insert((row.clone(), value.clone())) {
            rows.push(row);
            values.push(value);
        }
    }
    let mut names: Vec<String> = (1..=ansatz.matrices.len()).map(|i| format!("a{i}")).collect();
    names.extend(free_names);
    FeasibilitySystem::from_gram(
        ansatz.matrices.clone(),
        ansatz.basis.clone(),
        free_columns.len(),
        rows,
        values,
        names,
    )
}

/// `Σ aᵢQᵢ` as a Gram matrix.
pub(crate) fn combine_gram(ansatz: &GramAnsatz, weights: &[Rational]) -> Result<GramMatrix> {
    let k = ansatz.basis.len();
    let mut q = RatMatrix::zeros(k, k);
    for (m, a) in ansatz.matrices.iter().zip(weights) {
        if !a.is_zero() {
            q.add_scaled(m.matrix(), a);
        }
    }
    GramMatrix::new(ansatz.basis.clone(), q)
}

/// Rounding bounds tried in order: `2⁴, 2⁸, 2¹², 2¹⁶, 2²⁴, 2³²`, then
/// doubling the exponent, up to and including `max`.
pub(crate) fn denominator_ladder(max: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut exp = 4u32;
    loop {
        let b = BigInt::one() << exp;
        if &b >= max {
            break;
        }
        out.push(b);
        exp = if exp < 16 { exp + 4 } else { exp * 2 - exp / 2 };
    }
    out.push(max.clone().max(BigInt::one()));
    out
}

/// Solves, rounds along the ladder and verifies each exact candidate built
/// by `build`; the first certificate that verifies wins.
pub(crate) fn solve_round_verify<F>(
    sys: &FeasibilitySystem,
    opts: &PipelineOptions,
    mut build: F,
) -> Result<std::result::Result<(SosCertificate, BigInt), SearchFailure>>
where
    F: FnMut(&[Rational]) -> Result<SosCertificate>,
{
    let sol = match solve_feasibility(sys, &opts.solver)? {
        SolveOutcome::Feasible(sol) => sol,
        SolveOutcome::Infeasible(report) => return Ok(Err(SearchFailure::SolverInfeasible(report))),
    };
    let mut last = None;
    for bound in denominator_ladder(&opts.denominator_bound) {
        match rationalize(&sol, sys, &bound) {
            RationalizeOutcome::Exact(y) => {
                let cert = build(&y)?;
                match verify(&cert) {
                    Verdict::Accepted => return Ok(Ok((cert, bound))),
                    Verdict::Rejected(failures) => last = Some(SearchFailure::VerificationFailed(failures)),
                }
            }
            RationalizeOutcome::Failed(f) => last = Some(SearchFailure::RationalizationFailed(f)),
        }
    }
    Ok(Err(last.expect("the ladder is never empty")))
}
