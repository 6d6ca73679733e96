use num_bigint::BigInt;

use super::solver::NumericSolution;
use super::system::FeasibilitySystem;
use crate::linalg::{ldl_psd, rref, PsdCheck};
use crate::rational::{best_approximation, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum RationalizeFailure {
    /// `A y = c` has no exact solution at all.
    LinearInconsistent,
    /// The rounded pencil is not PSD: `witnessᵀ (Σ aᵢQᵢ) witness = value < 0`.
    NotPsd { values: Vec<Rational>, witness: Vec<Rational>, value: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RationalizeOutcome {
    Exact(Vec<Rational>),
    Failed(RationalizeFailure),
}

/// Rounds a numeric solution to an exact one.
///
/// The linear system is row reduced with pivots taken among the free
/// coefficients `b` first, then among the pencil weights `a`. The remaining
/// free columns (mostly pencil weights) are rounded to their best
/// continued-fraction approximations with denominator at most `bound`, and
/// the pivot columns are solved exactly, so `A y = c` holds by
/// construction. The pencil is then checked by exact LDLᵀ.
pub fn rationalize(sol: &NumericSolution, sys: &FeasibilitySystem, bound: &BigInt) -> RationalizeOutcome {
    let k2 = sys.k2();
    let vars = sys.variable_count();
    let order: Vec<usize> = (k2..vars).chain(0..k2).collect();
    let r = rref(sys.linear_map(), sys.rhs(), vars, &order);
    if !r.consistent {
        return RationalizeOutcome::Failed(RationalizeFailure::LinearInconsistent);
    }
    let max_den = u64::try_from(bound).unwrap_or(u64::MAX).max(1);
    let mut free = vec![Rational::from_integer(0.into()); vars];
    for c in r.free_cols() {
        let x = sol.values[c];
        free[c] = best_approximation(if x.is_finite() { x } else { 0.0 }, max_den)
            .unwrap_or_else(|_| Rational::from_integer(0.into()));
    }
    let y = r.solve_with_free(&free);
    debug_assert!(sys.linear_residual(&y).iter().all(num_traits::Zero::is_zero));
    match ldl_psd(&sys.pencil(&y)) {
        PsdCheck::Psd(_) => RationalizeOutcome::Exact(y),
        PsdCheck::NotPsd { witness, value } => {
            RationalizeOutcome::Failed(RationalizeFailure::NotPsd { values: y, witness, value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatMatrix;
    use crate::rational::{frac, int};
    use crate::sdp::{solve_feasibility, SolverOptions};

    fn solution(values: Vec<f64>) -> NumericSolution {
        NumericSolution { values, psd_min_eigenvalue_estimate: 0.0, linear_residual_norm: 0.0, iterations: 0 }
    }

    #[test]
    fn rounds_near_integer() {
        let sys = FeasibilitySystem::new(1, vec![RatMatrix::identity(1)], 0, vec![], vec![], vec!["a1".into()]).unwrap();
        assert_eq!(
            rationalize(&solution(vec![0.999999997]), &sys, &BigInt::from(100)),
            RationalizeOutcome::Exact(vec![int(1)])
        );
    }

    #[test]
    fn free_coefficients_absorb_rounding() {
        // a − b = 0 with a the weight of [1]: b is solved exactly from a.
        let sys = FeasibilitySystem::new(
            1,
            vec![RatMatrix::identity(1)],
            1,
            vec![vec![int(1), int(-1)]],
            vec![int(0)],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert_eq!(
            rationalize(&solution(vec![0.5000001, 0.4999]), &sys, &BigInt::from(100)),
            RationalizeOutcome::Exact(vec![frac(1, 2), frac(1, 2)])
        );
    }

    #[test]
    fn fine_solution_needs_large_denominator() {
        let c = frac(1, 999_983);
        let mut q1 = RatMatrix::zeros(2, 2);
        q1.set(0, 0, int(1));
        q1.set(1, 1, int(-1));
        let mut q2 = RatMatrix::zeros(2, 2);
        q2.set(0, 0, -c.clone());
        q2.set(1, 1, c.clone());
        let sys = FeasibilitySystem::new(
            2,
            vec![q1, q2],
            0,
            vec![vec![int(0), int(1)]],
            vec![int(1)],
            vec!["a1".into(), "a2".into()],
        )
        .unwrap();
        let sol = solve_feasibility(&sys, &SolverOptions::default()).unwrap();
        let sol = sol.solution().expect("a₁ = c is feasible").clone();
        match rationalize(&sol, &sys, &BigInt::from(100)) {
            RationalizeOutcome::Failed(RationalizeFailure::NotPsd { value, .. }) => assert!(value < int(0)),
            other => panic!("{other:?}"),
        }
    }
}
