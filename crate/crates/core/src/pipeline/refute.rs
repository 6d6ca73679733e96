use num_traits::Zero;

use super::assemble::{combine_gram, gram_ansatz, matching_system, solve_round_verify};
use super::counts::variable_count_report;
use super::instance::{Goal, PipelineOptions, ProblemInstance};
use super::outcome::{SearchOutcome, SearchReport};
use super::pseudo::find_pseudoexpectation;
use crate::certificates::{bit_size, EqualityTerm, GroebnerTerm, ProofMode, SosCertificate};
use crate::error::{Error, Result};
use crate::groebner::{reconstruct_proof, Reducer};
use crate::poly::Polynomial;
use crate::rational::{int, Rational};

/// Searches for a normal-form refutation
/// `−1 = σ + Σⱼ c̃ⱼ·Σ_{p∈𝒪ⱼ} p² + Σᵢ gᵢDᵢ`
/// with `σ` invariant over a basis of degree `d + k − 1` (`2k` the degree
/// of the domain generators `Dᵢ`) and one scalar per constraint orbit.
///
/// The identity is matched modulo the domain ideal; the `gᵢ` are recovered
/// by division afterwards. On failure a pseudoexpectation of the same degree
/// is searched for and attached as a dual witness.
pub fn refute_invariant_system(inst: &ProblemInstance, opts: &PipelineOptions) -> Result<SearchReport> {
    if !matches!(inst.goal, Goal::Refute) {
        return Err(Error::InvalidInstance("the instance asks for a proof, not a refutation".into()));
    }
    let (basis, orbits) = inst.check_refute()?;
    let n = inst.n;
    let half = inst.degree + inst.domain_half_degree() - 1;
    let proof_degree = 2 * half;
    let counts = variable_count_report(inst)?;
    let mut notes = Vec::new();

    let mut reducer = Reducer::new(&basis);
    let ansatz = gram_ansatz(&inst.group, half, &mut reducer)?;
    let mut used_orbits: Vec<&Vec<usize>> = Vec::new();
    let mut columns = Vec::new();
    for (j, orbit) in orbits.orbits.iter().enumerate() {
        if orbit.iter().any(|&i| inst.equalities[i].degree() > half as i64) {
            notes.push(format!("constraint orbit {} has degree above {half} and is left out", j + 1));
            continue;
        }
        let mut sum = Polynomial::zero(n);
        for &i in orbit {
            sum = &sum + &inst.equalities[i].square();
        }
        columns.push(reducer.reduce(&sum));
        used_orbits.push(orbit);
    }
    let target = Polynomial::constant(n, int(-1));
    let names = (1..=columns.len()).map(|j| format!("c{j}")).collect();
    let sys = matching_system(&ansatz, &columns, &reducer.reduce(&target), names)?;
    let k2 = sys.k2();

    let result = solve_round_verify(&sys, opts, |y| {
        let sigma = combine_gram(&ansatz, &y[..k2])?;
        let mut equalities = Vec::new();
        for (orbit, c) in used_orbits.iter().zip(&y[k2..]) {
            for &i in orbit.iter() {
                equalities.push(EqualityTerm::scalar(inst.equalities[i].clone(), c.clone()));
            }
        }
        let products: Vec<(Polynomial, Polynomial)> =
            equalities.iter().map(|t| (t.multiplier_polynomial(), t.constraint.clone())).collect();
        let multipliers = reconstruct_proof(&target, &sigma.to_polynomial(), &products, &basis)?;
        Ok(SosCertificate {
            target: target.clone(),
            sigma,
            equalities,
            groebner: basis
                .generators()
                .iter()
                .zip(multipliers)
                .map(|(g, h)| GroebnerTerm { generator: g.clone(), multiplier: h })
                .collect(),
            degree_bound: proof_degree,
            mode: ProofMode::NormalForm,
            epsilon: Rational::zero(),
        })
    })?;

    let outcome = match result {
        Ok((certificate, denominator_bound)) => {
            SearchOutcome::Certified { bits: bit_size(&certificate), certificate, denominator_bound }
        }
        Err(failure) => {
            let dual = find_pseudoexpectation(inst, proof_degree, opts)?;
            SearchOutcome::NoCertificate { failure, dual }
        }
    };
    Ok(SearchReport { degree: inst.degree, proof_degree, counts, outcome, notes })
}
