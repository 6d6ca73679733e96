use num_traits::{Signed, Zero};

use super::assemble::{combine_gram, gram_ansatz, matching_system, solve_round_verify};
use super::counts::variable_count_report;
use super::instance::{PipelineOptions, ProblemInstance};
use super::outcome::{SearchOutcome, SearchReport};
use crate::certificates::{bit_size, verify, EqualityTerm, GroebnerTerm, ProofMode, SosCertificate};
use crate::error::{Error, Result};
use crate::groebner::{reconstruct_proof, GroebnerBasis, Reducer};
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, MonomialBasis, Polynomial};
use crate::rational::Rational;
use crate::symmetry::{enumerate_monomial_orbits, orbit_sums};

/// Searches for `r + ε = σ + Σⱼ λⱼpⱼ + Σᵢ gᵢfᵢ` of degree `2d` with `σ`
/// invariant and each `λⱼ` a combination of monomial-orbit sums of degree
/// at most `2d − deg pⱼ`.
///
/// A target whose normal form is a nonnegative constant is certified
/// directly by a constant `σ`.
pub fn prove_invariant(inst: &ProblemInstance, opts: &PipelineOptions) -> Result<SearchReport> {
    let (basis, target) = inst.check_prove()?;
    let n = inst.n;
    let d = inst.degree;
    let proof_degree = 2 * d;
    if target.degree() > proof_degree as i64 {
        return Err(Error::InvalidInstance(format!("the target has degree above 2d = {proof_degree}")));
    }
    let counts = variable_count_report(inst)?;
    let mut notes = Vec::new();
    let mut reducer = Reducer::new(&basis);
    let reduced_target = reducer.reduce(&target);

    if reduced_target.degree() <= 0 && !reduced_target.constant_term().is_negative() {
        let certificate = constant_certificate(inst, &basis, &target, &reduced_target.constant_term(), proof_degree)?;
        if verify(&certificate).is_accepted() {
            notes.push("the target reduces to a nonnegative constant".into());
            let outcome = SearchOutcome::Certified {
                bits: bit_size(&certificate),
                certificate,
                denominator_bound: 1.into(),
            };
            return Ok(SearchReport { degree: d, proof_degree, counts, outcome, notes });
        }
    }

    let ansatz = gram_ansatz(&inst.group, d, &mut reducer)?;
    // (constraint index, multiplier basis polynomial) per free column.
    let mut multiplier_terms: Vec<(usize, Polynomial)> = Vec::new();
    let mut columns = Vec::new();
    let mut names = Vec::new();
    for (j, p) in inst.equalities.iter().enumerate() {
        let room = proof_degree as i64 - p.degree().max(0);
        if room < 0 {
            notes.push(format!("constraint {} has degree above 2d and is left out", j + 1));
            continue;
        }
        let table = enumerate_monomial_orbits(&inst.group, room as u32);
        for (o, sum) in orbit_sums(&table, n).into_iter().enumerate() {
            columns.push(reducer.reduce(&(&sum * p)));
            names.push(format!("h{}_{}", j + 1, o + 1));
            multiplier_terms.push((j, sum));
        }
    }
    let sys = matching_system(&ansatz, &columns, &reduced_target, names)?;
    let k2 = sys.k2();

    let result = solve_round_verify(&sys, opts, |y| {
        let sigma = combine_gram(&ansatz, &y[..k2])?;
        let mut multipliers = vec![Polynomial::zero(n); inst.equalities.len()];
        for ((j, sum), b) in multiplier_terms.iter().zip(&y[k2..]) {
            if !b.is_zero() {
                multipliers[*j].add_scaled(sum, b);
            }
        }
        let equalities: Vec<EqualityTerm> = inst
            .equalities
            .iter()
            .zip(multipliers)
            .map(|(p, h)| EqualityTerm::polynomial(p.clone(), h))
            .collect();
        assemble(inst, &basis, &target, sigma, equalities, proof_degree)
    })?;

    let outcome = match result {
        Ok((certificate, denominator_bound)) => {
            SearchOutcome::Certified { bits: bit_size(&certificate), certificate, denominator_bound }
        }
        Err(failure) => SearchOutcome::NoCertificate { failure, dual: None },
    };
    Ok(SearchReport { degree: d, proof_degree, counts, outcome, notes })
}

fn constant_certificate(
    inst: &ProblemInstance,
    basis: &GroebnerBasis,
    target: &Polynomial,
    value: &Rational,
    proof_degree: u32,
) -> Result<SosCertificate> {
    let mut q = RatMatrix::zeros(1, 1);
    q.set(0, 0, value.clone());
    let sigma = GramMatrix::new(MonomialBasis::new(inst.n, 0), q)?;
    let equalities =
        inst.equalities.iter().map(|p| EqualityTerm::polynomial(p.clone(), Polynomial::zero(inst.n))).collect();
    assemble(inst, basis, target, sigma, equalities, proof_degree)
}

fn assemble(
    inst: &ProblemInstance,
    basis: &GroebnerBasis,
    target: &Polynomial,
    sigma: GramMatrix,
    equalities: Vec<EqualityTerm>,
    proof_degree: u32,
) -> Result<SosCertificate> {
    let products: Vec<(Polynomial, Polynomial)> =
        equalities.iter().map(|t| (t.multiplier_polynomial(), t.constraint.clone())).collect();
    let multipliers = reconstruct_proof(target, &sigma.to_polynomial(), &products, basis)?;
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
        mode: ProofMode::General,
        epsilon: inst.epsilon.clone(),
    })
}
