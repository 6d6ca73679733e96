use std::collections::HashMap;

use num_traits::Zero;

use super::certificate::{EqualityTerm, GroebnerTerm, Multiplier, SosCertificate};
use crate::error::{check_dim, Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::symmetry::{is_invariant, is_invariant_system, reynolds_gram, reynolds_poly, GroupSpec, Permutation};

/// Largest group whose elements are enumerated to redistribute multipliers
/// across non-trivial constraint orbits.
pub const ELEMENT_CAP: u64 = 100_000;

/// Averages a certificate over `G`.
///
/// `σ` is replaced by its Reynolds average. Multipliers on invariant
/// constraints are averaged directly; on a non-trivial orbit the multiplier
/// of `r_k` becomes `(1/|G|) Σ_j Σ_{g : g·r_j = r_k} g·q_j`. When every term
/// of an orbit carries a scalar weight this reduces to the orbit mean of the
/// weights, so normal-form certificates stay in normal form.
///
/// Repeated constraints are merged first.
pub fn symmetrize(cert: &SosCertificate, group: &GroupSpec) -> Result<SosCertificate> {
    check_dim(group.n(), cert.n())?;
    if !is_invariant(group, &cert.target) {
        return Err(Error::InvalidSystem("the certificate target is not invariant".into()));
    }
    let sigma = reynolds_gram(group, &cert.sigma)?;
    let mut elements: Option<Vec<Permutation>> = None;

    let equalities = merge_equalities(&cert.equalities);
    let constraints: Vec<Polynomial> = equalities.iter().map(|t| t.constraint.clone()).collect();
    let system = is_invariant_system(group, &constraints);
    if !system.closed {
        return Err(Error::InvalidSystem("the equality constraints are not closed under the group".into()));
    }
    let mut new_equalities: Vec<Option<EqualityTerm>> = vec![None; equalities.len()];
    for orbit in &system.orbits {
        let all_scalar = orbit.iter().all(|&j| matches!(equalities[j].multiplier, Multiplier::Scalar(_)));
        if all_scalar {
            let mut total = Rational::zero();
            for &j in orbit {
                if let Multiplier::Scalar(a) = &equalities[j].multiplier {
                    total += a;
                }
            }
            let mean = total / Rational::from_integer((orbit.len() as i64).into());
            for &j in orbit {
                new_equalities[j] = Some(EqualityTerm::scalar(constraints[j].clone(), mean.clone()));
            }
        } else {
            let multipliers: Vec<Polynomial> = orbit.iter().map(|&j| equalities[j].multiplier_polynomial()).collect();
            let members: Vec<&Polynomial> = orbit.iter().map(|&j| &constraints[j]).collect();
            let averaged = average_orbit(group, &members, &multipliers, &mut elements)?;
            for (&j, h) in orbit.iter().zip(averaged) {
                new_equalities[j] = Some(EqualityTerm::polynomial(constraints[j].clone(), h));
            }
        }
    }

    let groebner = merge_groebner(&cert.groebner);
    let generators: Vec<Polynomial> = groebner.iter().map(|t| t.generator.clone()).collect();
    let gsystem = is_invariant_system(group, &generators);
    if !gsystem.closed {
        return Err(Error::InvalidSystem("the Gröbner generators are not closed under the group".into()));
    }
    let mut new_groebner: Vec<Option<GroebnerTerm>> = vec![None; groebner.len()];
    for orbit in &gsystem.orbits {
        let multipliers: Vec<Polynomial> = orbit.iter().map(|&j| groebner[j].multiplier.clone()).collect();
        let members: Vec<&Polynomial> = orbit.iter().map(|&j| &generators[j]).collect();
        let averaged = average_orbit(group, &members, &multipliers, &mut elements)?;
        for (&j, h) in orbit.iter().zip(averaged) {
            new_groebner[j] = Some(GroebnerTerm { generator: generators[j].clone(), multiplier: h });
        }
    }

    Ok(SosCertificate {
        target: cert.target.clone(),
        sigma,
        equalities: new_equalities.into_iter().map(|t| t.expect("every index is in an orbit")).collect(),
        groebner: new_groebner.into_iter().map(|t| t.expect("every index is in an orbit")).collect(),
        degree_bound: cert.degree_bound,
        mode: cert.mode,
        epsilon: cert.epsilon.clone(),
    })
}

/// Multipliers for one orbit `{r_j}` of distinct constraints.
fn average_orbit(
    group: &GroupSpec,
    members: &[&Polynomial],
    multipliers: &[Polynomial],
    elements: &mut Option<Vec<Permutation>>,
) -> Result<Vec<Polynomial>> {
    if members.len() == 1 {
        return Ok(vec![reynolds_poly(group, &multipliers[0])?]);
    }
    if elements.is_none() {
        *elements = Some(group.elements(ELEMENT_CAP)?);
    }
    let elements = elements.as_ref().expect("just filled");
    let position: HashMap<&Polynomial, usize> = members.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let n = group.n();
    let mut acc = vec![Polynomial::zero(n); members.len()];
    for g in elements {
        for (j, &r) in members.iter().enumerate() {
            let image = g.act_on_polynomial(r)?;
            let k = *position
                .get(&image)
                .ok_or_else(|| Error::InvalidSystem("constraint orbit is not closed".into()))?;
            acc[k] = &acc[k] + &g.act_on_polynomial(&multipliers[j])?;
        }
    }
    let order = Rational::from_integer((elements.len() as i64).into());
    Ok(acc.into_iter().map(|p| p.scale(&order.recip())).collect())
}

fn merge_equalities(terms: &[EqualityTerm]) -> Vec<EqualityTerm> {
    let mut out: Vec<EqualityTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|e| e.constraint == t.constraint) {
            None => out.push(t.clone()),
            Some(e) => {
                e.multiplier = match (&e.multiplier, &t.multiplier) {
                    (Multiplier::Scalar(a), Multiplier::Scalar(b)) => Multiplier::Scalar(a + b),
                    _ => Multiplier::Polynomial(&e.multiplier_polynomial() + &t.multiplier_polynomial()),
                }
            }
        }
    }
    out
}

fn merge_groebner(terms: &[GroebnerTerm]) -> Vec<GroebnerTerm> {
    let mut out: Vec<GroebnerTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|e| e.generator == t.generator) {
            None => out.push(t.clone()),
            Some(e) => e.multiplier = &e.multiplier + &t.multiplier,
        }
    }
    out
}
