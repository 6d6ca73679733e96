use num_bigint::BigInt;

use crate::error::{check_dim, Error, Result};
use crate::groebner::{finite_domain_basis, GroebnerBasis};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::sdp::SolverOptions;
use crate::symmetry::{is_invariant, is_invariant_system, GroupSpec, SystemOrbits};

/// The ideal part of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Every variable ranges over these roots: generators `∏ⱼ (xᵢ − ρⱼ)`.
    Finite(Vec<Rational>),
    /// Caller-asserted Gröbner basis (possibly empty).
    Groebner(Vec<Polynomial>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Goal {
    /// Look for a proof of `−1`.
    Refute,
    /// Look for a proof of `r + ε ≥ 0`.
    Prove(Polynomial),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub n: usize,
    pub group: GroupSpec,
    pub domain: Domain,
    pub equalities: Vec<Polynomial>,
    pub goal: Goal,
    /// The half degree `d`.
    pub degree: u32,
    pub epsilon: Rational,
}

/// `2⁻²⁰`.
pub fn default_epsilon() -> Rational {
    Rational::new(1.into(), BigInt::from(1u64 << 20))
}

impl ProblemInstance {
    pub fn new(group: GroupSpec, domain: Domain, equalities: Vec<Polynomial>, goal: Goal, degree: u32) -> Result<Self> {
        let n = group.n();
        for p in &equalities {
            check_dim(n, p.n())?;
        }
        if let Goal::Prove(r) = &goal {
            check_dim(n, r.n())?;
        }
        if let Domain::Groebner(gens) = &domain {
            for g in gens {
                check_dim(n, g.n())?;
            }
        }
        Ok(ProblemInstance { n, group, domain, equalities, goal, degree, epsilon: default_epsilon() })
    }

    pub fn groebner_basis(&self) -> Result<GroebnerBasis> {
        match &self.domain {
            Domain::Finite(roots) => finite_domain_basis(self.n, roots),
            Domain::Groebner(gens) => GroebnerBasis::new(self.n, gens.clone(), true),
        }
    }

    /// `k` with domain generators of degree `2k`; 1 for an explicit basis.
    pub fn domain_half_degree(&self) -> u32 {
        match &self.domain {
            Domain::Finite(roots) => (roots.len() / 2).max(1) as u32,
            Domain::Groebner(_) => 1,
        }
    }

    pub fn constraint_orbits(&self) -> SystemOrbits {
        is_invariant_system(&self.group, &self.equalities)
    }

    /// Refute-mode hypotheses: a finite domain and an invariant system.
    pub(crate) fn check_refute(&self) -> Result<(GroebnerBasis, SystemOrbits)> {
        if !matches!(self.domain, Domain::Finite(_)) {
            return Err(Error::InvalidInstance("refutation search needs a finite domain".into()));
        }
        let basis = self.groebner_basis()?;
        let orbits = self.constraint_orbits();
        if !orbits.closed {
            return Err(Error::InvalidInstance("the equality constraints are not closed under the group".into()));
        }
        Ok((basis, orbits))
    }

    /// Prove-mode hypotheses: invariant target and constraints, and a genuine
    /// Gröbner basis when one is given explicitly.
    pub(crate) fn check_prove(&self) -> Result<(GroebnerBasis, Polynomial)> {
        let Goal::Prove(r) = &self.goal else {
            return Err(Error::InvalidInstance("the instance has no target polynomial".into()));
        };
        if !is_invariant(&self.group, r) {
            return Err(Error::InvalidInstance(format!("the target {r} is not invariant under {}", self.group)));
        }
        if let Some(p) = self.equalities.iter().find(|p| !is_invariant(&self.group, p)) {
            return Err(Error::InvalidInstance(format!("the constraint {p} is not invariant under {}", self.group)));
        }
        let basis = self.groebner_basis()?;
        if matches!(self.domain, Domain::Groebner(_)) {
            if let Some((i, j, _)) = basis.s_pair_residuals()?.into_iter().next() {
                return Err(Error::InvalidInstance(format!(
                    "the given generators are not a Gröbner basis (S-pair {} {} does not reduce to 0)",
                    i + 1,
                    j + 1
                )));
            }
        }
        let shifted = r + &Polynomial::constant(self.n, self.epsilon.clone());
        Ok((basis, shifted))
    }
}

/// Solver and rounding settings shared by the searches.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    pub solver: SolverOptions,
    /// Largest denominator tried when rounding.
    pub denominator_bound: BigInt,
    /// Tolerance for accepting a numeric pseudoexpectation.
    pub pseudo_tolerance: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            solver: SolverOptions::default(),
            denominator_bound: BigInt::from(1u64 << 32),
            pseudo_tolerance: 1e-6,
        }
    }
}
