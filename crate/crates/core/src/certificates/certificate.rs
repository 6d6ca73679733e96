use num_traits::{Signed, Zero};

use crate::error::{check_dim, Result};
use crate::linalg::{ldl_psd, PsdCheck, RatMatrix};
use crate::poly::{GramMatrix, Monomial, MonomialBasis, Polynomial};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofMode {
    /// `r = σ + Σ hₖpₖ + Σ gᵢfᵢ` with arbitrary polynomial multipliers.
    General,
    /// Every equality constraint enters squared with a scalar weight:
    /// `r = σ + Σ aₖpₖ² + Σ gᵢfᵢ`.
    NormalForm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Multiplier {
    /// Contributes `h·p`.
    Polynomial(Polynomial),
    /// Contributes `a·p²`.
    Scalar(Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityTerm {
    pub constraint: Polynomial,
    pub multiplier: Multiplier,
}

impl EqualityTerm {
    pub fn polynomial(constraint: Polynomial, multiplier: Polynomial) -> Self {
        EqualityTerm { constraint, multiplier: Multiplier::Polynomial(multiplier) }
    }

    pub fn scalar(constraint: Polynomial, a: Rational) -> Self {
        EqualityTerm { constraint, multiplier: Multiplier::Scalar(a) }
    }

    /// The multiplier `h` with `h·p` equal to this term's contribution.
    pub fn multiplier_polynomial(&self) -> Polynomial {
        match &self.multiplier {
            Multiplier::Polynomial(h) => h.clone(),
            Multiplier::Scalar(a) => self.constraint.scale(a),
        }
    }

    pub fn product(&self) -> Polynomial {
        &self.multiplier_polynomial() * &self.constraint
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerTerm {
    pub generator: Polynomial,
    pub multiplier: Polynomial,
}

impl GroebnerTerm {
    pub fn product(&self) -> Polynomial {
        &self.multiplier * &self.generator
    }
}

/// A sum-of-squares proof `target = ⟨Q, 𝐱𝐱ᵀ⟩ + Σ equality terms + Σ Gröbner
/// terms` with `Q ⪰ 0`.
///
/// `epsilon` records the shift already folded into `target` by the prove
/// pipeline; it is informational and not used by [`verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct SosCertificate {
    pub target: Polynomial,
    pub sigma: GramMatrix,
    pub equalities: Vec<EqualityTerm>,
    pub groebner: Vec<GroebnerTerm>,
    pub degree_bound: u32,
    pub mode: ProofMode,
    pub epsilon: Rational,
}

/// One failed sub-check of [`verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    Dimension(String),
    /// `target − expand(cert)`, nonzero.
    Identity { residual: Polynomial },
    GramNotSymmetric,
    /// `witnessᵀ Q witness = value < 0`.
    NotPsd { witness: Vec<Rational>, value: Rational },
    Degree { component: String, degree: i64, bound: u32 },
    NormalForm { index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accepted,
    Rejected(Vec<Failure>),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }

    pub fn failures(&self) -> &[Failure] {
        match self {
            Verdict::Accepted => &[],
            Verdict::Rejected(f) => f,
        }
    }

    pub fn residual(&self) -> Option<&Polynomial> {
        self.failures().iter().find_map(|f| match f {
            Failure::Identity { residual } => Some(residual),
            _ => None,
        })
    }
}

impl SosCertificate {
    pub fn n(&self) -> usize {
        self.target.n()
    }

    /// The certificate `0 = 0`.
    pub fn zero(n: usize) -> Self {
        SosCertificate {
            target: Polynomial::zero(n),
            sigma: GramMatrix::zero(MonomialBasis::new(n, 0)),
            equalities: Vec::new(),
            groebner: Vec::new(),
            degree_bound: 0,
            mode: ProofMode::General,
            epsilon: Rational::zero(),
        }
    }

    /// `c = c·1²` for `c ≥ 0`.
    pub fn constant(n: usize, c: &Rational) -> Self {
        assert!(!c.is_negative(), "a constant certificate needs c >= 0");
        let mut q = RatMatrix::zeros(1, 1);
        q.set(0, 0, c.clone());
        SosCertificate {
            target: Polynomial::constant(n, c.clone()),
            sigma: GramMatrix::new(MonomialBasis::new(n, 0), q).expect("1x1 is symmetric"),
            ..Self::zero(n)
        }
    }

    /// `p²` as a rank-one Gram matrix.
    pub fn square(p: &Polynomial) -> Self {
        let d = p.degree().max(0) as u32;
        let basis = MonomialBasis::new(p.n(), d);
        SosCertificate {
            target: p.square(),
            sigma: GramMatrix::rank_one(basis, p).expect("basis covers p"),
            degree_bound: 2 * d,
            ..Self::zero(p.n())
        }
    }

    /// The sum of two certificates (targets add, components merge).
    pub fn plus(&self, other: &SosCertificate) -> SosCertificate {
        assert_eq!(self.n(), other.n(), "certificate dimension mismatch");
        let degree = self.sigma.basis().degree().max(other.sigma.basis().degree());
        let basis = MonomialBasis::new(self.n(), degree);
        let mut q = self.sigma.embed(&basis).expect("larger basis").matrix().clone();
        q.add_scaled(other.sigma.embed(&basis).expect("larger basis").matrix(), &Rational::from_integer(1.into()));
        let mut equalities = self.equalities.clone();
        for term in &other.equalities {
            merge_equality(&mut equalities, term.clone());
        }
        let mut groebner = self.groebner.clone();
        for term in &other.groebner {
            merge_groebner(&mut groebner, term.clone());
        }
        SosCertificate {
            target: &self.target + &other.target,
            sigma: GramMatrix::new(basis, q).expect("sum of symmetric matrices"),
            equalities,
            groebner,
            degree_bound: self.degree_bound.max(other.degree_bound),
            mode: if self.mode == ProofMode::NormalForm && other.mode == ProofMode::NormalForm {
                ProofMode::NormalForm
            } else {
                ProofMode::General
            },
            epsilon: &self.epsilon + &other.epsilon,
        }
    }

    /// `c·cert` for `c ≥ 0`.
    pub fn scaled(&self, c: &Rational) -> SosCertificate {
        assert!(!c.is_negative(), "scaling a certificate needs c >= 0");
        SosCertificate {
            target: self.target.scale(c),
            sigma: GramMatrix::new(self.sigma.basis().clone(), self.sigma.matrix().scale(c)).expect("symmetric"),
            equalities: self
                .equalities
                .iter()
                .map(|t| EqualityTerm {
                    constraint: t.constraint.clone(),
                    multiplier: match &t.multiplier {
                        Multiplier::Polynomial(h) => Multiplier::Polynomial(h.scale(c)),
                        Multiplier::Scalar(a) => Multiplier::Scalar(a * c),
                    },
                })
                .collect(),
            groebner: self
                .groebner
                .iter()
                .map(|t| GroebnerTerm { generator: t.generator.clone(), multiplier: t.multiplier.scale(c) })
                .collect(),
            degree_bound: self.degree_bound,
            mode: self.mode,
            epsilon: &self.epsilon * c,
        }
    }

    /// `m²·cert` for a monomial `m`.
    pub fn times_monomial_square(&self, m: &Monomial) -> SosCertificate {
        let n = self.n();
        assert_eq!(m.n(), n, "monomial dimension mismatch");
        let one = Rational::from_integer(1.into());
        let m2 = m.mul(m);
        let old = self.sigma.basis();
        let basis = MonomialBasis::new(n, old.degree() + m.degree());
        let map: Vec<usize> = old
            .entries()
            .iter()
            .map(|a| basis.index_of(&a.mul(m)).expect("shifted monomial fits"))
            .collect();
        let mut q = RatMatrix::zeros(basis.len(), basis.len());
        for i in 0..old.len() {
            for j in 0..old.len() {
                let v = self.sigma.get(i, j);
                if !v.is_zero() {
                    q.set(map[i], map[j], v.clone());
                }
            }
        }
        let scalar_seen = self.equalities.iter().any(|t| matches!(t.multiplier, Multiplier::Scalar(_)));
        SosCertificate {
            target: self.target.mul_monomial(&m2, &one),
            sigma: GramMatrix::new(basis, q).expect("symmetric"),
            equalities: self
                .equalities
                .iter()
                .map(|t| EqualityTerm::polynomial(t.constraint.clone(), t.multiplier_polynomial().mul_monomial(&m2, &one)))
                .collect(),
            groebner: self
                .groebner
                .iter()
                .map(|t| GroebnerTerm { generator: t.generator.clone(), multiplier: t.multiplier.mul_monomial(&m2, &one) })
                .collect(),
            degree_bound: self.degree_bound + 2 * m.degree(),
            mode: if scalar_seen { ProofMode::General } else { self.mode },
            epsilon: self.epsilon.clone(),
        }
    }

    /// `σ` written as `Σ dₖ·sₖ²` with `dₖ > 0`, when `Q` is PSD.
    pub fn sigma_squares(&self) -> Option<Vec<(Rational, Polynomial)>> {
        match ldl_psd(self.sigma.matrix()) {
            PsdCheck::Psd(factor) => Some(
                factor
                    .diagonal
                    .iter()
                    .zip(&factor.columns)
                    .map(|(d, l)| {
                        let s = Polynomial::from_terms(
                            self.n(),
                            l.iter().enumerate().map(|(i, c)| (self.sigma.basis().get(i).clone(), c.clone())),
                        )
                        .expect("basis dimension");
                        (d.clone(), s)
                    })
                    .collect(),
            ),
            PsdCheck::NotPsd { .. } => None,
        }
    }
}

fn merge_equality(terms: &mut Vec<EqualityTerm>, term: EqualityTerm) {
    for existing in terms.iter_mut() {
        if existing.constraint != term.constraint {
            continue;
        }
        match (&mut existing.multiplier, &term.multiplier) {
            (Multiplier::Polynomial(h), Multiplier::Polynomial(g)) => {
                *h = &*h + g;
                return;
            }
            (Multiplier::Scalar(a), Multiplier::Scalar(b)) => {
                *a += b;
                return;
            }
            _ => {}
        }
    }
    terms.push(term);
}

fn merge_groebner(terms: &mut Vec<GroebnerTerm>, term: GroebnerTerm) {
    match terms.iter_mut().find(|t| t.generator == term.generator) {
        Some(existing) => existing.multiplier = &existing.multiplier + &term.multiplier,
        None => terms.push(term),
    }
}

/// `⟨Q, 𝐱𝐱ᵀ⟩ + Σ multiplier·constraint + Σ g·f`, exactly.
pub fn expand(cert: &SosCertificate) -> Result<Polynomial> {
    let n = cert.n();
    check_dim(n, cert.sigma.basis().n())?;
    let mut total = cert.sigma.to_polynomial();
    for t in &cert.equalities {
        check_dim(n, t.constraint.n())?;
        if let Multiplier::Polynomial(h) = &t.multiplier {
            check_dim(n, h.n())?;
        }
        total = &total + &t.product();
    }
    for t in &cert.groebner {
        check_dim(n, t.generator.n())?;
        check_dim(n, t.multiplier.n())?;
        total = &total + &t.product();
    }
    Ok(total)
}

/// Exact verification: (a) the identity `expand(cert) = target`, (b) `Q ⪰ 0`
/// by exact LDLᵀ, (c) every product term within the degree bound, and (d) in
/// normal-form mode, scalar multipliers on every equality constraint.
pub fn verify(cert: &SosCertificate) -> Verdict {
    let mut failures = Vec::new();
    let expanded = match expand(cert) {
        Ok(p) => p,
        Err(e) => return Verdict::Rejected(vec![Failure::Dimension(e.to_string())]),
    };
    let residual = &cert.target - &expanded;
    if !residual.is_zero() {
        failures.push(Failure::Identity { residual });
    }
    if !cert.sigma.matrix().is_symmetric() {
        failures.push(Failure::GramNotSymmetric);
    } else if let PsdCheck::NotPsd { witness, value } = ldl_psd(cert.sigma.matrix()) {
        failures.push(Failure::NotPsd { witness, value });
    }
    let bound = cert.degree_bound;
    let mut check = |component: String, degree: i64| {
        if degree > bound as i64 {
            failures.push(Failure::Degree { component, degree, bound });
        }
    };
    if let Some(d) = cert.sigma.support_degree() {
        check("sigma".into(), 2 * d as i64);
    }
    for (i, t) in cert.equalities.iter().enumerate() {
        check(format!("equality term {i}"), t.product().degree());
    }
    for (i, t) in cert.groebner.iter().enumerate() {
        check(format!("groebner term {i}"), t.product().degree());
    }
    if cert.mode == ProofMode::NormalForm {
        for (i, t) in cert.equalities.iter().enumerate() {
            if !matches!(t.multiplier, Multiplier::Scalar(_)) {
                failures.push(Failure::NormalForm { index: i });
            }
        }
    }
    if failures.is_empty() {
        Verdict::Accepted
    } else {
        Verdict::Rejected(failures)
    }
}
