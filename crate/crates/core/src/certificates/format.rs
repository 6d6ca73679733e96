//! Versioned JSON form of [`SosCertificate`].
//!
//! Every rational is a `"numerator/denominator"` string, polynomials are term
//! lists `[[coefficient, [exponents…]], …]` in descending grlex order, and the
//! Gram matrix of `σ` is stored as its basis degree plus the nonzero entries
//! of its upper triangle.

use serde::{Deserialize, Serialize};

use super::certificate::{EqualityTerm, GroebnerTerm, Multiplier, ProofMode, SosCertificate};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, Monomial, MonomialBasis, Polynomial};
use crate::rational::{format_fraction, parse_rational};

pub const FORMAT_NAME: &str = "symsos-certificate";
pub const FORMAT_VERSION: u32 = 1;

pub type TermRecord = (String, Vec<u32>);

#[derive(Serialize, Deserialize)]
struct CertificateRecord {
    format: String,
    version: u32,
    variables: usize,
    mode: String,
    degree_bound: u32,
    epsilon: String,
    target: Vec<TermRecord>,
    sigma: SigmaRecord,
    equalities: Vec<EqualityRecord>,
    groebner: Vec<GroebnerRecord>,
}

#[derive(Serialize, Deserialize)]
struct SigmaRecord {
    basis_degree: u32,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct EqualityRecord {
    constraint: Vec<TermRecord>,
    multiplier: MultiplierRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MultiplierRecord {
    Polynomial(Vec<TermRecord>),
    Scalar(String),
}

#[derive(Serialize, Deserialize)]
struct GroebnerRecord {
    generator: Vec<TermRecord>,
    multiplier: Vec<TermRecord>,
}

pub fn polynomial_to_terms(p: &Polynomial) -> Vec<TermRecord> {
    p.terms().map(|(m, c)| (format_fraction(c), m.exponents().to_vec())).collect()
}

pub fn polynomial_from_terms(n: usize, terms: &[TermRecord]) -> Result<Polynomial> {
    let mut out = Polynomial::zero(n);
    for (c, exps) in terms {
        if exps.len() != n {
            return Err(Error::Format(format!("exponent vector of length {} in a {n}-variable polynomial", exps.len())));
        }
        out.add_term(Monomial::new(exps.clone()), rational(c)?);
    }
    Ok(out)
}

fn rational(text: &str) -> Result<crate::Rational> {
    parse_rational(text).map_err(|e| Error::Format(format!("bad rational {text:?}: {e}")))
}

pub fn to_json(cert: &SosCertificate) -> String {
    let k = cert.sigma.dim();
    let mut entries = Vec::new();
    for i in 0..k {
        for j in i..k {
            let v = cert.sigma.get(i, j);
            if !num_traits::Zero::is_zero(v) {
                entries.push((i, j, format_fraction(v)));
            }
        }
    }
    let record = CertificateRecord {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        variables: cert.n(),
        mode: match cert.mode {
            ProofMode::General => "general".into(),
            ProofMode::NormalForm => "normal-form".into(),
        },
        degree_bound: cert.degree_bound,
        epsilon: format_fraction(&cert.epsilon),
        target: polynomial_to_terms(&cert.target),
        sigma: SigmaRecord { basis_degree: cert.sigma.basis().degree(), entries },
        equalities: cert
            .equalities
            .iter()
            .map(|t| EqualityRecord {
                constraint: polynomial_to_terms(&t.constraint),
                multiplier: match &t.multiplier {
                    Multiplier::Polynomial(h) => MultiplierRecord::Polynomial(polynomial_to_terms(h)),
                    Multiplier::Scalar(a) => MultiplierRecord::Scalar(format_fraction(a)),
                },
            })
            .collect(),
        groebner: cert
            .groebner
            .iter()
            .map(|t| GroebnerRecord {
                generator: polynomial_to_terms(&t.generator),
                multiplier: polynomial_to_terms(&t.multiplier),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&record).expect("certificate records always serialize")
}

pub fn from_json(text: &str) -> Result<SosCertificate> {
    let record: CertificateRecord =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("certificate JSON: {e}")))?;
    if record.format != FORMAT_NAME {
        return Err(Error::Format(format!("unknown format {:?}", record.format)));
    }
    if record.version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {}", record.version)));
    }
    let n = record.variables;
    let mode = match record.mode.as_str() {
        "general" => ProofMode::General,
        "normal-form" => ProofMode::NormalForm,
        other => return Err(Error::Format(format!("unknown mode {other:?}"))),
    };
    let basis = MonomialBasis::new(n, record.sigma.basis_degree);
    let k = basis.len();
    let mut q = RatMatrix::zeros(k, k);
    for (i, j, v) in &record.sigma.entries {
        if *i >= k || *j >= k || i > j {
            return Err(Error::Format(format!("sigma entry ({i}, {j}) outside the upper triangle of a {k}x{k} matrix")));
        }
        let v = rational(v)?;
        q.set(*i, *j, v.clone());
        q.set(*j, *i, v);
    }
    let equalities = record
        .equalities
        .iter()
        .map(|e| {
            let constraint = polynomial_from_terms(n, &e.constraint)?;
            let multiplier = match &e.multiplier {
                MultiplierRecord::Polynomial(h) => Multiplier::Polynomial(polynomial_from_terms(n, h)?),
                MultiplierRecord::Scalar(a) => Multiplier::Scalar(rational(a)?),
            };
            Ok(EqualityTerm { constraint, multiplier })
        })
        .collect::<Result<Vec<_>>>()?;
    let groebner = record
        .groebner
        .iter()
        .map(|g| {
            Ok(GroebnerTerm {
                generator: polynomial_from_terms(n, &g.generator)?,
                multiplier: polynomial_from_terms(n, &g.multiplier)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SosCertificate {
        target: polynomial_from_terms(n, &record.target)?,
        sigma: GramMatrix::new(basis, q)?,
        equalities,
        groebner,
        degree_bound: record.degree_bound,
        mode,
        epsilon: rational(&record.epsilon)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{boolean_archimedean_witness, order_unit_certificate, Sign};
    use crate::poly::{monomial, poly};
    use crate::rational::frac;

    #[test]
    fn round_trip() {
        let w = boolean_archimedean_witness(2);
        let mut cert = order_unit_certificate(&w, &monomial("x1*x2", 2), 1, Sign::Plus).unwrap().certificate;
        cert.equalities.push(EqualityTerm::scalar(poly("x1 + x2 - 1/3", 2), frac(-7, 5)));
        cert.epsilon = frac(1, 1 << 20);
        let text = to_json(&cert);
        assert!(text.contains("\"symsos-certificate\""));
        assert_eq!(from_json(&text).unwrap(), cert);
    }

    #[test]
    fn rationals_are_fraction_strings() {
        let text = to_json(&SosCertificate::square(&poly("2*x1", 1)));
        assert!(text.contains("\"4/1\""), "{text}");
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(matches!(from_json("{}"), Err(Error::Format(_))));
        let text = to_json(&SosCertificate::zero(1)).replace("symsos-certificate", "other");
        assert!(matches!(from_json(&text), Err(Error::Format(_))));
    }
}
