use num_traits::Zero;

use super::certificate::{Multiplier, SosCertificate};
use crate::rational::{bit_length, Rational};

/// Exact bit counts over every stored coefficient of a certificate: the
/// upper triangle of `σ`'s Gram matrix, the equality multipliers and the
/// Gröbner multipliers. Zero entries are not stored and not counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSizeReport {
    pub max_numerator_bits: u64,
    pub max_denominator_bits: u64,
    /// Largest `numerator bits + denominator bits` of a single coefficient.
    pub max_coefficient_bits: u64,
    pub total_bits: u64,
    pub coefficient_count: usize,
    /// [`crate::poly::Polynomial::coefficient_norm`] of the expanded `σ`.
    pub sigma_coefficient_norm: Rational,
}

pub fn bit_size(cert: &SosCertificate) -> BitSizeReport {
    let mut report = BitSizeReport {
        max_numerator_bits: 0,
        max_denominator_bits: 0,
        max_coefficient_bits: 0,
        total_bits: 0,
        coefficient_count: 0,
        sigma_coefficient_norm: cert.sigma.to_polynomial().coefficient_norm(),
    };
    let mut record = |c: &Rational| {
        if c.is_zero() {
            return;
        }
        let num = bit_length(c.numer());
        let den = bit_length(c.denom());
        report.max_numerator_bits = report.max_numerator_bits.max(num);
        report.max_denominator_bits = report.max_denominator_bits.max(den);
        report.max_coefficient_bits = report.max_coefficient_bits.max(num + den);
        report.total_bits += num + den;
        report.coefficient_count += 1;
    };
    let k = cert.sigma.dim();
    for i in 0..k {
        for j in i..k {
            record(cert.sigma.get(i, j));
        }
    }
    for t in &cert.equalities {
        match &t.multiplier {
            Multiplier::Polynomial(h) => h.terms().for_each(|(_, c)| record(c)),
            Multiplier::Scalar(a) => record(a),
        }
    }
    for t in &cert.groebner {
        t.multiplier.terms().for_each(|(_, c)| record(c));
    }
    report
}
