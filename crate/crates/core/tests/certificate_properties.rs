mod common;

use common::{point, polynomial, rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use symsos::certificates::{expand, from_json, symmetrize, to_json, verify, EqualityTerm, SosCertificate};
use symsos::linalg::{ldl_psd, PsdCheck, RatMatrix};
use symsos::poly::{GramMatrix, MonomialBasis, Polynomial};
use symsos::rational::{frac, int, Rational};
use symsos::symmetry::{is_invariant, is_invariant_gram};

fn matrix(k: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, k * k)
        .prop_map(move |v| RatMatrix::from_rows(v.chunks(k).map(|r| r.iter().map(|&x| int(x)).collect()).collect()))
}

fn transpose_mul(b: &RatMatrix) -> RatMatrix {
    let k = b.rows();
    let mut a = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let s: Rational = (0..k).map(|t| b.get(t, i) * b.get(t, j)).sum();
            a.set(i, j, s);
        }
    }
    a
}

/// A random certificate whose identity holds by construction.
fn certificate(n: usize) -> impl Strategy<Value = SosCertificate> {
    (
        prop::collection::vec(polynomial(n, 2, 3), 1..3),
        prop::collection::vec((polynomial(n, 2, 3), polynomial(n, 1, 2)), 0..3),
        prop::collection::vec(rational(), 0..2),
    )
        .prop_map(move |(squares, eqs, scalars)| {
            let mut cert = SosCertificate::zero(n);
            for p in &squares {
                cert = cert.plus(&SosCertificate::square(p));
            }
            for (p, h) in eqs {
                cert.equalities.push(EqualityTerm::polynomial(p, h));
            }
            for (i, a) in scalars.into_iter().enumerate() {
                cert.equalities.push(EqualityTerm::scalar(Polynomial::var(n, i % n), a));
            }
            cert.degree_bound = 8;
            cert.target = expand(&cert).unwrap();
            cert
        })
}

proptest! {
    #[test]
    fn ldl_accepts_gram_products(b in matrix(4)) {
        prop_assert!(ldl_psd(&transpose_mul(&b)).is_psd());
    }

    #[test]
    fn ldl_verdicts_are_sound(m in matrix(4)) {
        let mut a = m.clone();
        for i in 0..4 {
            for j in 0..4 {
                a.set(i, j, m.get(i, j) + m.get(j, i));
            }
        }
        match ldl_psd(&a) {
            PsdCheck::Psd(f) => {
                let mut back = RatMatrix::zeros(4, 4);
                for (d, l) in f.diagonal.iter().zip(&f.columns) {
                    prop_assert!(d.is_positive());
                    for i in 0..4 {
                        for j in 0..4 {
                            *back.get_mut(i, j) += d * &l[i] * &l[j];
                        }
                    }
                }
                prop_assert_eq!(back, a);
            }
            PsdCheck::NotPsd { witness, value } => {
                prop_assert!(value.is_negative());
                prop_assert_eq!(a.quadratic_form(&witness), value);
            }
        }
    }

    #[test]
    fn json_round_trip(cert in certificate(3)) {
        prop_assert_eq!(from_json(&to_json(&cert)).unwrap(), cert);
    }

    #[test]
    fn verify_agrees_with_evaluation(cert in certificate(2), x in point(2), shift in rational()) {
        prop_assert!(verify(&cert).is_accepted());
        let e = expand(&cert).unwrap();
        prop_assert_eq!(e.evaluate(&x).unwrap(), cert.target.evaluate(&x).unwrap());
        let mut bad = cert.clone();
        bad.target = &bad.target + &Polynomial::constant(2, shift.clone());
        let verdict = verify(&bad);
        prop_assert_eq!(verdict.is_accepted(), shift.is_zero());
        if !shift.is_zero() {
            prop_assert_eq!(verdict.residual().cloned(), Some(Polynomial::constant(2, shift)));
        }
    }

    /// `σ = c·Σ x^{2α} + N` with `N` a non-invariant null matrix, and
    /// multipliers forming the syzygy `r·q₂·q₁ − r·q₁·q₂ = 0`.
    #[test]
    fn symmetrize_keeps_validity(
        swaps in prop::collection::vec((0usize..6, 0usize..6, 0usize..6, 0usize..6, -3i64..=3), 1..4),
        r in polynomial(2, 1, 2),
    ) {
        let group = symsos::symmetry::GroupSpec::symmetric(2);
        let basis = MonomialBasis::new(2, 2);
        let k = basis.len();
        let mut q = RatMatrix::zeros(k, k);
        let mut weight = Rational::one();
        for (i, j, a, b, v) in swaps {
            if i == j || a == b || (i, j) == (a, b) || (i, j) == (b, a) {
                continue;
            }
            if basis.get(i).mul(basis.get(j)) != basis.get(a).mul(basis.get(b)) {
                continue;
            }
            for (s, t, sign) in [(i, j, 1), (j, i, 1), (a, b, -1), (b, a, -1)] {
                *q.get_mut(s, t) += int(v * sign);
            }
            weight += int(4 * v.abs());
        }
        for i in 0..k {
            *q.get_mut(i, i) += &weight;
        }
        let sigma = GramMatrix::new(basis, q).unwrap();
        let q1 = &Polynomial::var(2, 0) - &Polynomial::constant(2, frac(1, 2));
        let q2 = &Polynomial::var(2, 1) - &Polynomial::constant(2, frac(1, 2));
        let cert = SosCertificate {
            target: sigma.to_polynomial(),
            sigma,
            equalities: vec![
                EqualityTerm::polynomial(q1.clone(), &r * &q2),
                EqualityTerm::polynomial(q2.clone(), -(&r * &q1)),
            ],
            degree_bound: 4,
            ..SosCertificate::zero(2)
        };
        prop_assert!(verify(&cert).is_accepted());
        prop_assert!(is_invariant(&group, &cert.target));
        let sym = symmetrize(&cert, &group).unwrap();
        prop_assert!(verify(&sym).is_accepted(), "{:?}", verify(&sym));
        prop_assert!(is_invariant_gram(&group, &sym.sigma));
        prop_assert_eq!(&sym.target, &cert.target);
    }
}
