mod common;

use common::{point, polynomial, rational};
use proptest::prelude::*;
use symsos::groebner::{boolean_basis, divide, finite_domain_basis, reconstruct_proof, reduce_identity, Reducer};
use symsos::poly::Polynomial;
use symsos::rational::{frac, int};

proptest! {
    #[test]
    fn division_identity(p in polynomial(3, 5, 8)) {
        let basis = finite_domain_basis(3, &[int(-1), int(0), int(2), frac(1, 2)]).unwrap();
        let d = divide(&p, &basis).unwrap();
        prop_assert_eq!(d.recombine(&basis), p);
        // No remainder term is divisible by a leading monomial.
        for m in d.remainder.monomials() {
            prop_assert!(basis.leading_monomials().all(|lm| !lm.divides(m)));
        }
    }

    #[test]
    fn reduction_is_linear_and_idempotent(p in polynomial(3, 4, 6), q in polynomial(3, 4, 6), a in rational()) {
        let basis = boolean_basis(3);
        let mut r = Reducer::new(&basis);
        let combined = &p.scale(&a) + &q;
        let lhs = r.reduce(&combined);
        let rhs = &r.reduce(&p).scale(&a) + &r.reduce(&q);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(r.reduce(&lhs), lhs.clone());
        prop_assert_eq!(basis.remainder(&combined).unwrap(), lhs);
    }

    #[test]
    fn normal_form_agrees_on_the_cube(p in polynomial(3, 4, 6), bits in prop::collection::vec(0i64..=1, 3)) {
        let basis = boolean_basis(3);
        let x: Vec<_> = bits.into_iter().map(int).collect();
        prop_assert_eq!(basis.remainder(&p).unwrap().evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
    }

    /// Plants `r = σ + h·p + Σ gᵢfᵢ`, reduces, reconstructs and expands.
    #[test]
    fn reconstruction_round_trip(
        s in polynomial(3, 2, 4),
        h in polynomial(3, 2, 3),
        p in polynomial(3, 2, 3),
        gs in prop::collection::vec(polynomial(3, 2, 3), 3),
        x in point(3),
    ) {
        let basis = boolean_basis(3);
        let sigma = s.square();
        let mut r = &sigma + &(&h * &p);
        for (g, f) in gs.iter().zip(basis.generators()) {
            r = &r + &(g * f);
        }
        let (rs, rp) = reduce_identity(&sigma, &[&h * &p], &basis).unwrap();
        prop_assert_eq!(basis.remainder(&r).unwrap(), &rs + &rp[0]);
        let mults = reconstruct_proof(&r, &sigma, &[(h.clone(), p.clone())], &basis).unwrap();
        let mut expanded = &sigma + &(&h * &p);
        for (g, f) in mults.iter().zip(basis.generators()) {
            expanded = &expanded + &(g * f);
        }
        prop_assert_eq!(&expanded, &r);
        prop_assert_eq!(expanded.evaluate(&x).unwrap(), r.evaluate(&x).unwrap());
    }
}

#[test]
fn broken_identity_is_refused() {
    let basis = boolean_basis(1);
    let x = Polynomial::var(1, 0);
    assert!(reconstruct_proof(&x, &Polynomial::zero(1), &[], &basis).is_err());
}
