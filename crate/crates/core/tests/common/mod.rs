//! Shared proptest strategies.
#![allow(dead_code)]

use proptest::prelude::*;
use symsos::poly::{Monomial, Polynomial};
use symsos::rational::{frac, Rational};
use symsos::symmetry::GroupSpec;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| frac(a, b))
}

pub fn monomial(n: usize, d: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=d, n).prop_map(move |mut e| {
        // Trim to total degree ≤ d from the left.
        let mut budget = d;
        for x in e.iter_mut() {
            *x = (*x).min(budget);
            budget -= *x;
        }
        Monomial::new(e)
    })
}

pub fn polynomial(n: usize, d: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(n, d), rational()), 0..=terms).prop_map(move |ts| {
        let mut p = Polynomial::zero(n);
        for (m, c) in ts {
            p.add_term(m, c);
        }
        p
    })
}

/// A random composition of `n` into blocks.
pub fn group(n: usize) -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(any::<bool>(), n.saturating_sub(1)).prop_map(move |cuts| {
        let mut blocks = vec![1usize];
        for cut in cuts {
            if cut {
                blocks.push(1);
            } else {
                *blocks.last_mut().unwrap() += 1;
            }
        }
        GroupSpec::new(blocks).unwrap()
    })
}

/// `(n, group, polynomial)` with `1 ≤ n ≤ max_n`.
pub fn grouped_polynomial(max_n: usize, d: u32, terms: usize) -> impl Strategy<Value = (GroupSpec, Polynomial)> {
    (1..=max_n).prop_flat_map(move |n| (group(n), polynomial(n, d, terms)))
}

/// Brute-force evaluation at a rational point.
pub fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}
