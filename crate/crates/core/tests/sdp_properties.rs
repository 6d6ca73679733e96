mod common;

use common::rational;
use num_traits::Zero;
use proptest::prelude::*;
use symsos::linalg::{ldl_psd, RatMatrix};
use symsos::rational::Rational;
use symsos::sdp::{block_diagonal_encode, parse_sparse_text, to_sparse_text, FeasibilitySystem};

fn symmetric(k: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(rational(), k * k).prop_map(move |v| {
        let mut m = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                m.set(i, j, v[i * k + j].clone());
                m.set(j, i, v[i * k + j].clone());
            }
        }
        m
    })
}

fn system() -> impl Strategy<Value = FeasibilitySystem> {
    (1usize..=3, 1usize..=3, 0usize..=2, 1usize..=3).prop_flat_map(|(size, k2, k3, k1)| {
        (
            prop::collection::vec(symmetric(size), k2),
            prop::collection::vec(prop::collection::vec(rational(), k2 + k3), k1),
            prop::collection::vec(rational(), k1),
        )
            .prop_map(move |(psd, linear, rhs)| {
                let names = (1..=k2 + k3).map(|i| format!("v{i}")).collect();
                FeasibilitySystem::new(size, psd, k3, linear, rhs, names).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn sparse_text_round_trip(sys in system()) {
        prop_assert_eq!(parse_sparse_text(&to_sparse_text(&sys)).unwrap(), sys);
    }

    /// The encoded matrix is PSD exactly when the pencil is PSD and `Ay = c`.
    #[test]
    fn encoding_is_equivalent(sys in system(), y in prop::collection::vec(rational(), 5), exact in any::<bool>()) {
        let mut y: Vec<Rational> = y.into_iter().take(sys.variable_count()).collect();
        y.resize(sys.variable_count(), Rational::zero());
        let mut sys = sys;
        if exact {
            // Move the right-hand side onto y so the linear part holds.
            let rhs: Vec<Rational> = sys.linear_map().iter()
                .map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum())
                .collect();
            sys = FeasibilitySystem::new(
                sys.size(),
                sys.psd_matrices().to_vec(),
                sys.k3(),
                sys.linear_map().to_vec(),
                rhs,
                sys.variable_names().to_vec(),
            ).unwrap();
        }
        let enc = block_diagonal_encode(&sys);
        let encoded = ldl_psd(&enc.evaluate(&y)).is_psd();
        let direct = ldl_psd(&sys.pencil(&y)).is_psd() && sys.linear_residual(&y).iter().all(Zero::is_zero);
        prop_assert_eq!(encoded, direct);
    }
}
