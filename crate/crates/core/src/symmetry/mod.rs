//! Actions of `G = S_{n₁} × … × S_{n_t}` on monomials, polynomials and Gram
//! matrices; Reynolds averaging; orbit tables and orbit-indicator matrices.

mod group;
mod orbits;
mod reynolds;

pub use group::{GroupSpec, Permutation};
pub use orbits::{
    bipartition_count, canonical_monomial, canonical_pair, enumerate_monomial_orbits, enumerate_pair_orbits,
    indicator_classes, monomial_orbit, monomial_orbit_size, orbit_indicator_matrices, orbit_sums, pair_orbit_size,
    IndicatorClass, MonomialOrbitTable, MonomialPair, OrbitTable, PairOrbitTable,
};
pub use reynolds::{
    is_invariant, is_invariant_gram, is_invariant_system, reynolds_gram, reynolds_poly, SystemOrbits, ORBIT_CAP,
};
