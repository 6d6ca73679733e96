use num_traits::{One, Zero};

use super::system::FeasibilitySystem;
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// `F₀ + Σ yᵢFᵢ ⪰ 0` equivalent to a [`FeasibilitySystem`].
///
/// Every `Fᵢ` is block diagonal of size `N + 2k₁`: an `N×N` block (`0` for
/// `F₀` and the free variables, `Qᵢ` for the pencil variables) followed by
/// `k₁` antidiagonal `2×2` blocks `[[0, A_{t,i}], [A_{t,i}, 0]]`, with
/// `A_{t,0} = −c_t`. A `2×2` block `[[0, v], [v, 0]]` is PSD iff `v = 0`, so
/// the tail enforces `A y = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncoding {
    n: usize,
    k2: usize,
    upper: Vec<Option<RatMatrix>>,
    tails: Vec<Vec<Rational>>,
}

pub fn block_diagonal_encode(sys: &FeasibilitySystem) -> BlockEncoding {
    let vars = sys.variable_count();
    let mut upper = vec![None];
    upper.extend(sys.psd_matrices().iter().cloned().map(Some));
    upper.extend((0..sys.k3()).map(|_| None));
    let mut tails = vec![sys.rhs().iter().map(|c| -c.clone()).collect::<Vec<_>>()];
    for i in 0..vars {
        tails.push(sys.linear_map().iter().map(|row| row[i].clone()).collect());
    }
    BlockEncoding { n: sys.size(), k2: sys.k2(), upper, tails }
}

impl BlockEncoding {
    /// `M = N + 2k₁`.
    pub fn size(&self) -> usize {
        self.n + 2 * self.k1()
    }

    pub fn k1(&self) -> usize {
        self.tails[0].len()
    }

    /// Number of `Fᵢ`, including `F₀`.
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn upper_block(&self, i: usize) -> Option<&RatMatrix> {
        self.upper[i].as_ref()
    }

    /// The off-diagonal entries of the `k₁` tail blocks of `Fᵢ`.
    pub fn tail_entries(&self, i: usize) -> &[Rational] {
        &self.tails[i]
    }

    /// `Fᵢ` as a dense matrix.
    pub fn matrix(&self, i: usize) -> RatMatrix {
        let m = self.size();
        let mut out = RatMatrix::zeros(m, m);
        if let Some(q) = &self.upper[i] {
            for r in 0..self.n {
                for c in 0..self.n {
                    out.set(r, c, q.get(r, c).clone());
                }
            }
        }
        for (t, v) in self.tails[i].iter().enumerate() {
            let base = self.n + 2 * t;
            out.set(base, base + 1, v.clone());
            out.set(base + 1, base, v.clone());
        }
        out
    }

    /// `F₀ + Σ yᵢFᵢ`.
    pub fn evaluate(&self, y: &[Rational]) -> RatMatrix {
        let mut out = self.matrix(0);
        for (i, yi) in y.iter().enumerate() {
            if !yi.is_zero() {
                out.add_scaled(&self.matrix(i + 1), yi);
            }
        }
        out
    }

    /// The encoding as a pure pencil system: a leading weight `a₀` on `F₀`
    /// pinned by `a₀ = 1`, and every original variable as a pencil weight on
    /// its `Fᵢ`.
    pub fn as_system(&self) -> FeasibilitySystem {
        let count = self.len();
        let mats: Vec<RatMatrix> = (0..count).map(|i| self.matrix(i)).collect();
        let mut row = vec![Rational::zero(); count];
        row[0] = Rational::one();
        let mut names = vec!["a0".to_string()];
        names.extend((1..count).map(|i| format!("y{i}")));
        FeasibilitySystem::new(self.size(), mats, 0, vec![row], vec![Rational::one()], names)
            .expect("the encoding is shape consistent")
    }

    /// Number of pencil variables of the source system.
    pub fn k2(&self) -> usize {
        self.k2
    }
}
