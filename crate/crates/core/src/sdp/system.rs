use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::linalg::numeric::DMat;
use crate::linalg::RatMatrix;
use crate::poly::{GramMatrix, MonomialBasis};
use crate::rational::{to_f64, Rational};

/// `Σ aᵢQᵢ ⪰ 0` together with `A·(a, b) = c`.
///
/// The variables are `a ∈ ℝ^{k₂}` (weights of the PSD pencil) followed by
/// `b ∈ ℝ^{k₃}` (free coefficients). `basis` is the monomial basis indexing
/// the `Qᵢ` when they are Gram matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilitySystem {
    basis: Option<MonomialBasis>,
    size: usize,
    psd: Vec<RatMatrix>,
    free_count: usize,
    linear: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    names: Vec<String>,
}

impl FeasibilitySystem {
    /// Checks shapes: every `Qᵢ` symmetric of size `size`, every row of `A`
    /// of length `k₂ + k₃`, `|c| = k₁` and one name per variable.
    pub fn new(
        size: usize,
        psd: Vec<RatMatrix>,
        free_count: usize,
        linear: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
        names: Vec<String>,
    ) -> Result<Self> {
        for q in &psd {
            check_dim(size, q.rows())?;
            check_dim(size, q.cols())?;
            if !q.is_symmetric() {
                return Err(Error::InvalidSystem("PSD pencil matrices must be symmetric".into()));
            }
        }
        let vars = psd.len() + free_count;
        for row in &linear {
            check_dim(vars, row.len())?;
        }
        check_dim(linear.len(), rhs.len())?;
        check_dim(vars, names.len())?;
        Ok(FeasibilitySystem { basis: None, size, psd, free_count, linear, rhs, names })
    }

    /// The same with the `Qᵢ` given as Gram matrices over one basis.
    pub fn from_gram(
        psd: Vec<GramMatrix>,
        basis: MonomialBasis,
        free_count: usize,
        linear: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
        names: Vec<String>,
    ) -> Result<Self> {
        if psd.iter().any(|q| q.basis() != &basis) {
            return Err(Error::InvalidSystem("all Gram matrices must share one basis".into()));
        }
        let size = basis.len();
        let mats = psd.into_iter().map(|q| q.matrix().clone()).collect();
        let mut sys = Self::new(size, mats, free_count, linear, rhs, names)?;
        sys.basis = Some(basis);
        Ok(sys)
    }

    pub fn basis(&self) -> Option<&MonomialBasis> {
        self.basis.as_ref()
    }

    /// `N`, the side length of every `Qᵢ`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn k1(&self) -> usize {
        self.linear.len()
    }

    pub fn k2(&self) -> usize {
        self.psd.len()
    }

    pub fn k3(&self) -> usize {
        self.free_count
    }

    pub fn variable_count(&self) -> usize {
        self.k2() + self.k3()
    }

    pub fn psd_matrices(&self) -> &[RatMatrix] {
        &self.psd
    }

    pub fn linear_map(&self) -> &[Vec<Rational>] {
        &self.linear
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    /// `Σ aᵢQᵢ` for exact `y = (a, b)`.
    pub fn pencil(&self, y: &[Rational]) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.size, self.size);
        for (q, a) in self.psd.iter().zip(y) {
            if !a.is_zero() {
                out.add_scaled(q, a);
            }
        }
        out
    }

    pub fn pencil_f64(&self, y: &[f64]) -> DMat {
        let mut out = DMat::zeros(self.size);
        for (q, &a) in self.psd.iter().zip(y) {
            out.add_scaled(&DMat::from_vec(self.size, q.to_f64()), a);
        }
        out
    }

    /// `A y − c`, exactly.
    pub fn linear_residual(&self, y: &[Rational]) -> Vec<Rational> {
        self.linear
            .iter()
            .zip(&self.rhs)
            .map(|(row, c)| {
                let mut v = -c.clone();
                for (a, x) in row.iter().zip(y) {
                    if !a.is_zero() && !x.is_zero() {
                        v += a * x;
                    }
                }
                v
            })
            .collect()
    }

    /// `‖A y − c‖₂` in floating point.
    pub fn linear_residual_norm_f64(&self, y: &[f64]) -> f64 {
        self.linear
            .iter()
            .zip(&self.rhs)
            .map(|(row, c)| {
                let v: f64 = row.iter().zip(y).map(|(a, x)| to_f64(a) * x).sum::<f64>() - to_f64(c);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }
}
