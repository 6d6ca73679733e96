//! A small deterministic solver for `Σ aᵢQᵢ ⪰ 0, A·(a, b) = c`.
//!
//! The affine constraints are eliminated exactly: `y = y₀ + Z·t` with `y₀` a
//! rational particular solution and `Z` an orthonormalized null-space basis.
//! The pencil restricted to that affine space is `F(s) = G₀ + Σ sₖHₖ` where
//! the `Hₖ` are mutually orthogonal (directions that do not move the pencil
//! are dropped). Two phases follow:
//!
//! 1. alternating projections: clip the spectrum of `F(s)` at a margin and
//!    pull the result back by least squares, which is a closed form because
//!    the `Hₖ` are orthogonal;
//! 2. if that stalls, a log-det barrier method maximizing `λ` subject to
//!    `F(s) − λI ≻ 0`, `λ < 1` and `‖s‖ < R`, by damped Newton steps with a
//!    geometrically increasing weight on `λ`.
//!
//! Interior points are preferred because the rationalizer rounds them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::system::FeasibilitySystem;
use crate::error::{Error, Result};
use crate::linalg::numeric::{cholesky, cholesky_inverse, cholesky_logdet, cholesky_solve, jacobi_eigen, min_eigenvalue, DMat};
use crate::linalg::rref;
use crate::rational::to_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Accept when `λ_min ≥ −tolerance` and `‖Ay − c‖ ≤ tolerance`.
    pub tolerance: f64,
    /// Newton step budget; alternating projections get a quarter of it.
    pub max_iters: usize,
    pub seed: u64,
    /// Largest `k₂ + k₃` accepted.
    pub variable_cap: usize,
    /// Radius of the ball the barrier phase stays in, around `y₀`.
    pub radius: f64,
    /// Minimum eigenvalue at which the search stops early.
    pub margin: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-9, max_iters: 400, seed: 0, variable_cap: 512, radius: 1e4, margin: 1e-2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    pub values: Vec<f64>,
    pub psd_min_eigenvalue_estimate: f64,
    pub linear_residual_norm: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibleReport {
    pub best_min_eigenvalue: f64,
    pub best_linear_residual: f64,
    pub iterations: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Feasible(NumericSolution),
    Infeasible(InfeasibleReport),
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&NumericSolution> {
        match self {
            SolveOutcome::Feasible(s) => Some(s),
            SolveOutcome::Infeasible(_) => None,
        }
    }
}

struct Reduced {
    y0: Vec<f64>,
    /// Unit directions in `y` space, one per retained `Hₖ`.
    directions: Vec<Vec<f64>>,
    g0: DMat,
    h: Vec<DMat>,
    h_norm2: Vec<f64>,
}

impl Reduced {
    fn pencil(&self, s: &[f64]) -> DMat {
        let mut x = self.g0.clone();
        for (hk, &sk) in self.h.iter().zip(s) {
            x.add_scaled(hk, sk);
        }
        x
    }

    fn point(&self, s: &[f64]) -> Vec<f64> {
        let mut y = self.y0.clone();
        for (u, &sk) in self.directions.iter().zip(s) {
            for (yi, ui) in y.iter_mut().zip(u) {
                *yi += sk * ui;
            }
        }
        y
    }
}

pub fn solve_feasibility(sys: &FeasibilitySystem, opts: &SolverOptions) -> Result<SolveOutcome> {
    let vars = sys.variable_count();
    if vars > opts.variable_cap {
        return Err(Error::ResourceLimit(format!("{vars} solver variables exceed the cap of {}", opts.variable_cap)));
    }
    let order: Vec<usize> = (0..vars).collect();
    let r = rref(sys.linear_map(), sys.rhs(), vars, &order);
    if !r.consistent {
        return Ok(SolveOutcome::Infeasible(InfeasibleReport {
            best_min_eigenvalue: f64::NAN,
            best_linear_residual: f64::INFINITY,
            iterations: 0,
            reason: "the linear constraints are inconsistent".into(),
        }));
    }
    let zero = vec![crate::Rational::from_integer(0.into()); vars];
    let y0: Vec<f64> = r.solve_with_free(&zero).iter().map(to_f64).collect();
    let null: Vec<Vec<f64>> = r.null_space().iter().map(|v| v.iter().map(to_f64).collect()).collect();
    let reduced = reduce(sys, y0, orthonormalize(null));
    if !reduced.g0.is_finite() {
        return Err(Error::Numeric("non-finite pencil entries".into()));
    }

    let mut best = Best::new(&reduced, vec![0.0; reduced.h.len()]);
    let mut iterations = 0;
    if sys.size() > 0 && !reduced.h.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let start: Vec<f64> = (0..reduced.h.len()).map(|_| rng.gen_range(-1e-6..1e-6)).collect();
        iterations += alternating_projections(&reduced, start, opts, &mut best)?;
        if best.min_eig < opts.margin {
            iterations += barrier(&reduced, opts, &mut best)?;
        }
    }

    let values = reduced.point(&best.s);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite solution".into()));
    }
    let min_eig = if sys.size() == 0 { 0.0 } else { min_eigenvalue(&sys.pencil_f64(&values)) };
    let residual = sys.linear_residual_norm_f64(&values);
    if min_eig >= -opts.tolerance && residual <= opts.tolerance {
        Ok(SolveOutcome::Feasible(NumericSolution {
            values,
            psd_min_eigenvalue_estimate: min_eig,
            linear_residual_norm: residual,
            iterations,
        }))
    } else {
        Ok(SolveOutcome::Infeasible(InfeasibleReport {
            best_min_eigenvalue: min_eig,
            best_linear_residual: residual,
            iterations,
            reason: if residual > opts.tolerance {
                "linear residual above tolerance".into()
            } else {
                "no PSD point found within tolerance".into()
            },
        }))
    }
}

fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        for _ in 0..2 {
            for u in &out {
                let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            v.iter_mut().for_each(|a| *a /= norm);
            out.push(v);
        }
    }
    out
}

fn reduce(sys: &FeasibilitySystem, y0: Vec<f64>, z: Vec<Vec<f64>>) -> Reduced {
    let g0 = sys.pencil_f64(&y0);
    let g: Vec<DMat> = z.iter().map(|zj| sys.pencil_f64(zj)).collect();
    let m = g.len();
    let mut gram = DMat::zeros(m);
    for j in 0..m {
        for k in j..m {
            let v = g[j].dot(&g[k]);
            *gram.at_mut(j, k) = v;
            *gram.at_mut(k, j) = v;
        }
    }
    let (vals, vecs) = jacobi_eigen(&gram);
    let top = vals.iter().cloned().fold(0.0f64, f64::max);
    let mut directions = Vec::new();
    let mut h = Vec::new();
    let mut h_norm2 = Vec::new();
    for (k, &lambda) in vals.iter().enumerate().rev() {
        if lambda <= 1e-12 * top.max(1e-300) || lambda <= 0.0 {
            continue;
        }
        let mut hk = DMat::zeros(sys.size());
        let mut dir = vec![0.0; y0.len()];
        for j in 0..m {
            let w = vecs.at(j, k);
            hk.add_scaled(&g[j], w);
            dir.iter_mut().zip(&z[j]).for_each(|(d, zj)| *d += w * zj);
        }
        h.push(hk);
        h_norm2.push(lambda);
        directions.push(dir);
    }
    Reduced { y0, directions, g0, h, h_norm2 }
}

struct Best {
    s: Vec<f64>,
    min_eig: f64,
}

impl Best {
    fn new(reduced: &Reduced, s: Vec<f64>) -> Self {
        let min_eig = min_eigenvalue(&reduced.pencil(&s));
        Best { s, min_eig }
    }

    fn offer(&mut self, s: &[f64], min_eig: f64) {
        if min_eig > self.min_eig {
            self.min_eig = min_eig;
            self.s = s.to_vec();
        }
    }
}

fn alternating_projections(reduced: &Reduced, mut s: Vec<f64>, opts: &SolverOptions, best: &mut Best) -> Result<usize> {
    let budget = (opts.max_iters / 4).max(1);
    let n = reduced.g0.n;
    for it in 0..budget {
        let x = reduced.pencil(&s);
        if !x.is_finite() {
            return Err(Error::Numeric("non-finite iterate in alternating projections".into()));
        }
        let (vals, vecs) = jacobi_eigen(&x);
        best.offer(&s, vals[0]);
        if vals[0] >= opts.margin {
            return Ok(it + 1);
        }
        let mut p = DMat::zeros(n);
        for (k, &lambda) in vals.iter().enumerate() {
            let clipped = lambda.max(2.0 * opts.margin);
            for i in 0..n {
                let vi = vecs.at(i, k) * clipped;
                for j in 0..n {
                    *p.at_mut(i, j) += vi * vecs.at(j, k);
                }
            }
        }
        p.add_scaled(&reduced.g0, -1.0);
        let next: Vec<f64> = reduced.h.iter().zip(&reduced.h_norm2).map(|(hk, nk)| p.dot(hk) / nk).collect();
        let step: f64 = next.iter().zip(&s).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let size: f64 = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        s = clamp_to_ball(next, 0.99 * opts.radius);
        if step <= 1e-12 * (1.0 + size) {
            return Ok(it + 1);
        }
    }
    Ok(budget)
}

fn clamp_to_ball(mut s: Vec<f64>, radius: f64) -> Vec<f64> {
    let norm = s.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > radius {
        s.iter_mut().for_each(|a| *a *= radius / norm);
    }
    s
}

/// Barrier objective `κλ + log det(F(s) − λI) + log(R² − ‖s‖²) + log(1 − λ)`,
/// or `None` outside its domain.
fn objective(reduced: &Reduced, s: &[f64], lambda: f64, kappa: f64, radius: f64) -> Option<(f64, DMat)> {
    let rho = radius * radius - s.iter().map(|a| a * a).sum::<f64>();
    if rho <= 0.0 || lambda >= 1.0 {
        return None;
    }
    let mut x = reduced.pencil(s);
    for i in 0..x.n {
        *x.at_mut(i, i) -= lambda;
    }
    let l = cholesky(&x)?;
    Some((kappa * lambda + cholesky_logdet(&l) + rho.ln() + (1.0 - lambda).ln(), l))
}

fn barrier(reduced: &Reduced, opts: &SolverOptions, best: &mut Best) -> Result<usize> {
    let r = reduced.h.len();
    let n = reduced.g0.n;
    let radius = opts.radius;
    let mut s = clamp_to_ball(best.s.clone(), 0.5 * radius);
    let start_eig = min_eigenvalue(&reduced.pencil(&s));
    let mut lambda = (start_eig - 1.0 - 0.1 * start_eig.abs()).min(0.0);
    let mut kappa = 1.0;
    let mut steps = 0;
    let terms = (n + 2) as f64;
    while steps < opts.max_iters {
        let mut inner_done = false;
        for _ in 0..50 {
            if steps >= opts.max_iters {
                break;
            }
            steps += 1;
            let Some((f, l)) = objective(reduced, &s, lambda, kappa, radius) else {
                return Err(Error::Numeric("barrier iterate left its domain".into()));
            };
            let xinv = cholesky_inverse(&l);
            let w: Vec<DMat> = reduced.h.iter().map(|hk| xinv.matmul(hk)).collect();
            let rho = radius * radius - s.iter().map(|a| a * a).sum::<f64>();
            let dim = r + 1;
            let mut grad = vec![0.0; dim];
            let mut neg_hess = DMat::zeros(dim);
            for k in 0..r {
                grad[k] = w[k].trace() - 2.0 * s[k] / rho;
                for j in k..r {
                    let v = trace_product(&w[k], &w[j]);
                    *neg_hess.at_mut(k, j) += v;
                    if j != k {
                        *neg_hess.at_mut(j, k) += v;
                    }
                }
                for j in 0..r {
                    *neg_hess.at_mut(k, j) += 4.0 * s[k] * s[j] / (rho * rho);
                }
                *neg_hess.at_mut(k, k) += 2.0 / rho;
                // ∂²/∂sₖ∂λ of log det = tr(X⁻¹HₖX⁻¹).
                let cross = trace_product(&w[k], &xinv);
                *neg_hess.at_mut(k, r) -= cross;
                *neg_hess.at_mut(r, k) -= cross;
            }
            grad[r] = kappa - xinv.trace() - 1.0 / (1.0 - lambda);
            *neg_hess.at_mut(r, r) = trace_product(&xinv, &xinv) + 1.0 / ((1.0 - lambda) * (1.0 - lambda));
            let Some(hl) = cholesky(&neg_hess).or_else(|| {
                let mut reg = neg_hess.clone();
                let shift = 1e-10 * (1.0 + reg.max_abs());
                (0..dim).for_each(|i| *reg.at_mut(i, i) += shift);
                cholesky(&reg)
            }) else {
                return Err(Error::Numeric("singular barrier Hessian".into()));
            };
            let delta = cholesky_solve(&hl, &grad);
            let decrement: f64 = grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
            if !decrement.is_finite() {
                return Err(Error::Numeric("non-finite Newton step".into()));
            }
            if decrement / 2.0 < 1e-9 {
                inner_done = true;
                break;
            }
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let s_try: Vec<f64> = s.iter().zip(&delta).map(|(a, d)| a + t * d).collect();
                let l_try = lambda + t * delta[r];
                if let Some((f_try, _)) = objective(reduced, &s_try, l_try, kappa, radius) {
                    if f_try >= f + 0.25 * t * decrement {
                        s = s_try;
                        lambda = l_try;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            let eig = min_eigenvalue(&reduced.pencil(&s));
            best.offer(&s, eig);
            if best.min_eig >= opts.margin {
                return Ok(steps);
            }
            if !moved {
                inner_done = true;
                break;
            }
        }
        if inner_done {
            // The barrier optimum is within terms/κ of the best achievable λ.
            if lambda + terms / kappa < -opts.tolerance || kappa > 1e10 {
                return Ok(steps);
            }
            kappa *= 8.0;
        }
    }
    Ok(steps)
}

/// `tr(AB)` for square matrices.
fn trace_product(a: &DMat, b: &DMat) -> f64 {
    let n = a.n;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += a.at(i, j) * b.at(j, i);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatMatrix;
    use crate::rational::{frac, int};

    fn one_var(c: i64) -> FeasibilitySystem {
        FeasibilitySystem::new(1, vec![RatMatrix::identity(1)], 0, vec![vec![int(1)]], vec![int(c)], vec!["a1".into()])
            .unwrap()
    }

    #[test]
    fn pinned_variable() {
        let out = solve_feasibility(&one_var(1), &SolverOptions::default()).unwrap();
        let sol = out.solution().expect("feasible");
        assert!((sol.values[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn negative_weight_is_infeasible() {
        match solve_feasibility(&one_var(-1), &SolverOptions::default()).unwrap() {
            SolveOutcome::Infeasible(r) => assert!((r.best_min_eigenvalue + 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interior_point_for_free_pencil() {
        // a₁·diag(1, 0) + a₂·diag(0, 1) + a₃·(e₁e₂ᵀ + e₂e₁ᵀ) with a₁ + a₂ = 2.
        let mut q3 = RatMatrix::zeros(2, 2);
        q3.set(0, 1, int(1));
        q3.set(1, 0, int(1));
        let mut q1 = RatMatrix::zeros(2, 2);
        q1.set(0, 0, int(1));
        let mut q2 = RatMatrix::zeros(2, 2);
        q2.set(1, 1, int(1));
        let sys = FeasibilitySystem::new(
            2,
            vec![q1, q2, q3],
            0,
            vec![vec![int(1), int(1), int(0)]],
            vec![int(2)],
            vec!["a1".into(), "a2".into(), "a3".into()],
        )
        .unwrap();
        let sol = solve_feasibility(&sys, &SolverOptions::default()).unwrap();
        let sol = sol.solution().unwrap();
        assert!(sol.psd_min_eigenvalue_estimate >= 1e-2);
        assert!(sol.linear_residual_norm < 1e-12);
    }

    #[test]
    fn barrier_finds_thin_interior() {
        // diag(a − 1, 1.001 − a): only a ∈ [1, 1.001] is feasible.
        let mut q = RatMatrix::zeros(3, 3);
        q.set(0, 0, int(1));
        q.set(1, 1, int(-1));
        let mut q0 = RatMatrix::zeros(3, 3);
        q0.set(0, 0, int(-1));
        q0.set(1, 1, frac(1001, 1000));
        q0.set(2, 2, int(1));
        let sys = FeasibilitySystem::new(
            3,
            vec![q0, q],
            0,
            vec![vec![int(1), int(0)]],
            vec![int(1)],
            vec!["a0".into(), "a".into()],
        )
        .unwrap();
        let sol = solve_feasibility(&sys, &SolverOptions::default()).unwrap();
        let sol = sol.solution().expect("feasible");
        assert!(sol.values[1] > 1.0 && sol.values[1] < 1.001, "{sol:?}");
        assert!(sol.psd_min_eigenvalue_estimate > 1e-4);
    }

    #[test]
    fn cap_is_enforced() {
        let opts = SolverOptions { variable_cap: 0, ..SolverOptions::default() };
        assert!(matches!(solve_feasibility(&one_var(1), &opts), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn inconsistent_linear_part() {
        let sys = FeasibilitySystem::new(
            1,
            vec![RatMatrix::identity(1)],
            0,
            vec![vec![int(1)], vec![int(2)]],
            vec![int(1), int(1)],
            vec!["a".into()],
        )
        .unwrap();
        assert!(matches!(solve_feasibility(&sys, &SolverOptions::default()).unwrap(), SolveOutcome::Infeasible(_)));
    }
}
