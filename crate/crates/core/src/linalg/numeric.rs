//! Small dense floating-point kernels for the numeric solver: cyclic Jacobi
//! eigendecomposition and Cholesky factorization.

/// Square row-major `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DMat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DMat {
    pub fn zeros(n: usize) -> Self {
        DMat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        DMat { n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }

    pub fn add_scaled(&mut self, other: &DMat, c: f64) {
        if c == 0.0 {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn matmul(&self, other: &DMat) -> DMat {
        let n = self.n;
        let mut out = DMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Frobenius inner product `⟨A, B⟩ = tr(AᵀB)`.
    pub fn dot(&self, other: &DMat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Eigenvalues (ascending) and eigenvectors (as columns of the returned
/// matrix) of a symmetric matrix, by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &DMat) -> (Vec<f64>, DMat) {
    let n = a.n;
    let mut m = a.clone();
    let mut v = DMat::identity(n);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.at(i, j) * m.at(i, j))
            .sum();
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.at(p, q);
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m.at(p, p);
                let aqq = m.at(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.at(k, p);
                    let akq = m.at(k, q);
                    *m.at_mut(k, p) = c * akp - s * akq;
                    *m.at_mut(k, q) = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m.at(p, k);
                    let aqk = m.at(q, k);
                    *m.at_mut(p, k) = c * apk - s * aqk;
                    *m.at_mut(q, k) = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    *v.at_mut(k, p) = c * vkp - s * vkq;
                    *v.at_mut(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.at(i, i).total_cmp(&m.at(j, j)));
    let values = order.iter().map(|&i| m.at(i, i)).collect();
    let mut vectors = DMat::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            *vectors.at_mut(k, new) = v.at(k, old);
        }
    }
    (values, vectors)
}

pub fn min_eigenvalue(a: &DMat) -> f64 {
    if a.n == 0 {
        return 0.0;
    }
    jacobi_eigen(a).0[0]
}

/// Lower Cholesky factor, or `None` when the matrix is not numerically
/// positive definite.
pub fn cholesky(a: &DMat) -> Option<DMat> {
    let n = a.n;
    let mut l = DMat::zeros(n);
    for j in 0..n {
        let mut d = a.at(j, j);
        for k in 0..j {
            d -= l.at(j, k) * l.at(j, k);
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        *l.at_mut(j, j) = d;
        for i in j + 1..n {
            let mut s = a.at(i, j);
            for k in 0..j {
                s -= l.at(i, k) * l.at(j, k);
            }
            *l.at_mut(i, j) = s / d;
        }
    }
    Some(l)
}

pub fn cholesky_solve(l: &DMat, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l.at(i, k) * y[k];
        }
        y[i] /= l.at(i, i);
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l.at(k, i) * y[k];
        }
        y[i] /= l.at(i, i);
    }
    y
}

pub fn cholesky_inverse(l: &DMat) -> DMat {
    let n = l.n;
    let mut inv = DMat::zeros(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = cholesky_solve(l, &e);
        for i in 0..n {
            *inv.at_mut(i, j) = col[i];
        }
    }
    inv
}

/// `log det` from a Cholesky factor.
pub fn cholesky_logdet(l: &DMat) -> f64 {
    (0..l.n).map(|i| 2.0 * l.at(i, i).ln()).sum()
}
