//! Exact row reduction of rational linear systems `A y = c`.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form of `[A | c]` with pivots chosen in a caller-given
/// column order.
#[derive(Clone, Debug)]
pub struct Rref {
    pub cols: usize,
    /// Pivot column of each nonzero reduced row.
    pub pivot_cols: Vec<usize>,
    /// Reduced rows (pivot entry 1, zero in every other pivot column).
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// False when some row reduces to `0 = c'` with `c' ≠ 0`.
    pub consistent: bool,
}

pub fn rref(a: &[Vec<Rational>], c: &[Rational], cols: usize, col_order: &[usize]) -> Rref {
    assert_eq!(a.len(), c.len(), "row count mismatch");
    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Rational> = c.to_vec();
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for &col in col_order {
        if next_row == rows.len() {
            break;
        }
        let Some(found) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, found);
        rhs.swap(next_row, found);
        let inv = rows[next_row][col].recip();
        for v in rows[next_row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        rhs[next_row] *= &inv;
        let pivot_row = rows[next_row].clone();
        let pivot_rhs = rhs[next_row].clone();
        for r in 0..rows.len() {
            if r == next_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for (v, p) in rows[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            rhs[r] -= &factor * &pivot_rhs;
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let consistent = rhs[next_row..].iter().all(Zero::is_zero);
    rows.truncate(next_row);
    rhs.truncate(next_row);
    Rref { cols, pivot_cols, rows, rhs, consistent }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivot_cols.contains(c)).collect()
    }

    /// The solution whose free coordinates equal `values` at free columns
    /// (entries at pivot columns of `values` are ignored).
    pub fn solve_with_free(&self, values: &[Rational]) -> Vec<Rational> {
        let mut y = values.to_vec();
        for &p in &self.pivot_cols {
            y[p] = Rational::zero();
        }
        for (row, (&p, b)) in self.rows.iter().zip(self.pivot_cols.iter().zip(&self.rhs)) {
            let mut v = b.clone();
            for (j, coef) in row.iter().enumerate() {
                if j != p && !coef.is_zero() && !y[j].is_zero() {
                    v -= coef * &y[j];
                }
            }
            y[p] = v;
        }
        y
    }

    /// One null-space vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        self.free_cols()
            .into_iter()
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivot_cols) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solves_and_spans_null_space() {
        let a = vec![row(&[1, 1, 0]), row(&[0, 1, 1]), row(&[1, 2, 1])];
        let c = row(&[1, 2, 3]);
        let r = rref(&a, &c, 3, &[0, 1, 2]);
        assert!(r.consistent);
        assert_eq!(r.rank(), 2);
        let y = r.solve_with_free(&row(&[0, 0, 5]));
        for (ai, ci) in a.iter().zip(&c) {
            let lhs: Rational = ai.iter().zip(&y).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, ci);
        }
        for v in r.null_space() {
            for ai in &a {
                let lhs: Rational = ai.iter().zip(&v).map(|(p, q)| p * q).sum();
                assert_eq!(lhs, int(0));
            }
        }
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![row(&[1]), row(&[1])];
        let r = rref(&a, &row(&[0, 1]), 1, &[0]);
        assert!(!r.consistent);
    }

    #[test]
    fn respects_column_order() {
        let a = vec![row(&[1, 1])];
        let r = rref(&a, &row(&[2]), 2, &[1, 0]);
        assert_eq!(r.pivot_cols, vec![1]);
        assert_eq!(r.solve_with_free(&row(&[1, 0])), row(&[1, 1]));
    }
}
