//! Sparse text form of a [`FeasibilitySystem`], for cross-checking with
//! external SDP tools.
//!
//! ```text
//! # comment
//! 1 2 1 3            k₁ k₂ k₃ N
//! basis 2 1          optional: the Gram basis (variables, degree)
//! psd 1 1 1 1/1      matrix i, row r ≤ column c, value   (Qᵢ upper triangle)
//! lin 1 3 -2/1       row, column, value                  (A)
//! rhs 1 1/1          row, value                          (c)
//! name 1 a1          variable index, label
//! ```
//!
//! All indices are 1-based and zero entries are omitted.

use std::fmt::Write as _;

use num_traits::Zero;

use super::system::FeasibilitySystem;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::MonomialBasis;
use crate::rational::{format_fraction, parse_rational, Rational};

pub fn to_sparse_text(sys: &FeasibilitySystem) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {} {}", sys.k1(), sys.k2(), sys.k3(), sys.size()).unwrap();
    if let Some(b) = sys.basis() {
        writeln!(out, "basis {} {}", b.n(), b.degree()).unwrap();
    }
    for (i, q) in sys.psd_matrices().iter().enumerate() {
        for r in 0..sys.size() {
            for c in r..sys.size() {
                let v = q.get(r, c);
                if !v.is_zero() {
                    writeln!(out, "psd {} {} {} {}", i + 1, r + 1, c + 1, format_fraction(v)).unwrap();
                }
            }
        }
    }
    for (r, row) in sys.linear_map().iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                writeln!(out, "lin {} {} {}", r + 1, c + 1, format_fraction(v)).unwrap();
            }
        }
    }
    for (r, v) in sys.rhs().iter().enumerate() {
        if !v.is_zero() {
            writeln!(out, "rhs {} {}", r + 1, format_fraction(v)).unwrap();
        }
    }
    for (j, name) in sys.variable_names().iter().enumerate() {
        writeln!(out, "name {} {}", j + 1, name).unwrap();
    }
    out
}

pub fn parse_sparse_text(text: &str) -> Result<FeasibilitySystem> {
    let mut header: Option<[usize; 4]> = None;
    let mut basis = None;
    let mut psd: Vec<RatMatrix> = Vec::new();
    let mut linear: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: lineno + 1, column: 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some([k1, k2, k3, n]) = header else {
            let nums: Vec<usize> = fields
                .iter()
                .map(|f| f.parse().map_err(|_| err(format!("expected a header `k1 k2 k3 N`, got {line:?}"))))
                .collect::<Result<_>>()?;
            let [k1, k2, k3, n] = nums[..] else {
                return Err(err("the header needs exactly four integers".into()));
            };
            header = Some([k1, k2, k3, n]);
            psd = vec![RatMatrix::zeros(n, n); k2];
            linear = vec![vec![Rational::zero(); k2 + k3]; k1];
            rhs = vec![Rational::zero(); k1];
            names = (1..=k2 + k3).map(|j| format!("y{j}")).collect();
            continue;
        };
        let index = |text: &str, limit: usize, what: &str| -> Result<usize> {
            match text.parse::<usize>() {
                Ok(i) if i >= 1 && i <= limit => Ok(i - 1),
                _ => Err(err(format!("{what} index {text:?} outside 1..={limit}"))),
            }
        };
        let value = |text: &str| parse_rational(text).map_err(|e| err(e.to_string()));
        match (fields[0], fields.len()) {
            ("basis", 3) => {
                let vars = fields[1].parse().map_err(|_| err("bad basis variable count".into()))?;
                let d = fields[2].parse().map_err(|_| err("bad basis degree".into()))?;
                let b = MonomialBasis::new(vars, d);
                if b.len() != n {
                    return Err(err(format!("basis has {} monomials but N = {n}", b.len())));
                }
                basis = Some(b);
            }
            ("psd", 5) => {
                let i = index(fields[1], k2, "matrix")?;
                let r = index(fields[2], n, "row")?;
                let c = index(fields[3], n, "column")?;
                let v = value(fields[4])?;
                psd[i].set(r, c, v.clone());
                psd[i].set(c, r, v);
            }
            ("lin", 4) => {
                let r = index(fields[1], k1, "row")?;
                let c = index(fields[2], k2 + k3, "column")?;
                linear[r][c] = value(fields[3])?;
            }
            ("rhs", 3) => {
                let r = index(fields[1], k1, "row")?;
                rhs[r] = value(fields[2])?;
            }
            ("name", 3) => {
                let j = index(fields[1], k2 + k3, "variable")?;
                names[j] = fields[2].to_string();
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }
    let Some([_, _, k3, n]) = header else {
        return Err(Error::Format("missing header".into()));
    };
    match basis {
        Some(b) => {
            let grams = psd
                .into_iter()
                .map(|q| crate::poly::GramMatrix::new(b.clone(), q))
                .collect::<Result<Vec<_>>>()?;
            FeasibilitySystem::from_gram(grams, b, k3, linear, rhs, names)
        }
        None => FeasibilitySystem::new(n, psd, k3, linear, rhs, names),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::sdp::block_diagonal_encode;

    #[test]
    fn round_trip() {
        let mut q = RatMatrix::zeros(3, 3);
        q.set(0, 2, frac(-1, 3));
        q.set(2, 0, frac(-1, 3));
        q.set(1, 1, int(2));
        let sys = FeasibilitySystem::new(
            3,
            vec![q, RatMatrix::identity(3)],
            1,
            vec![vec![int(1), int(0), frac(5, 7)], vec![int(0), int(1), int(1)]],
            vec![int(1), int(0)],
            vec!["a1".into(), "a2".into(), "b1".into()],
        )
        .unwrap();
        let text = to_sparse_text(&sys);
        assert!(text.starts_with("2 2 1 3\n"));
        assert_eq!(parse_sparse_text(&text).unwrap(), sys);
        let enc = block_diagonal_encode(&sys).as_system();
        assert_eq!(parse_sparse_text(&to_sparse_text(&enc)).unwrap(), enc);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_sparse_text("1 1 0 1\npsd 2 1 1 1/1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_sparse_text("# nothing\n").is_err());
    }
}
