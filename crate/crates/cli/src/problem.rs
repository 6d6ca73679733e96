//! The line-oriented problem file format.
//!
//! Each non-blank line is `key: value`; `#` starts a comment. `eq` and
//! `groebner` may repeat, every other key appears at most once, and the
//! keys may come in any order. See the README for the full grammar.

use num_bigint::BigInt;
use symsos::error::{Error, Result};
use symsos::groebner::finite_domain_basis;
use symsos::pipeline::{default_epsilon, Domain, Goal, PipelineOptions, ProblemInstance};
use symsos::poly::{parse_polynomial_at, Polynomial};
use symsos::rational::{format_compact, parse_rational, Rational};
use symsos::symmetry::GroupSpec;

pub const KEYS: &[&str] = &[
    "vars",
    "group",
    "domain",
    "groebner",
    "eq",
    "target",
    "degree",
    "epsilon",
    "tolerance",
    "denom-bound",
    "max-iters",
    "seed",
];

/// A parsed problem file. Optional settings left unset fall back to the
/// library defaults when an instance is built.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub n: usize,
    pub group: GroupSpec,
    pub domain: Domain,
    pub equalities: Vec<Polynomial>,
    pub goal: Goal,
    pub degree: Option<u32>,
    pub epsilon: Option<Rational>,
    pub tolerance: Option<f64>,
    pub denom_bound: Option<BigInt>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub degree: Option<u32>,
    pub epsilon: Option<Rational>,
    pub tolerance: Option<f64>,
    pub denom_bound: Option<BigInt>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
}

struct Entry<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
    /// 0-based character offset of `value` in its line.
    offset: usize,
}

impl Entry<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.offset + 1, message: message.into() }
    }
}

fn split_lines(text: &str) -> Result<Vec<Entry<'_>>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let Some(colon) = content.find(':') else {
            return Err(Error::Parse {
                line,
                column: content[..lead].chars().count() + 1,
                message: "expected `key: value`".into(),
            });
        };
        let key = content[..colon].trim();
        if !KEYS.contains(&key) {
            return Err(Error::Parse {
                line,
                column: content[..lead].chars().count() + 1,
                message: format!("unknown key {key:?}"),
            });
        }
        let after = &content[colon + 1..];
        let value_start = colon + 1 + (after.len() - after.trim_start().len());
        entries.push(Entry {
            key,
            value: content[value_start..].trim_end(),
            line,
            offset: content[..value_start].chars().count(),
        });
    }
    Ok(entries)
}

fn parse_group(entry: &Entry<'_>, n: usize) -> Result<GroupSpec> {
    let text = entry.value;
    if text == "trivial" {
        return Ok(GroupSpec::trivial(n));
    }
    let mut blocks = Vec::new();
    for part in text.split(['x', '×']) {
        let part = part.trim();
        let size = part
            .strip_prefix("S(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|k| k.trim().parse::<usize>().ok())
            .filter(|&k| k > 0)
            .ok_or_else(|| entry.error(format!("expected `S(k)` blocks joined by `x`, found {part:?}")))?;
        blocks.push(size);
    }
    let total: usize = blocks.iter().sum();
    if total != n {
        return Err(entry.error(format!("group blocks cover {total} variables, but vars is {n}")));
    }
    GroupSpec::new(blocks).map_err(|e| entry.error(e.to_string()))
}

fn parse_roots(entry: &Entry<'_>, n: usize) -> Result<Vec<Rational>> {
    let inner = entry
        .value
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| entry.error("expected `{r1, r2, ...}`"))?;
    let roots = inner
        .split(',')
        .map(|r| parse_rational(r).map_err(|e| entry.error(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    finite_domain_basis(n, &roots).map_err(|e| entry.error(e.to_string()))?;
    Ok(roots)
}

fn parse_number<T: std::str::FromStr>(entry: &Entry<'_>) -> Result<T> {
    entry.value.parse().map_err(|_| entry.error(format!("invalid value {:?} for {}", entry.value, entry.key)))
}

fn parse_poly(entry: &Entry<'_>, n: usize) -> Result<Polynomial> {
    parse_polynomial_at(entry.value, n, entry.line, entry.offset)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let entries = split_lines(text)?;
    for key in KEYS.iter().filter(|k| !matches!(**k, "eq" | "groebner")) {
        let mut same = entries.iter().filter(|e| e.key == *key);
        if let (Some(_), Some(dup)) = (same.next(), same.next()) {
            return Err(Error::Parse { line: dup.line, column: 1, message: format!("duplicate section {key:?}") });
        }
    }
    let find = |key: &str| entries.iter().find(|e| e.key == key);
    let missing = |key: &str| Error::Parse { line: 1, column: 1, message: format!("missing section {key:?}") };

    let vars = find("vars").ok_or_else(|| missing("vars"))?;
    let n: usize = parse_number(vars)?;
    if n == 0 {
        return Err(vars.error("vars must be positive"));
    }
    let group = match find("group") {
        Some(e) => parse_group(e, n)?,
        None => GroupSpec::trivial(n),
    };
    let groebner: Vec<&Entry<'_>> = entries.iter().filter(|e| e.key == "groebner").collect();
    let domain = match (find("domain"), groebner.first()) {
        (Some(_), Some(g)) => return Err(g.error("`domain` and `groebner` are mutually exclusive")),
        (Some(d), None) => Domain::Finite(parse_roots(d, n)?),
        (None, _) => Domain::Groebner(groebner.iter().map(|e| parse_poly(e, n)).collect::<Result<_>>()?),
    };
    let equalities =
        entries.iter().filter(|e| e.key == "eq").map(|e| parse_poly(e, n)).collect::<Result<Vec<_>>>()?;
    let target = find("target").ok_or_else(|| missing("target"))?;
    let goal = if target.value == "refute" { Goal::Refute } else { Goal::Prove(parse_poly(target, n)?) };

    let degree = find("degree").map(parse_number::<u32>).transpose()?;
    if let (Some(0), Some(e)) = (degree, find("degree")) {
        return Err(e.error("degree must be positive"));
    }
    let epsilon = find("epsilon")
        .map(|e| {
            let v = parse_rational(e.value).map_err(|err| e.error(err.to_string()))?;
            if v < Rational::from_integer(0.into()) {
                return Err(e.error("epsilon must be nonnegative"));
            }
            Ok(v)
        })
        .transpose()?;
    let tolerance = find("tolerance").map(parse_number::<f64>).transpose()?;
    let denom_bound = find("denom-bound").map(parse_number::<BigInt>).transpose()?;
    let max_iters = find("max-iters").map(parse_number::<usize>).transpose()?;
    let seed = find("seed").map(parse_number::<u64>).transpose()?;

    Ok(ProblemFile { n, group, domain, equalities, goal, degree, epsilon, tolerance, denom_bound, max_iters, seed })
}

impl ProblemFile {
    /// Serializes back into the file format; `parse_problem` inverts it.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\ngroup: {}\n", self.n, self.group);
        match &self.domain {
            Domain::Finite(roots) => {
                let roots: Vec<String> = roots.iter().map(format_compact).collect();
                out.push_str(&format!("domain: {{{}}}\n", roots.join(", ")));
            }
            Domain::Groebner(gens) => gens.iter().for_each(|g| out.push_str(&format!("groebner: {g}\n"))),
        }
        for p in &self.equalities {
            out.push_str(&format!("eq: {p}\n"));
        }
        match &self.goal {
            Goal::Refute => out.push_str("target: refute\n"),
            Goal::Prove(r) => out.push_str(&format!("target: {r}\n")),
        }
        if let Some(d) = self.degree {
            out.push_str(&format!("degree: {d}\n"));
        }
        if let Some(e) = &self.epsilon {
            out.push_str(&format!("epsilon: {}\n", format_compact(e)));
        }
        if let Some(t) = self.tolerance {
            out.push_str(&format!("tolerance: {t:e}\n"));
        }
        if let Some(b) = &self.denom_bound {
            out.push_str(&format!("denom-bound: {b}\n"));
        }
        if let Some(m) = self.max_iters {
            out.push_str(&format!("max-iters: {m}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        out
    }

    /// The pipeline instance, at degree 1 unless the file or `over` says
    /// otherwise.
    pub fn instance(&self, over: &Overrides) -> Result<ProblemInstance> {
        let degree = over.degree.or(self.degree).unwrap_or(1);
        if degree == 0 {
            return Err(Error::InvalidInstance("degree must be positive".into()));
        }
        let mut inst = ProblemInstance::new(
            self.group.clone(),
            self.domain.clone(),
            self.equalities.clone(),
            self.goal.clone(),
            degree,
        )?;
        inst.epsilon = over.epsilon.clone().or_else(|| self.epsilon.clone()).unwrap_or_else(default_epsilon);
        Ok(inst)
    }

    pub fn options(&self, over: &Overrides) -> PipelineOptions {
        let mut opts = PipelineOptions::default();
        if let Some(t) = over.tolerance.or(self.tolerance) {
            opts.solver.tolerance = t;
        }
        if let Some(b) = over.denom_bound.clone().or_else(|| self.denom_bound.clone()) {
            opts.denominator_bound = b;
        }
        if let Some(m) = over.max_iters.or(self.max_iters) {
            opts.solver.max_iters = m;
        }
        if let Some(s) = over.seed.or(self.seed) {
            opts.solver.seed = s;
        }
        opts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let f = parse_problem("# header\n\nvars: 1   # one variable\ndomain: {0, 1}\ntarget: refute\n").unwrap();
        assert_eq!(f.n, 1);
        assert!(f.group.is_trivial());
        assert_eq!(f.goal, Goal::Refute);
    }

    #[test]
    fn columns_point_at_the_value() {
        let err = parse_problem("vars: 2\ntarget:   x1 + y\n").unwrap_err();
        let Error::Parse { line, column, .. } = err else { panic!("{err:?}") };
        assert_eq!(line, 2);
        assert_eq!(column, 16);
    }

    #[test]
    fn missing_sections() {
        assert!(parse_problem("target: refute\n").is_err());
        assert!(parse_problem("vars: 1\n").is_err());
        assert!(parse_problem("vars: 0\ntarget: refute\n").is_err());
    }

    #[test]
    fn domain_and_groebner_conflict() {
        assert!(parse_problem("vars: 1\ndomain: {0,1}\ngroebner: x1^2 - x1\ntarget: refute\n").is_err());
        assert!(parse_problem("vars: 1\ndomain: {0,1,2}\ntarget: refute\n").is_err());
    }

    #[test]
    fn overrides_win() {
        let f = parse_problem("vars: 1\ntarget: 1\ndegree: 3\nseed: 5\n").unwrap();
        let over = Overrides { degree: Some(2), ..Default::default() };
        assert_eq!(f.instance(&over).unwrap().degree, 2);
        assert_eq!(f.options(&over).solver.seed, 5);
        assert_eq!(f.instance(&Overrides::default()).unwrap().epsilon, default_epsilon());
    }
}
