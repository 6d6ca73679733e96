//! Command dispatch, output formatting and the exit-code contract.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};
use symsos::certificates::{bit_size, from_json, to_json, verify, BitSizeReport, Failure, SosCertificate, Verdict};
use symsos::error::Error;
use symsos::groebner::Reducer;
use symsos::pipeline::{
    find_pseudoexpectation, prove_invariant, refute_invariant_system, variable_count_report, Goal, MomentValues,
    PseudoSource, Pseudoexpectation, SearchFailure, SearchOutcome, SearchReport,
};
use symsos::rational::{format_compact, format_fraction, parse_rational, Rational};
use symsos::symmetry::reynolds_poly;

use crate::problem::{parse_problem, Overrides, ProblemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "symsos", version, about = "Symmetric sum-of-squares proofs and refutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print search sizes before and after symmetry reduction.
    Orbits(ProblemArgs),
    /// Print the constraints and target reduced modulo the domain.
    Reduce(ProblemArgs),
    /// Print the group average of the target (or of each constraint).
    Reynolds(ProblemArgs),
    /// Search for a certificate of `target + epsilon >= 0`.
    Prove(ProblemArgs),
    /// Search for a refutation of the constraints.
    Refute(ProblemArgs),
    /// Search for a pseudoexpectation matching the refutation degree.
    Pseudoexpect(ProblemArgs),
    /// Check a certificate file exactly.
    Verify(CertificateArgs),
    /// Print coefficient sizes of a certificate file.
    Bitsize(CertificateArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Problem file.
    #[arg(required_unless_present = "batch")]
    pub file: Option<PathBuf>,
    /// Run on every `*.sos` file in a directory instead.
    #[arg(long, conflicts_with_all = ["file", "output"])]
    pub batch: Option<PathBuf>,
    /// Search degree d, overriding the file.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Slack added to the target, as a rational such as `1/1024`.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// SDP solver tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Largest denominator tried when rounding.
    #[arg(long)]
    pub denom_bound: Option<String>,
    /// SDP iteration limit.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Seed for the solver's random starting point.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Machine-readable summary on stdout.
    #[arg(long)]
    pub json: bool,
    /// Output file for certificates and moment tables.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertificateArgs {
    /// Certificate file.
    #[arg(required_unless_present = "batch")]
    pub file: Option<PathBuf>,
    /// Run on every `*.json` file in a directory instead.
    #[arg(long, conflicts_with = "file")]
    pub batch: Option<PathBuf>,
    /// Machine-readable summary on stdout.
    #[arg(long)]
    pub json: bool,
}

/// What one command produced: an exit code plus text for stdout and stderr.
struct Report {
    code: i32,
    out: String,
    err: String,
}

impl Report {
    fn new(code: i32, out: String) -> Self {
        Report { code, out, err: String::new() }
    }

    fn failure(code: i32, message: String) -> Self {
        Report { code, out: String::new(), err: message }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) | Error::Numeric(_) => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

fn from_error(path: &Path, e: Error) -> Report {
    Report::failure(error_code(&e), format!("{}: {e}\n", path.display()))
}

/// Runs `cli`, writing to the given streams, and returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (batch, extension) = match &cli.command {
        Command::Verify(a) | Command::Bitsize(a) => (a.batch.as_ref(), "json"),
        Command::Orbits(a)
        | Command::Reduce(a)
        | Command::Reynolds(a)
        | Command::Prove(a)
        | Command::Refute(a)
        | Command::Pseudoexpect(a) => (a.batch.as_ref(), "sos"),
    };
    let files = match batch {
        None => vec![match &cli.command {
            Command::Verify(a) | Command::Bitsize(a) => a.file.clone(),
            Command::Orbits(a)
            | Command::Reduce(a)
            | Command::Reynolds(a)
            | Command::Prove(a)
            | Command::Refute(a)
            | Command::Pseudoexpect(a) => a.file.clone(),
        }
        .expect("clap requires a file without --batch")],
        Some(dir) => match batch_files(dir, extension) {
            Ok(files) => files,
            Err(e) => {
                let _ = writeln!(err, "{}: {e}", dir.display());
                return EXIT_USAGE;
            }
        },
    };
    let mut code = EXIT_OK;
    for file in &files {
        if batch.is_some() {
            let _ = writeln!(out, "== {}", file.display());
        }
        let report = run_one(&cli.command, file, batch.is_some());
        let _ = out.write_all(report.out.as_bytes());
        let _ = err.write_all(report.err.as_bytes());
        code = code.max(report.code);
    }
    code
}

fn batch_files(dir: &Path, extension: &str) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == extension))
        .collect();
    files.sort();
    Ok(files)
}

fn run_one(command: &Command, file: &Path, batch: bool) -> Report {
    match command {
        Command::Verify(a) => certificate_command(file, a.json, verify_report),
        Command::Bitsize(a) => certificate_command(file, a.json, bitsize_report),
        Command::Orbits(a) => problem_command(file, a, orbits),
        Command::Reduce(a) => problem_command(file, a, reduce),
        Command::Reynolds(a) => problem_command(file, a, reynolds),
        Command::Prove(a) | Command::Refute(a) => {
            let refute = matches!(command, Command::Refute(_));
            problem_command(file, a, |p, over, args| search(p, over, args, file, batch, refute))
        }
        Command::Pseudoexpect(a) => problem_command(file, a, pseudoexpect),
    }
}

fn problem_command<F>(file: &Path, args: &ProblemArgs, body: F) -> Report
where
    F: FnOnce(&ProblemFile, &Overrides, &ProblemArgs) -> Result<Report, Error>,
{
    let parsed = fs::read_to_string(file)
        .map_err(|e| Error::Format(e.to_string()))
        .and_then(|text| parse_problem(&text))
        .and_then(|p| overrides(args).map(|o| (p, o)));
    match parsed.and_then(|(p, over)| body(&p, &over, args)) {
        Ok(r) => r,
        Err(e) => from_error(file, e),
    }
}

fn overrides(args: &ProblemArgs) -> Result<Overrides, Error> {
    let epsilon = args.epsilon.as_deref().map(parse_rational).transpose()?;
    if epsilon.as_ref().is_some_and(|e| e < &Rational::from_integer(0.into())) {
        return Err(Error::Format("--epsilon must be nonnegative".into()));
    }
    let denom_bound = args
        .denom_bound
        .as_deref()
        .map(|b| b.parse::<BigInt>().map_err(|_| Error::Format(format!("invalid --denom-bound {b:?}"))))
        .transpose()?;
    Ok(Overrides {
        degree: args.degree,
        epsilon,
        tolerance: args.tolerance,
        denom_bound,
        max_iters: args.max_iters,
        seed: args.seed,
    })
}

fn certificate_command(file: &Path, json: bool, body: fn(&SosCertificate, bool) -> Report) -> Report {
    match fs::read_to_string(file).map_err(|e| Error::Format(e.to_string())).and_then(|t| from_json(&t)) {
        Ok(cert) => body(&cert, json),
        Err(e) => from_error(file, e),
    }
}

fn json_line(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON values serialize"))
}

fn orbits(p: &ProblemFile, over: &Overrides, args: &ProblemArgs) -> Result<Report, Error> {
    let c = variable_count_report(&p.instance(over)?)?;
    let out = if args.json {
        json_line(json!({
            "basis_degree": c.basis_degree,
            "monomials": c.monomials.to_string(),
            "monomial_pairs": c.monomial_pairs.to_string(),
            "pair_orbits": c.pair_orbits,
            "indicator_classes": c.indicator_classes,
            "constraint_orbits": c.constraint_orbits,
            "multipliers_before": c.multipliers_before.to_string(),
            "multipliers_after": c.multipliers_after,
            "before": c.before.to_string(),
            "after": c.after,
        }))
    } else {
        format!(
            "basis degree: {}\n|W|: {}\n|Y|: {}\npair orbits: {}\nindicator classes: {}\nconstraint orbits: {}\n\
             multiplier unknowns: {} before, {} after\nSDP variables: {} before, {} after\n",
            c.basis_degree,
            c.monomials,
            c.monomial_pairs,
            c.pair_orbits,
            c.indicator_classes,
            c.constraint_orbits,
            c.multipliers_before,
            c.multipliers_after,
            c.before,
            c.after
        )
    };
    Ok(Report::new(EXIT_OK, out))
}

fn reduce(p: &ProblemFile, over: &Overrides, args: &ProblemArgs) -> Result<Report, Error> {
    let inst = p.instance(over)?;
    let basis = inst.groebner_basis()?;
    let mut reducer = Reducer::new(&basis);
    let equalities: Vec<String> = inst.equalities.iter().map(|e| reducer.reduce(e).to_string()).collect();
    let target = match &inst.goal {
        Goal::Refute => None,
        Goal::Prove(r) => Some(reducer.reduce(r).to_string()),
    };
    let out = if args.json {
        json_line(json!({ "equalities": equalities, "target": target }))
    } else {
        let mut s: String = equalities.iter().map(|e| format!("eq: {e}\n")).collect();
        if let Some(t) = target {
            s.push_str(&format!("target: {t}\n"));
        }
        s
    };
    Ok(Report::new(EXIT_OK, out))
}

fn reynolds(p: &ProblemFile, over: &Overrides, args: &ProblemArgs) -> Result<Report, Error> {
    let inst = p.instance(over)?;
    let (label, inputs) = match &inst.goal {
        Goal::Prove(r) => ("target", vec![r.clone()]),
        Goal::Refute => ("eq", inst.equalities.clone()),
    };
    let averaged =
        inputs.iter().map(|q| reynolds_poly(&inst.group, q).map(|r| r.to_string())).collect::<Result<Vec<_>, _>>()?;
    let out = if args.json {
        json_line(json!({ "group": inst.group.to_string(), label: averaged }))
    } else {
        averaged.iter().map(|r| format!("{label}: {r}\n")).collect()
    };
    Ok(Report::new(EXIT_OK, out))
}

fn default_output(file: &Path) -> PathBuf {
    file.with_extension("cert.json")
}

fn bits_json(b: &BitSizeReport) -> Value {
    json!({
        "max_numerator_bits": b.max_numerator_bits,
        "max_denominator_bits": b.max_denominator_bits,
        "max_coefficient_bits": b.max_coefficient_bits,
        "total_bits": b.total_bits,
        "coefficient_count": b.coefficient_count,
        "sigma_coefficient_norm": format_fraction(&b.sigma_coefficient_norm),
    })
}

fn bits_text(b: &BitSizeReport) -> String {
    format!(
        "max numerator bits: {}\nmax denominator bits: {}\nmax coefficient bits: {}\ntotal bits: {}\n\
         coefficients: {}\nsigma coefficient norm: {}\n",
        b.max_numerator_bits,
        b.max_denominator_bits,
        b.max_coefficient_bits,
        b.total_bits,
        b.coefficient_count,
        format_compact(&b.sigma_coefficient_norm)
    )
}

fn failure_text(f: &SearchFailure) -> String {
    match f {
        SearchFailure::SolverInfeasible(r) => format!(
            "solver found no feasible point ({}); best min eigenvalue {:e}, best linear residual {:e}, {} iterations",
            r.reason, r.best_min_eigenvalue, r.best_linear_residual, r.iterations
        ),
        SearchFailure::RationalizationFailed(r) => format!("rounding failed: {r:?}"),
        SearchFailure::VerificationFailed(fs) => {
            format!("rounded candidate rejected: {}", fs.iter().map(describe_failure).collect::<Vec<_>>().join("; "))
        }
    }
}

fn search(
    p: &ProblemFile,
    over: &Overrides,
    args: &ProblemArgs,
    file: &Path,
    batch: bool,
    refute: bool,
) -> Result<Report, Error> {
    let mut inst = p.instance(over)?;
    let opts = p.options(over);
    if refute {
        inst.goal = Goal::Refute;
    } else if matches!(inst.goal, Goal::Refute) {
        return Err(Error::InvalidInstance("`prove` needs a target polynomial; the file says `target: refute`".into()));
    }
    let report: SearchReport =
        if refute { refute_invariant_system(&inst, &opts)? } else { prove_invariant(&inst, &opts)? };

    let mut lines = vec![
        format!("mode: {}", if refute { "refute" } else { "prove" }),
        format!("degree: {} (certificate degree bound {})", report.degree, report.proof_degree),
        format!("SDP variables: {} before, {} after symmetry reduction", report.counts.before, report.counts.after),
    ];
    lines.extend(report.notes.iter().map(|n| format!("note: {n}")));
    let mut summary = json!({
        "mode": if refute { "refute" } else { "prove" },
        "degree": report.degree,
        "proof_degree": report.proof_degree,
        "variables_before": report.counts.before.to_string(),
        "variables_after": report.counts.after,
        "notes": report.notes,
    });

    let code = match &report.outcome {
        SearchOutcome::Certified { certificate, bits, denominator_bound } => {
            // The library only returns verified certificates; re-checking keeps
            // the banner tied to an exact verdict made here.
            if !verify(certificate).is_accepted() {
                return Err(Error::Numeric("internal error: certificate failed re-verification".into()));
            }
            let path = match (&args.output, batch) {
                (Some(o), false) => o.clone(),
                _ => default_output(file),
            };
            fs::write(&path, to_json(certificate)).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            lines.push(format!("numeric: rounded at denominator bound {denominator_bound}"));
            lines.push(format!("certificate: {}", path.display()));
            lines.push(format!("max coefficient bits: {}", bits.max_coefficient_bits));
            lines.push("status: certified (exact verification passed)".into());
            summary["status"] = json!("certified");
            summary["certificate"] = json!(path.display().to_string());
            summary["denominator_bound"] = json!(denominator_bound.to_string());
            summary["bits"] = bits_json(bits);
            EXIT_OK
        }
        SearchOutcome::NoCertificate { failure, dual } => {
            lines.push(format!("numeric: {}", failure_text(failure)));
            if let Some(pe) = dual {
                lines.push(format!("numeric: found a degree-{} pseudoexpectation ({})", pe.degree, pe_kind(pe)));
            }
            lines.push(format!("status: {}", report.outcome.label()));
            summary["status"] = json!(report.outcome.label());
            summary["failure"] = json!(failure_text(failure));
            EXIT_REJECTED
        }
    };
    let out = if args.json { json_line(summary) } else { lines.join("\n") + "\n" };
    Ok(Report::new(code, out))
}

fn pe_kind(pe: &Pseudoexpectation) -> &'static str {
    match (&pe.source, pe.is_exact()) {
        (PseudoSource::PointEvaluation { .. }, _) => "averaged point evaluation",
        (PseudoSource::Solver { .. }, true) => "solver, rounded",
        (PseudoSource::Solver { .. }, false) => "solver, floating point",
    }
}

fn pseudoexpect(p: &ProblemFile, over: &Overrides, args: &ProblemArgs) -> Result<Report, Error> {
    let inst = p.instance(over)?;
    let degree = 2 * (inst.degree + inst.domain_half_degree() - 1);
    let Some(pe) = find_pseudoexpectation(&inst, degree, &p.options(over))? else {
        let msg = format!("no degree-{degree} pseudoexpectation found");
        return Ok(if args.json {
            Report::new(EXIT_REJECTED, json_line(json!({ "degree": degree, "found": false })))
        } else {
            Report::new(EXIT_REJECTED, format!("status: {msg}\n"))
        });
    };
    let values: Vec<String> = match &pe.values {
        MomentValues::Exact(v) => v.iter().map(format_compact).collect(),
        MomentValues::Numeric(v) => v.iter().map(|x| format!("{x:e}")).collect(),
    };
    let check = pe.check(&inst)?;
    let table = if args.json {
        json_line(json!({
            "degree": degree,
            "found": true,
            "group": pe.group.to_string(),
            "kind": pe_kind(&pe),
            "exact": pe.is_exact(),
            "moments": pe.representatives.iter().zip(&values)
                .map(|(m, v)| json!([m.exponents(), v]))
                .collect::<Vec<_>>(),
            "check": {
                "normalization_error": check.normalization_error,
                "max_linear_violation": check.max_linear_violation,
                "min_eigenvalue": check.min_eigenvalue,
            },
        }))
    } else {
        let mut s = format!("# degree-{degree} pseudoexpectation over {}, {}\n", pe.group, pe_kind(&pe));
        s.push_str(&format!(
            "# numeric: |L(1) - 1| = {:e}, max |L(q*m)| = {:e}, moment matrix min eigenvalue = {:e}\n",
            check.normalization_error, check.max_linear_violation, check.min_eigenvalue
        ));
        for (m, v) in pe.representatives.iter().zip(&values) {
            s.push_str(&format!("{m}\t{v}\n"));
        }
        s
    };
    let out = match &args.output {
        Some(path) => {
            fs::write(path, &table).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            format!("moment table: {}\n", path.display())
        }
        None => table,
    };
    Ok(Report::new(EXIT_OK, out))
}

pub fn describe_failure(f: &Failure) -> String {
    match f {
        Failure::Dimension(m) => format!("dimension: {m}"),
        Failure::Identity { residual } => format!("identity does not hold; residual {residual}"),
        Failure::GramNotSymmetric => "Gram matrix is not symmetric".into(),
        Failure::NotPsd { witness, value } => format!(
            "Gram matrix is not PSD: v = [{}] gives vᵀQv = {}",
            witness.iter().map(format_compact).collect::<Vec<_>>().join(", "),
            format_compact(value)
        ),
        Failure::Degree { component, degree, bound } => {
            format!("{component} has degree {degree} above the bound {bound}")
        }
        Failure::NormalForm { index } => {
            format!("normal-form mode needs a scalar multiplier on equality {}", index + 1)
        }
    }
}

fn verify_report(cert: &SosCertificate, json: bool) -> Report {
    let verdict = verify(cert);
    let code = if verdict.is_accepted() { EXIT_OK } else { EXIT_REJECTED };
    let failures: Vec<String> = verdict.failures().iter().map(describe_failure).collect();
    let out = if json {
        json_line(json!({ "accepted": verdict.is_accepted(), "failures": failures }))
    } else {
        match verdict {
            Verdict::Accepted => "accepted\n".into(),
            Verdict::Rejected(_) => {
                let mut s = "rejected\n".to_string();
                failures.iter().for_each(|f| s.push_str(&format!("  {f}\n")));
                s
            }
        }
    };
    Report::new(code, out)
}

fn bitsize_report(cert: &SosCertificate, json: bool) -> Report {
    let b = bit_size(cert);
    Report::new(EXIT_OK, if json { json_line(bits_json(&b)) } else { bits_text(&b) })
}
