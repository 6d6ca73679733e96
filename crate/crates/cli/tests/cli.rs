use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use symsos::certificates::{to_json, EqualityTerm, SosCertificate};
use symsos::error::Error;
use symsos::pipeline::{Domain, Goal};
use symsos::poly::{poly, Polynomial};
use symsos::rational::{frac, int, Rational};
use symsos::symmetry::GroupSpec;
use symsos_cli::{parse_problem, ProblemFile, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};

fn symsos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsos")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const KNAPSACK_ONE: &str = "vars: 1\ngroup: S(1)\ndomain: {0, 1}\neq: x1 - 3/2\ntarget: refute\ndegree: 1\n";

#[test]
fn spec_examples_parse() {
    let f = parse_problem("vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 1\ntarget: refute\ndegree: 2").unwrap();
    assert_eq!(f.n, 2);
    assert_eq!(f.group, GroupSpec::symmetric(2));
    assert_eq!(f.domain, Domain::Finite(vec![int(0), int(1)]));
    assert_eq!(f.equalities, vec![poly("x1 + x2 - 1", 2)]);
    assert_eq!(f.goal, Goal::Refute);
    assert_eq!(f.degree, Some(2));

    let err = parse_problem("vars: 2\neq: x1 + x3\ntarget: refute\n").unwrap_err();
    let Error::Parse { line, column, message } = err else { panic!("{err:?}") };
    assert_eq!((line, column), (2, 10));
    assert!(message.contains("out of range"));

    let f = parse_problem("vars: 3\ngroup: S(2)xS(1)\ntarget: x1 + x2\n").unwrap();
    assert_eq!(f.group.blocks(), &[2, 1]);
}

#[test]
fn numbers_in_every_form() {
    let f = parse_problem("vars: 1\ntarget: 0.25*x1 - 3/4 + 2\nepsilon: 1/1024\n").unwrap();
    assert_eq!(f.goal, Goal::Prove(&Polynomial::var(1, 0).scale(&frac(1, 4)) + &Polynomial::constant(1, frac(5, 4))));
    assert_eq!(f.epsilon, Some(frac(1, 1024)));
}

#[test]
fn grammar_errors() {
    for (text, line) in [
        ("vars: 1\ncolour: red\ntarget: 1\n", 2),
        ("vars: 1\nvars: 1\ntarget: 1\n", 2),
        ("vars: 1\ntarget: 1\ntarget: 2\n", 3),
        ("vars: 1\ngroup: S(2)\ntarget: 1\n", 2),
        ("vars: 1\ngroup: A(1)\ntarget: 1\n", 2),
        ("vars: 1\ndomain: 0, 1\ntarget: 1\n", 2),
        ("vars: 1\ntarget: 1\nseed: -3\n", 3),
        ("vars: 1\njust words\n", 2),
    ] {
        match parse_problem(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

fn problem_file() -> impl Strategy<Value = ProblemFile> {
    let poly_in = |n: usize| {
        prop::collection::vec((prop::collection::vec(0u32..3, n), -9i64..=9, 1i64..=4), 0..4).prop_map(move |ts| {
            let mut p = Polynomial::zero(n);
            for (e, a, b) in ts {
                p.add_term(symsos::poly::Monomial::new(e), frac(a, b));
            }
            p
        })
    };
    (1usize..=4).prop_flat_map(move |n| {
        (
            prop::collection::vec(1usize..=n, 1..=n),
            any::<bool>(),
            prop::collection::vec(poly_in(n), 0..3),
            prop::option::of(poly_in(n)),
            prop::option::of(1u32..5),
            prop::option::of((0i64..10, 1i64..100)),
            prop::option::of(1e-12f64..1e-3),
            prop::option::of(1u64..1 << 40),
            prop::option::of(1usize..1000),
            prop::option::of(any::<u64>()),
            poly_in(n),
        )
            .prop_map(move |(cuts, finite, eqs, target, degree, eps, tol, bound, iters, seed, gen)| {
                let mut blocks = Vec::new();
                let mut left = n;
                for c in cuts {
                    if left == 0 {
                        break;
                    }
                    let b = c.min(left);
                    blocks.push(b);
                    left -= b;
                }
                if left > 0 {
                    blocks.push(left);
                }
                ProblemFile {
                    n,
                    group: GroupSpec::new(blocks).unwrap(),
                    domain: if finite {
                        Domain::Finite(vec![int(-1), frac(1, 3), int(0), int(7)])
                    } else {
                        Domain::Groebner(if gen.is_zero() { vec![] } else { vec![gen] })
                    },
                    equalities: eqs,
                    goal: target.map_or(Goal::Refute, Goal::Prove),
                    degree,
                    epsilon: eps.map(|(a, b)| frac(a, b)),
                    tolerance: tol,
                    denom_bound: bound.map(Into::into),
                    max_iters: iters,
                    seed,
                }
            })
    })
}

proptest! {
    #[test]
    fn text_round_trip(f in problem_file()) {
        prop_assert_eq!(parse_problem(&f.to_text()).unwrap(), f);
    }
}

#[test]
fn verify_accepts_the_hand_refutation() {
    // −1 = (x1 − 1)·1 + x1·(−1).
    let cert = SosCertificate {
        target: Polynomial::constant(1, int(-1)),
        equalities: vec![
            EqualityTerm::polynomial(poly("x1 - 1", 1), poly("1", 1)),
            EqualityTerm::polynomial(poly("x1", 1), poly("-1", 1)),
        ],
        degree_bound: 1,
        ..SosCertificate::zero(1)
    };
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "hand.json", &to_json(&cert));
    let o = symsos(&["verify", &good]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    assert_eq!(stdout(&o), "accepted\n");

    let mut broken = cert;
    broken.equalities[1] = EqualityTerm::polynomial(poly("x1", 1), poly("-2", 1));
    let bad = write(dir.path(), "broken.json", &to_json(&broken));
    let o = symsos(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(EXIT_REJECTED));
    assert!(stdout(&o).contains("residual"));
}

#[test]
fn refute_writes_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "knapsack.sos", KNAPSACK_ONE);
    let out = dir.path().join("k.json");
    let o = symsos(&["refute", &file, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: certified"));
    assert_eq!(symsos(&["verify", out.to_str().unwrap()]).status.code(), Some(EXIT_OK));

    let o = symsos(&["bitsize", "--json", out.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_coefficient_bits"].as_u64().unwrap() > 0);
}

#[test]
fn certificates_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k3.sos", "vars: 3\ngroup: S(3)\ndomain: {0,1}\neq: x1 + x2 + x3 - 7/2\ntarget: refute\n");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(symsos(&["refute", &file, "-o", a.to_str().unwrap()]).status.code(), Some(EXIT_OK));
    assert_eq!(symsos(&["refute", &file, "-o", b.to_str().unwrap()]).status.code(), Some(EXIT_OK));
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn negative_target_on_satisfiable_system() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "sat.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\ntarget: -1\nepsilon: 0\n");
    let o = symsos(&["prove", &file]);
    assert_eq!(o.status.code(), Some(EXIT_REJECTED));
    assert!(stdout(&o).contains("status: no-certificate-at-degree (numeric evidence)"));
    assert!(!stdout(&o).contains("certified"));
}

#[test]
fn pseudoexpect_prints_moments() {
    let dir = tempfile::tempdir().unwrap();
    let file =
        write(dir.path(), "half.sos", "vars: 3\ngroup: S(3)\ndomain: {0,1}\neq: x1 + x2 + x3 - 3/2\ntarget: refute\n");
    let o = symsos(&["pseudoexpect", &file, "--json"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], true);
    let moments = v["moments"].as_array().unwrap();
    let value = |e: [u32; 3]| {
        moments.iter().find(|m| m[0] == serde_json::json!(e)).map(|m| m[1].as_str().unwrap().to_string())
    };
    assert_eq!(value([1, 0, 0]).as_deref(), Some("1/2"));
    assert_eq!(value([1, 1, 0]).as_deref(), Some("1/8"));

    let none = write(dir.path(), "contra.sos", "vars: 1\ndomain: {0,1}\neq: x1\neq: x1 - 1\ntarget: refute\n");
    assert_eq!(symsos(&["pseudoexpect", &none]).status.code(), Some(EXIT_REJECTED));
}

#[test]
fn inspection_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "p.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1^2 + x2\ntarget: x1^3\n");
    let o = symsos(&["reduce", &file]);
    assert_eq!(stdout(&o), "eq: x1 + x2\ntarget: x1\n");
    let o = symsos(&["reynolds", &file]);
    assert_eq!(stdout(&o), "target: 1/2*x1^3 + 1/2*x2^3\n");
    let o = symsos(&["orbits", "--json", &file]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pair_orbits"], 5);
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.sos", "vars: 2\neq: x1 + x3\ntarget: refute\n");
    let o = symsos(&["refute", &bad]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 10"));
    assert_eq!(symsos(&["refute"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(symsos(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    let open = write(dir.path(), "open.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 - 1/2\ntarget: refute\n");
    assert_eq!(symsos(&["refute", &open]).status.code(), Some(EXIT_USAGE));
    let cap = write(dir.path(), "cap.sos", KNAPSACK_ONE);
    let o = symsos(&["refute", &cap, "--degree", "40"]);
    assert_eq!(o.status.code(), Some(symsos_cli::EXIT_NUMERIC), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn batch_mode_runs_every_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.sos", KNAPSACK_ONE);
    write(dir.path(), "b.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 5/2\ntarget: refute\n");
    let d = dir.path().to_str().unwrap();
    let o = symsos(&["refute", "--batch", d]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("status: certified").count(), 2);
    let o = symsos(&["verify", "--batch", d]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&o).matches("accepted").count(), 2);
    write(dir.path(), "c.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 1\ntarget: refute\n");
    assert_eq!(symsos(&["refute", "--batch", d]).status.code(), Some(EXIT_REJECTED));
}

#[test]
fn epsilon_flag_reaches_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.sos", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 2\ntarget: x1*x2\n");
    let out = dir.path().join("t.json");
    let o = symsos(&["prove", &file, "--epsilon", "1/8", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    let cert = symsos::certificates::from_json(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(cert.epsilon, frac(1, 8));
    assert_eq!(cert.target, &poly("x1*x2", 2) + &Polynomial::constant(2, Rational::new(1.into(), 8.into())));
}
