use std::io::Write;

use mqalg::testing::random_poly;
use mqalg::{build_mq, CommutationSystem, MqSpec, Polynomial, QMode, QPoly, QRat};
use mqalg_cli::{format_poly, parse_poly, run_command, run_command_with_env, ParseError, EXIT_FALSE, EXIT_LIMIT, EXIT_USAGE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mq(n: usize) -> CommutationSystem {
    build_mq(&MqSpec::symbolic(n).unwrap()).unwrap()
}

fn run(args: &[&str]) -> mqalg_cli::CommandOutput {
    let mut argv = vec!["mq"];
    argv.extend_from_slice(args);
    run_command_with_env(&argv, None)
}

#[test]
fn parse_examples() {
    let sys = mq(2);
    let p = parse_poly("z[1,1]*z[2,2]", &sys).unwrap();
    assert_eq!(p.to_string(), "z[2,2]*z[1,1] + (q^2-1)/q*z[2,1]*z[1,2]");
    assert!(parse_poly("z[2,2]*z[1,1] - z[2,2]*z[1,1]", &sys).unwrap().is_zero());
    assert_eq!(parse_poly("(q^-1)*z[1,2]^2", &sys).unwrap().to_string(), "1/q*z[1,2]^2");
    assert_eq!(parse_poly("-3/2 + q", &sys).unwrap().to_string(), "(2*q-3)/2");
    assert_eq!(parse_poly("(z[1,1]+z[1,2])*z[2,2]", &sys).unwrap(), {
        let a = parse_poly("z[1,1]*z[2,2]", &sys).unwrap();
        a.add(&parse_poly("q*z[2,2]*z[1,2]", &sys).unwrap()).unwrap()
    });
    assert_eq!(parse_poly("(z[1,1]^2)^2", &sys).unwrap(), parse_poly("z[1,1]^4", &sys).unwrap());
    assert_eq!(parse_poly("(2*q)^-2", &sys).unwrap().to_string(), "1/(4*q^2)");
    assert_eq!(parse_poly("z[1,2]*z[1,1]/(q-q)*0", &sys), Err(ParseError::DivisionByZero { pos: 13 }));
}

#[test]
fn parse_errors() {
    let sys = mq(2);
    assert!(matches!(parse_poly("z[3,1]", &sys), Err(ParseError::IndexOutOfRange { row: 3, col: 1, .. })));
    assert!(matches!(parse_poly("z[0,1]", &sys), Err(ParseError::IndexOutOfRange { .. })));
    assert_eq!(parse_poly("z[1,1]^-2", &sys), Err(ParseError::NegativeGeneratorPower { pos: 6 }));
    assert_eq!(parse_poly("1/z[1,1]", &sys), Err(ParseError::NonScalarDivisor { pos: 1 }));
    assert!(matches!(parse_poly("z[1,1]+", &sys), Err(ParseError::Syntax { pos: 7, .. })));
    assert!(matches!(parse_poly("", &sys), Err(ParseError::Syntax { pos: 0, .. })));
    assert!(matches!(parse_poly("z[1 1]", &sys), Err(ParseError::Syntax { pos: 4, .. })));
    assert!(matches!(parse_poly("x", &sys), Err(ParseError::Syntax { pos: 0, .. })));
    assert!(matches!(parse_poly("q^999999999", &sys), Err(ParseError::Syntax { .. })));
}

#[test]
fn numeric_q_specializes() {
    let sys = build_mq(&MqSpec::new(2, "3/2".parse().unwrap()).unwrap()).unwrap();
    assert_eq!(parse_poly("z[1,1]*z[2,2]", &sys).unwrap().to_string(), "z[2,2]*z[1,1] + 5/6*z[2,1]*z[1,2]");
    assert_eq!(parse_poly("q^-1", &sys).unwrap().to_string(), "2/3");
}

fn random_rational_coeff(r: &mut ChaCha8Rng) -> QRat {
    let mut poly = |max_deg: usize| {
        let coeffs: Vec<i64> = (0..=r.gen_range(0..=max_deg)).map(|_| r.gen_range(-4..=4)).collect();
        QPoly::from_i64s(&coeffs)
    };
    let num = poly(3);
    let mut den = poly(2);
    while den.is_zero() {
        den = QPoly::from_i64s(&[1, 1]);
    }
    QRat::from_parts(num, den).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>(), n in 2usize..=3) {
        let sys = mq(n);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut r, n * n, 4, 4);
        let p = Polynomial::canonicalize(
            n * n,
            p.terms().iter().map(|t| {
                let c = if r.gen_bool(0.5) { &t.coeff * &random_rational_coeff(&mut r) } else { t.coeff.clone() };
                mqalg::Term::new(c, t.mono.clone())
            }).collect(),
        ).unwrap();
        let text = format_poly(&p);
        prop_assert_eq!(parse_poly(&text, &sys).unwrap(), p, "text: {}", text);
    }
}

#[test]
fn examples_are_deterministic() {
    let cases: [&[&str]; 3] = [
        &["gb", "--n", "2", "--ideal", "z[1,1]", "--ideal", "z[2,2]"],
        &["validate", "--n", "2"],
        &["hilbert", "--n", "2", "--maxdeg", "4"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
    }
    assert_eq!(run(cases[0]).stdout, "reduced basis, 3 elements:\nz[1,1]\nz[2,1]*z[1,2]\nz[2,2]\n");
    assert!(run(cases[1]).stdout.ends_with("verdict: PASS\n"));
    assert_eq!(run(cases[2]).stdout, "1, 4, 10, 20, 35\n");
}

#[test]
fn json_documents_are_versioned() {
    for args in [
        vec!["gb", "--n", "2", "--ideal", "z[1,1]", "--json"],
        vec!["hilbert", "--n", "3", "--maxdeg", "2", "--json"],
        vec!["validate", "--n", "2", "--samples", "10", "--json"],
        vec!["build-mq", "--n", "2", "--json"],
        vec!["nf", "--n", "2", "z[1,2]*z[1,1]", "--json"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], args[0]);
    }
    let out = run(&["hilbert", "--n", "3", "--maxdeg", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["values"], serde_json::json!(["1", "9", "45"]));
}

#[test]
fn exit_codes() {
    let member = ["member", "--n", "2", "--ideal", "z[1,1]", "--ideal", "z[2,2]"];
    let yes = run(&[&member[..], &["z[2,1]*z[1,2]"]].concat());
    assert_eq!((yes.code, yes.stdout.as_str()), (0, "true\n"));
    let no = run(&[&member[..], &["z[1,2]"]].concat());
    assert_eq!((no.code, no.stdout.as_str()), (EXIT_FALSE, "false\n"));

    assert_eq!(run(&["nf", "--n", "2", "z[1,1"]).code, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["gb", "--n", "2"]).code, EXIT_USAGE);
    assert_eq!(run(&["nf", "z[1,1]"]).code, EXIT_USAGE);
    assert_eq!(run(&["nf", "--n", "2", "--q", "0", "z[1,1]"]).code, EXIT_USAGE);
    assert_eq!(run(&["eliminate", "--n", "2", "--ideal", "z[1,1]", "--keep", "4"]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, 0);

    let limited = run(&["nf", "--n", "2", "--max-degree", "3", "z[1,1]^2*z[2,2]^2"]);
    assert_eq!(limited.code, EXIT_LIMIT);
    assert!(limited.stderr.contains("resource limit"));
    let pairs = run(&["gb", "--n", "2", "--ideal", "z[1,1]", "--ideal", "z[2,2]", "--max-pairs", "0"]);
    assert_eq!(pairs.code, EXIT_LIMIT);
}

#[test]
fn degree_guard_from_environment() {
    let args = ["mq", "nf", "--n", "2", "z[1,1]^5"];
    assert_eq!(run_command_with_env(&args, Some("4")).code, EXIT_LIMIT);
    assert_eq!(run_command_with_env(&args, Some("5")).code, 0);
    assert_eq!(run_command_with_env(&args, Some("five")).code, EXIT_USAGE);
    // the flag wins over the environment
    let flagged = ["mq", "nf", "--n", "2", "--max-degree", "8", "z[1,1]^5"];
    assert_eq!(run_command_with_env(&flagged, Some("4")).code, 0);
    if std::env::var_os("MQ_MAX_DEGREE").is_none() {
        assert_eq!(run_command(&args).code, 0);
    }
}

#[test]
fn degenerate_q_warns() {
    for q in ["1", "-1"] {
        let out = run(&["nf", "--n", "2", "--q", q, "z[1,2]*z[1,1]"]);
        assert_eq!(out.code, 0);
        assert!(out.stderr.starts_with("warning:"), "{}", out.stderr);
    }
    assert!(run(&["nf", "--n", "2", "--q", "2", "z[1,1]"]).stderr.is_empty());
}

#[test]
fn ideal_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"n": 2, "q": "symbolic", "generators": ["z[1,1]", "z[2,2]"], "ordering": "paper-lex", "limits": {{"max_pairs": 100}}}}"#
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let from_file = run(&["gb", "--file", path]);
    let from_flags = run(&["gb", "--n", "2", "--ideal", "z[1,1]", "--ideal", "z[2,2]"]);
    assert_eq!(from_file, from_flags);
    assert_eq!(run(&["gkdim", "--file", path]).stdout.lines().next(), Some("gk dimension: 1"));
    assert_eq!(run(&["gb", "--file", path, "--n", "3"]).code, EXIT_USAGE);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"n": 2, "generators": ["z[1,1]"], "ordering": "deglex"}}"#).unwrap();
    assert_eq!(run(&["gb", "--file", bad.path().to_str().unwrap()]).code, EXIT_USAGE);
    let mut numeric = tempfile::NamedTempFile::new().unwrap();
    write!(numeric, r#"{{"n": 2, "q": 3, "generators": ["z[1,1]*z[2,2]"]}}"#).unwrap();
    let out = run(&["gb", "--file", numeric.path().to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["q"], "3");
    assert_eq!(v["basis"][0], "z[2,2]*z[1,1] + 8/3*z[2,1]*z[1,2]");
    assert_eq!(run(&["gb", "--file", "/nonexistent/ideal.json"]).code, EXIT_USAGE);
}

#[test]
fn numeric_and_symbolic_agree_after_specialization() {
    let sym = mq(2);
    let num = build_mq(&MqSpec::new(2, "5/3".parse::<QMode>().unwrap()).unwrap()).unwrap();
    let p = parse_poly("(z[1,1]+q*z[1,2])*(z[2,2]-z[2,1])", &sym).unwrap();
    let p_num = p.try_map_coeffs(|c| num.coeff(c)).unwrap();
    assert_eq!(parse_poly("(z[1,1]+q*z[1,2])*(z[2,2]-z[2,1])", &num).unwrap(), p_num);
}
