use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use contextdl::validator::{
    CompiledValidator, NaiveValidator, Options, Validation, ValidationError, Validator,
};
use contextdl::{ConjunctiveQuery, Context, Degree, FederatedStore};
use contextdl_cli::{run, run_queries, Cli, Diagnostics, Manifest, QuerySettings};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/univ")
        .join(name)
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn contextdl(args: &[&str]) -> (i32, String, String) {
    let cli =
        Cli::try_parse_from(std::iter::once("contextdl").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err, false);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn scenario_outputs_are_byte_exact() {
    for (manifest, out) in [
        ("scenario1.toml", "scenario1.out"),
        ("scenario2.toml", "scenario2.out"),
    ] {
        let (code, stdout, stderr) = contextdl(&["query", "--manifest", path(&data(manifest))]);
        assert_eq!((code, stderr.as_str()), (0, ""));
        assert_eq!(stdout, golden(out));
    }
    assert_eq!(golden("scenario1.out"), "(Bob) : 0.8\n(Tom) : 0.8\n");
    assert_eq!(golden("scenario2.out"), "(Bob) : 0.7\n(Peter) : 0.7\n");
}

#[test]
fn explanations_are_byte_exact() {
    for (manifest, out) in [
        ("scenario1.toml", "scenario1_explain.out"),
        ("scenario2.toml", "scenario2_explain.out"),
    ] {
        let m = data(manifest);
        let (code, stdout, _) = contextdl(&[
            "query",
            "--manifest",
            path(&m),
            "--explain",
            "--validator",
            "both",
        ]);
        assert_eq!(code, 0);
        assert_eq!(stdout, golden(out));
    }
}

#[test]
fn explanation_names_failing_conditions() {
    let text = golden("scenario2_explain.out");
    assert!(text.contains("% (Tom) rejected"));
    assert!(text.contains("(b) cN1: violated by teacherOf(Tom, Java) with takesCourse(Tom, Java)"));
    assert!(text.contains("(a) cP3: no trusted witness for employeeGov(Ann)"));
    assert!(text.contains("employeeGov(Bob) [S3 0.7]"));
}

#[test]
fn both_validators_agree_and_flags_override_the_manifest() {
    let m = data("scenario2.toml");
    for v in ["naive", "compiled", "both"] {
        let (code, stdout, _) = contextdl(&["query", "--manifest", path(&m), "--validator", v]);
        assert_eq!(code, 0);
        assert_eq!(stdout, golden("scenario2.out"));
    }
    // above 0.7 the only source of employeeGov facts is untrusted
    let (code, stdout, _) = contextdl(&["query", "--manifest", path(&m), "--tau", "0.75"]);
    assert_eq!((code, stdout.as_str()), (0, ""));
}

#[test]
fn strict_key_mode_needs_a_trusted_partner() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.q"), "q(X) :- worksFor(X, D, O).\n").unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = [\"{}\", \"{}\", \"{}\"]\ncontext = \"{}\"\nqueries = \"w.q\"\n",
            abs("s1.facts"),
            abs("s2.facts"),
            abs("s3.facts"),
            abs("univ.ctx")
        ),
    );
    let run_at = |tau: &str, mode: &str| {
        contextdl(&[
            "query",
            "--manifest",
            path(&m),
            "--tau",
            tau,
            "--egd-mode",
            mode,
        ])
        .1
    };
    // Ann heads CNRS but works for LIFAT
    assert_eq!(run_at("0.7", "lenient"), "(Bob) : 0.8\n");
    assert_eq!(run_at("0.7", "strict"), "(Bob) : 0.8\n");
    // without the headOf facts of S3 there is nothing to compare against
    assert_eq!(run_at("0.8", "lenient"), "(Ann) : 0.8\n(Bob) : 0.8\n");
    assert_eq!(run_at("0.8", "strict"), "");
}

fn write_manifest(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("m.toml");
    std::fs::write(&p, body).unwrap();
    p
}

fn abs(name: &str) -> String {
    path(&data(name).canonicalize().unwrap()).replace('\\', "/")
}

#[test]
fn missing_file_exits_2_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = [\"{}\", \"nowhere.facts\"]\nqueries = \"{}\"\n",
            abs("s1.facts"),
            abs("foreign_professors.q")
        ),
    );
    let (code, stdout, stderr) = contextdl(&["query", "--manifest", path(&m)]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "");
    assert!(stderr.starts_with("error: "), "{stderr}");
    assert!(stderr.contains("nowhere.facts"), "{stderr}");
}

#[test]
fn parse_errors_carry_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.facts"),
        "@source B @confidence 0.5\nprofessor(Bob)\n",
    )
    .unwrap();
    std::fs::write(dir.path().join("q.q"), "q(X) :- professor(X).\n").unwrap();
    let m = write_manifest(dir.path(), "sources = [\"bad.facts\"]\nqueries = \"q.q\"\n");
    let (code, _, stderr) = contextdl(&["check", "--manifest", path(&m)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("bad.facts:3:1: syntax error"), "{stderr}");
}

#[test]
fn out_of_range_confidence_is_a_load_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.facts"), "@source S @confidence 1.3\n").unwrap();
    std::fs::write(dir.path().join("q.q"), "q(X) :- p(X).\n").unwrap();
    let m = write_manifest(dir.path(), "sources = [\"s.facts\"]\nqueries = \"q.q\"\n");
    let (code, _, stderr) = contextdl(&["query", "--manifest", path(&m)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("1.3"), "{stderr}");
}

#[test]
fn manifest_must_list_a_source() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = []\nqueries = \"{}\"\n",
            abs("foreign_professors.q")
        ),
    );
    let (code, _, stderr) = contextdl(&["query", "--manifest", path(&m)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("at least one source"), "{stderr}");
}

#[test]
fn check_reports_each_file() {
    let (code, stdout, stderr) = contextdl(&["check", "--manifest", path(&data("scenario2.toml"))]);
    assert_eq!((code, stderr.as_str()), (0, ""));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].ends_with("s1.facts: source S1, 9 facts, confidence 0.95"));
    assert!(
        lines[3].ends_with("univ.ctx: 4 positive, 1 negative, 1 key constraints, weakly acyclic")
    );
    assert!(lines[4].ends_with("foreign_professors.q: 1 query"));
}

#[test]
fn check_accepts_an_empty_context() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = [\"{}\"]\ncontext = \"{}\"\nqueries = \"{}\"\n",
            abs("s1.facts"),
            abs("empty.ctx"),
            abs("foreign_professors.q")
        ),
    );
    let (code, stdout, _) = contextdl(&["check", "--manifest", path(&m)]);
    assert_eq!(code, 0);
    assert!(stdout.contains("empty.ctx: 0 positive, 0 negative, 0 key constraints, weakly acyclic"));
}

#[test]
fn check_prints_the_cycle_of_a_cyclic_context() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = [\"{}\"]\ncontext = \"{}\"\nqueries = \"{}\"\n",
            abs("s1.facts"),
            abs("cyclic.ctx"),
            abs("foreign_professors.q")
        ),
    );
    let (code, _, stderr) = contextdl(&["check", "--manifest", path(&m)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("p.1 =[r1]=> q.2 -[r2]-> p.1"), "{stderr}");
    let (code, stdout, stderr) = contextdl(&["check-acyclicity", path(&data("cyclic.ctx"))]);
    assert_eq!((code, stdout.as_str()), (2, ""));
    assert!(stderr.contains("=[r1]=>"), "{stderr}");
    let (code, stdout, _) = contextdl(&["check-acyclicity", path(&data("univ.ctx"))]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("weakly acyclic: 4 positive constraints"));
}

#[test]
fn chase_outputs_are_byte_exact() {
    let ctx = data("univ.ctx");
    for (inst, out) in [
        ("professor_bob.inst", "chase_professor_bob.out"),
        ("teacher_ann.inst", "chase_teacher_ann.out"),
    ] {
        let (code, stdout, _) = contextdl(&["chase", path(&ctx), path(&data(inst))]);
        assert_eq!(code, 0);
        assert_eq!(stdout, golden(out));
    }
    let bob = golden("chase_professor_bob.out");
    let atoms: Vec<&str> = bob.lines().filter(|l| !l.starts_with('%')).collect();
    assert_eq!(atoms.len(), 4);
    assert!(atoms.contains(&"teacherOf(Bob, _:n1)."));
    assert!(golden("chase_teacher_ann.out").contains("researchesIn(Ann, DB)."));
}

#[test]
fn chase_of_an_empty_instance_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("empty.inst");
    std::fs::write(&inst, "% nothing\n").unwrap();
    let (code, stdout, _) = contextdl(&["chase", path(&data("univ.ctx")), path(&inst)]);
    assert_eq!((code, stdout.as_str()), (0, ""));
}

#[test]
fn several_queries_get_headers() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("two.q"),
        "q(X) :- professor(X), bornIn(X, Y), foreignCountry(Y).\nq(X) :- teacherOf(X, C), C = Java @tau 0.0.\n",
    )
    .unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(
            "sources = [\"{}\", \"{}\", \"{}\"]\nqueries = \"two.q\"\ntau = 0.75\n",
            abs("s1.facts"),
            abs("s2.facts"),
            abs("s3.facts")
        ),
    );
    let (code, stdout, _) = contextdl(&["query", "--manifest", path(&m)]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "% q(X) :- professor(X), bornIn(X, Y), foreignCountry(Y)\n(Alice) : 0.95\n(Bob) : 0.95\n(Tom) : 0.95\n\
         % q(X) :- teacherOf(X, C), C = #Java @tau 0.0\n(Bob) : 0.8\n(Peter) : 0.7\n(Tom) : 0.8\n"
    );
}

/// Drops the last answer of the wrapped validator.
struct DropsLastAnswer<V>(V);

impl<V: Validator> Validator for DropsLastAnswer<V> {
    fn name(&self) -> &str {
        "mutant"
    }

    fn validate(
        &self,
        q: &ConjunctiveQuery,
        tau_in: Degree,
        context: &Context,
        store: &FederatedStore,
        options: &Options,
    ) -> Result<Validation, ValidationError> {
        let mut v = self.0.validate(q, tau_in, context, store, options)?;
        v.answers.pop();
        Ok(v)
    }
}

/// Reports every answer one millionth lower.
struct ShavesDegrees;

impl Validator for ShavesDegrees {
    fn name(&self) -> &str {
        "shaved"
    }

    fn validate(
        &self,
        q: &ConjunctiveQuery,
        tau_in: Degree,
        context: &Context,
        store: &FederatedStore,
        options: &Options,
    ) -> Result<Validation, ValidationError> {
        let mut v = NaiveValidator.validate(q, tau_in, context, store, options)?;
        for a in &mut v.answers {
            a.tau_out = Degree::from_millionths(a.tau_out.millionths() - 1).unwrap();
        }
        Ok(v)
    }
}

#[test]
fn injected_validator_bugs_exit_3() {
    let loaded = Manifest::load(&data("scenario2.toml"))
        .unwrap()
        .load_all()
        .unwrap();
    let mutants: Vec<Vec<Box<dyn Validator>>> = vec![
        vec![
            Box::new(NaiveValidator),
            Box::new(DropsLastAnswer(CompiledValidator)),
        ],
        vec![
            Box::new(DropsLastAnswer(NaiveValidator)),
            Box::new(CompiledValidator),
        ],
        vec![Box::new(CompiledValidator), Box::new(ShavesDegrees)],
    ];
    for validators in mutants {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_queries(
            &loaded,
            &QuerySettings::default(),
            &validators,
            &mut out,
            &mut Diagnostics::new(&mut err, false),
        );
        assert_eq!(code, 3);
        assert!(String::from_utf8(err)
            .unwrap()
            .contains("validators disagree"));
    }
    let sound: Vec<Box<dyn Validator>> =
        vec![Box::new(NaiveValidator), Box::new(CompiledValidator)];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_queries(
        &loaded,
        &QuerySettings::default(),
        &sound,
        &mut out,
        &mut Diagnostics::new(&mut err, false),
    );
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), golden("scenario2.out"));
}

#[test]
fn binary_exit_codes_and_plain_diagnostics() {
    let bin = env!("CARGO_BIN_EXE_contextdl");
    let ok = Process::new(bin)
        .args(["query", "--manifest", path(&data("scenario1.toml"))])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        golden("scenario1.out")
    );

    let missing = Process::new(bin)
        .args(["query", "--manifest", "no/such/manifest.toml"])
        .env("CONTEXTDL_COLOR", "never")
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let stderr = String::from_utf8(missing.stderr).unwrap();
    assert!(
        stderr.starts_with("error: no/such/manifest.toml"),
        "{stderr}"
    );
    assert!(!stderr.contains('\x1b'));
}

#[test]
fn colored_diagnostics_use_ansi_codes() {
    let mut err = Vec::new();
    Diagnostics::new(&mut err, true).error("boom");
    assert_eq!(
        String::from_utf8(err).unwrap(),
        "\x1b[1;31merror:\x1b[0m boom\n"
    );
}
