use std::fs;
use std::process::{Command, Output};

use bellzoo::cli::{cmd_analyze, cmd_export, cmd_model, IsoChoice};
use bellzoo::format::ExperimentFile;
use bellzoo::models;
use bellzoo::Error;

fn bellzoo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellzoo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn export_then_analyze_matches_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in models::FIXTURE_NAMES {
        let path = dir.path().join(format!("{name}.toml"));
        cmd_export(name, &path).unwrap();
        let file = ExperimentFile::read(&path, 0.01).unwrap();
        let fixture = models::fixture(name).unwrap();
        for (pair, t) in fixture.experiment.tables() {
            assert_eq!(file.experiment.table(pair), t, "{name} {pair}");
        }
        assert_eq!(file.sides, fixture.sides.map(String::from));
        let report = cmd_analyze(&path, 0.01).unwrap();
        assert_eq!(report.sides, file.sides);
    }
}

#[test]
fn machine_model_reports_are_deterministic() {
    let a = bellzoo(&["--format", "machine", "model", "vessels", "--alpha", "0.3", "--beta", "-1.2"]);
    let b = bellzoo(&["model", "vessels", "--format", "machine", "--beta", "-1.2", "--alpha", "0.3"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let out = stdout(&a);
    assert!(out.contains("\"format\": \"bellzoo-report/1\""));
    assert!(out.contains("\"expectation\": -1.000000"));
    assert!(!out.contains("-0.000000"));
}

#[test]
fn text_model_report_shows_the_verdict() {
    let o = bellzoo(&["model", "vessels-alt", "--iso", "swapped"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("class: NonlocalNonMarginalBox2"));
    assert!(out.contains("isomorphism swapped"));
    assert!(out.contains("PASS"));
}

#[test]
fn animal_acts_model_passes_with_printed_operator_checks() {
    let r = cmd_model("animal-acts", 0.0, 0.0, IsoChoice::Canonical, None).unwrap();
    let m = r.model.expect("model block");
    assert!(m.pass);
    assert_eq!(m.operator_checks.len(), 4);
    assert!(m.operator_checks.iter().all(|c| c.pass));
}

#[test]
fn separated_vessels_have_no_model() {
    let r = cmd_model("vessels-separated", 0.0, 0.0, IsoChoice::Canonical, None).unwrap();
    assert!(r.model.is_none());
}

#[test]
fn unknown_model_fails_with_a_message() {
    assert!(matches!(
        cmd_model("nope", 0.0, 0.0, IsoChoice::Canonical, None),
        Err(Error::UnknownModel(_))
    ));
    let o = bellzoo(&["model", "nope"]);
    assert!(!o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).starts_with("bellzoo: unknown model \"nope\""));
}

#[test]
fn unwritable_export_path_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.toml");
    assert!(matches!(cmd_export("vessels", &path), Err(Error::Io { .. })));
    let o = bellzoo(&["export", "vessels", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("out.toml"));
}

#[test]
fn malformed_file_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    cmd_export("vessels", &path).unwrap();
    let src = fs::read_to_string(&path).unwrap().replacen("\"0.5\"", "\"half\"", 1);
    fs::write(&path, src).unwrap();

    let o = bellzoo(&["analyze", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("line"), "{err}");
    assert!(err.contains("A1,B2"), "{err}");
}

#[test]
fn normalize_tolerance_is_configurable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loose.toml");
    cmd_export("vessels", &path).unwrap();
    let src = fs::read_to_string(&path).unwrap().replacen("\"1\"", "\"0.995\"", 1);
    fs::write(&path, src).unwrap();
    let p = path.to_str().unwrap();

    assert!(bellzoo(&["analyze", p]).status.success());
    let strict = bellzoo(&["--normalize-tol", "0.001", "analyze", p]);
    assert!(!strict.status.success());
    assert!(stderr(&strict).contains("tables."), "{}", stderr(&strict));
}

#[test]
fn missing_input_file_fails() {
    let o = bellzoo(&["analyze", "/definitely/not/here.toml"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("here.toml"));
}

#[test]
fn analyze_reports_fixture_statistics() {
    use bellzoo::report::Classification;
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("animal-acts", 2.4197, 2e-3, "NonlocalNonMarginalBox1"),
        ("vessels", 4.0, 0.0, "NonlocalNonMarginalBox2"),
        ("vessels-separated", 2.0, 0.0, "KolmogorovianCompatible"),
    ];
    for (name, s, tol, class) in cases {
        let path = dir.path().join(format!("{name}.toml"));
        cmd_export(name, &path).unwrap();
        let r = cmd_analyze(&path, 0.01).unwrap();
        assert!((r.chsh.paper_combination - s).abs() <= tol, "{name}");
        match r.classification {
            Classification::Class(c) => assert_eq!(c.name(), class),
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn uniform_tables_are_classical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uniform.toml");
    let mut src = String::from(
        "version = 1\n\n[sides]\nfirst = \"left\"\nsecond = \"right\"\n\n\
         [settings]\nfirst = [\"X\", \"Y\"]\nsecond = [\"U\", \"V\"]\n",
    );
    for (a, b) in [("X", "U"), ("X", "V"), ("Y", "U"), ("Y", "V")] {
        src.push_str(&format!("\n[tables.\"{a}{b}\"]\n"));
        for i in 1..=2 {
            for j in 1..=2 {
                src.push_str(&format!("\"{a}{i},{b}{j}\" = \"0.25\"\n"));
            }
        }
    }
    fs::write(&path, src).unwrap();

    let o = bellzoo(&["analyze", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("class: KolmogorovianCompatible"), "{out}");
    assert!(out.contains("= 0.000000"), "{out}");
    let r = cmd_analyze(&path, 0.01).unwrap();
    assert_eq!(r.chsh.paper_combination, 0.0);
}
