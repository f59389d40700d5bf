use std::path::PathBuf;

use dolc::cli::{run, ExitStatus};

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name).display().to_string()
}

fn dolc(args: &[&str]) -> (ExitStatus, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(std::iter::once("dolc").chain(args.iter().copied()), &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_listing1_verifies() {
    let (status, out, err) = dolc(&["check", &golden("listing1.dol")]);
    assert_eq!(status, ExitStatus::Success, "{err}");
    assert!(out.contains("TaxonomyToParthood>: verified"), "{out}");
}

#[test]
fn check_fails_on_unknown_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("u.dol");
    std::fs::write(&f, "%prefix( : <http://x.org/> )%\nontology a = foo:bar\n").unwrap();
    let (status, _, err) = dolc(&["check", f.to_str().unwrap()]);
    assert_eq!(status, ExitStatus::Errors);
    assert!(err.contains("unknown prefix `foo:`"), "{err}");
}

#[test]
fn missing_file_is_an_io_error() {
    assert_eq!(dolc(&["check", "/nonexistent/x.dol"]).0, ExitStatus::Io);
    assert_eq!(dolc(&["parse", "/nonexistent/x.dol", "--dump-ast"]).0, ExitStatus::Io);
}

#[test]
fn check_listing3_needs_lossy() {
    assert_eq!(dolc(&["check", &golden("listing3.dol")]).0, ExitStatus::Errors);
    assert_eq!(dolc(&["check", &golden("listing3.dol"), "--lossy"]).0, ExitStatus::Success);
}

#[test]
fn report_json_to_stdout_and_file() {
    let (status, out, _) = dolc(&["check", &golden("listing1.dol"), "--report-json"]);
    assert_eq!(status, ExitStatus::Success);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["errors"], 0);
    assert_eq!(v["reports"][0]["verdict"], "verified");

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    let arg = format!("--report-json={}", f.display());
    let (status, out, _) = dolc(&["check", &golden("listing1.dol"), &arg]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
    assert_eq!(v["document"], "http://www.example.org/mereology#Mereology");
}

#[test]
fn registry_queries() {
    let (status, out, _) = dolc(&["registry", "translate", "log:Propositional", "log:SROIQ"]);
    assert_eq!(status, ExitStatus::Success);
    assert_eq!(out, "trans:PropositionalToSROIQ\n");
    let (_, out, _) = dolc(&["registry", "translate", "log:Propositional", "log:CommonLogic"]);
    assert_eq!(out, "trans:PropositionalToSROIQ\ntrans:SROIQtoCL\n");
    let (status, out, _) =
        dolc(&["registry", "complete", "--language", "lang:OWL2/DL", "--serialization", "ser:OWL2/Manchester"]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.lines().any(|l| l == "logic log:SROIQ"), "{out}");
}

#[test]
fn registry_errors_are_distinct() {
    let (status, _, no_path) = dolc(&["registry", "translate", "log:CommonLogic", "log:Propositional"]);
    assert_eq!(status, ExitStatus::Errors);
    assert!(no_path.contains("no default translation path"), "{no_path}");
    let (status, _, unknown) = dolc(&["registry", "translate", "log:Nope", "log:SROIQ"]);
    assert_eq!(status, ExitStatus::Errors);
    assert!(unknown.contains("not in the registry"), "{unknown}");
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("two.json");
    std::fs::write(
        &f,
        r#"{
  "logics": [{"iri": "http://purl.net/dol/logics/L"}],
  "languages": [{"iri": "http://purl.net/dol/languages/A", "logic": "http://purl.net/dol/logics/L",
    "serializations": ["http://purl.net/dol/serializations/S1", "http://purl.net/dol/serializations/S2"]}],
  "serializations": [{"iri": "http://purl.net/dol/serializations/S1", "supports-iris": true},
    {"iri": "http://purl.net/dol/serializations/S2", "supports-iris": true}]
}"#,
    )
    .unwrap();
    let (status, _, amb) = dolc(&["--registry", f.to_str().unwrap(), "registry", "complete", "--logic", "log:L"]);
    assert_eq!(status, ExitStatus::Errors);
    assert!(amb.contains("ambiguous"), "{amb}");
}

#[test]
fn empty_registry_lists_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.json");
    std::fs::write(&f, "").unwrap();
    let (status, out, _) = dolc(&["--registry", f.to_str().unwrap(), "registry", "list", "logics"]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.is_empty());
}

#[test]
fn registry_export_reloads() {
    let dir = tempfile::tempdir().unwrap();
    for (fmt, name) in [("json", "r.json"), ("rdf", "r.ttl")] {
        let f = dir.path().join(name);
        let (status, _, err) = dolc(&["registry", "export", "--format", fmt, "-o", f.to_str().unwrap()]);
        assert_eq!(status, ExitStatus::Success, "{err}");
        let (_, listed, err) = dolc(&["--registry", f.to_str().unwrap(), "registry", "list", "mappings"]);
        let (_, builtin, _) = dolc(&["registry", "list", "mappings"]);
        assert_eq!(listed, builtin, "{fmt}: {err}");
    }
}

#[test]
fn export_formats() {
    let (status, out, _) = dolc(&["export", &golden("listing1.dol"), "--format", "ld"]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.contains(":isAtomicPartOf "), "{out}");

    let (status, text, _) = dolc(&["export", &golden("listing1.dol"), "--format", "text"]);
    assert_eq!(status, ExitStatus::Success);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("again.dol");
    std::fs::write(&f, &text).unwrap();
    let (_, again, _) = dolc(&["export", f.to_str().unwrap(), "--format", "text"]);
    assert_eq!(again, text);

    let x = dir.path().join("l.xml");
    let (status, out, _) = dolc(&["export", &golden("listing2.dol"), "--format", "xml", "-o", x.to_str().unwrap()]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.is_empty());
    assert!(dolc::serialize::validate_xml(&std::fs::read_to_string(x).unwrap()).is_ok());

    assert_eq!(dolc(&["export", &golden("listing1.dol"), "--format", "yaml"]).0, ExitStatus::Usage);
}

#[test]
fn parse_dump_ast_matches_golden() {
    let (status, out, _) = dolc(&["parse", &golden("listing2.dol"), "--dump-ast"]);
    assert_eq!(status, ExitStatus::Success);
    assert_eq!(out, std::fs::read_to_string(golden("listing2.ast")).unwrap());
}

#[test]
fn usage_errors() {
    assert_eq!(dolc(&[]).0, ExitStatus::Usage);
    assert_eq!(dolc(&["frobnicate"]).0, ExitStatus::Usage);
    assert_eq!(dolc(&["registry", "list", "widgets"]).0, ExitStatus::Usage);
    assert_eq!(dolc(&["--help"]).0, ExitStatus::Success);
}

#[test]
fn check_is_deterministic() {
    let a = dolc(&["check", &golden("listing4.dol"), "--lossy", "--report-json"]);
    let b = dolc(&["check", &golden("listing4.dol"), "--lossy", "--report-json"]);
    assert_eq!(a.1, b.1);
}
