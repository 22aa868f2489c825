use std::path::Path;

use qcm::cli::{run, EXIT_FINDINGS, EXIT_IO, EXIT_OK};

fn qcm(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("qcm").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

#[test]
fn check_clean_file() {
    let (code, out, err) = qcm(&["check", &corpus("bell.qcm")]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.ends_with("bell.qcm: ok\n"));
}

#[test]
fn check_reports_dangling_glossary_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qcm");
    let text = std::fs::read_to_string(corpus("bell.qcm")).unwrap().replace("identity \"corr", "relation mirror \"corr");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = qcm(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FINDINGS);
    assert!(err.contains("error[unresolved-glossary-name]"), "{err}");
    assert!(err.starts_with(&format!("{}:22:", path.display())), "{err}");
}

#[test]
fn check_missing_file_is_an_io_error() {
    let (code, _, err) = qcm(&["check", "/nonexistent/x.qcm"]);
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("/nonexistent/x.qcm"));
}

#[test]
fn usage_errors() {
    assert_eq!(qcm(&[]).0, EXIT_IO);
    assert_eq!(qcm(&["frobnicate"]).0, EXIT_IO);
    let (code, out, _) = qcm(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["check", "verify-lemma", "simulate", "serve"] {
        assert!(out.contains(sub), "{out}");
    }
}

#[test]
fn verify_lemma_passes_and_corruption_fails() {
    let (code, out, _) = qcm(&["verify-lemma"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.trim_end().ends_with("PASS"), "{out}");
    let (code, out, _) = qcm(&["verify-lemma", "--corrupt"]);
    assert_eq!(code, EXIT_FINDINGS);
    assert!(out.trim_end().ends_with("FAIL"), "{out}");
    assert_eq!(qcm(&["verify-lemma", "--tolerance", "0"]).0, EXIT_OK);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ndjson");
    let b = dir.path().join("b.ndjson");
    let bell = corpus("bell.qcm");
    let args = |p: &Path| {
        vec!["simulate".to_string(), bell.clone(), "--seed".into(), "9".into(), "--trials".into(), "200".into(),
             "--chsh-trials".into(), "1000".into(), "--out".into(), p.display().to_string()]
    };
    let (c1, out1, _) = qcm(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let (c2, out2, _) = qcm(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(out1, out2);
    assert!(out1.starts_with("seed 9 "), "{out1}");
    assert!(out1.contains("same-colour agreement: 800/800"), "{out1}");
    let log = std::fs::read(&a).unwrap();
    assert_eq!(log, std::fs::read(&b).unwrap());
    let headers = String::from_utf8(log).unwrap().lines().filter(|l| l.contains("\"type\":\"session\"")).count();
    assert_eq!(headers, 200);
}

#[test]
fn simulate_without_seed_prints_the_drawn_one() {
    let (code, out, _) = qcm(&["simulate", &corpus("bell.qcm"), "--trials", "10", "--chsh-trials", "0", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["seed"].is_u64());
    assert_eq!(v["trials"], 10);
}

#[test]
fn simulate_rejects_a_broken_score() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qcm");
    std::fs::write(&path, "score \"x\" {\n").unwrap();
    assert_eq!(qcm(&["simulate", path.to_str().unwrap(), "--trials", "1"]).0, EXIT_FINDINGS);
    assert_eq!(qcm(&["simulate", &corpus("bell.qcm"), "--policy", "sideways"]).0, EXIT_IO);
}

#[test]
fn export_replays_a_journal() {
    use qcm::engine::{ObserverAction, SessionOptions};
    use qcm::score::Role;
    use qcm::service::Host;
    use qcm::zx::Colour;

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus("bell.qcm")).unwrap();
    let (host, _) = Host::with_journal(dir.path()).unwrap();
    let (id, _, _) = host.create(&text, Some(11), SessionOptions::default()).unwrap();
    host.act(&id, ObserverAction::choose(Role::Audience, "q1", Colour::Green)).unwrap();
    host.act(&id, ObserverAction::trigger(Role::Audience)).unwrap();
    let expected = host.with_session(&id, |s| s.to_ndjson(qcm::engine::Timestamps::Exclude)).unwrap();

    let journal = qcm::service::journal::path_for(dir.path(), &id);
    let (code, out, err) = qcm(&["export", journal.to_str().unwrap(), "--no-timestamps"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, expected);
    assert!(out.lines().all(|l| !l.contains("\"ts\"")));
}
