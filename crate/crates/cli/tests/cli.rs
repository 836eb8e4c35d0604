//! End-to-end tests of the `simband` binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simband"))
}

fn toy_path() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/toy.txt")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn decode_cosine_hypercube_reproduces_the_example() {
    let out = run(&["decode", toy_path(), "--metric", "cosine", "--space", "hypercube"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("prediction: 11111"), "{text}");
    assert!(text.contains("expected utility: 0.689311986917"), "{text}");
}

#[test]
fn decode_all_toy_metrics() {
    for (metric, space, expected) in [
        ("hr1", "candidates", "11001"),
        ("bitwise", "candidates", "10000"),
        ("tanimoto", "hypercube", "11001"),
    ] {
        let out = run(&["decode", toy_path(), "--metric", metric, "--space", space]);
        assert!(out.status.success());
        assert!(
            stdout(&out).contains(&format!("prediction: {expected}")),
            "{metric}: {}",
            stdout(&out)
        );
    }
}

#[test]
fn decode_top_k() {
    let out = run(&["decode", toy_path(), "--metric", "hrk", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("3 (p=0.4)"), "{text}");
    assert!(text.contains("2 (p=0.3)"), "{text}");

    // missing --k is a validation failure
    let out = run(&["decode", toy_path(), "--metric", "hrk"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn closed_form_flag_matches_brute_force() {
    let brute = run(&["decode", toy_path(), "--metric", "cosine", "--space", "hypercube"]);
    let closed = run(&["decode", toy_path(), "--metric", "cosine", "--closed-form"]);
    assert_eq!(stdout(&brute), stdout(&closed));

    let out = run(&["decode", toy_path(), "--metric", "tanimoto", "--closed-form"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn regret_text_and_json_agree() {
    let text_out = run(&["regret", toy_path(), "--eval", "tanimoto", "--decode", "hr1"]);
    assert!(text_out.status.success());
    let text = stdout(&text_out);

    let json_out = run(&["--json", "regret", toy_path(), "--eval", "tanimoto", "--decode", "hr1"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let report = &payload[0];

    let bound = report["bound"].as_f64().unwrap();
    assert!((bound - 1.0 / 12.0).abs() < 1e-12);
    assert_eq!(report["regret"].as_f64().unwrap(), 0.0);
    // the text mode prints the very same numbers
    assert!(text.contains(&format!("{bound}")), "{text}");
    assert!(text.contains("regret             0\n"), "{text}");
}

#[test]
fn verify_small_run_passes_and_is_deterministic() {
    let a = run(&["verify", "--trials", "120", "--m", "10", "--l", "12"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["verify", "--trials", "120", "--m", "10", "--l", "12"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("suite: PASS"));

    let vac = run(&["verify", "--trials", "0"]);
    assert!(vac.status.success());
    assert!(stdout(&vac).contains("vacuous"));
}

#[test]
fn verify_respects_seed_flag() {
    let a = run(&["--seed", "1", "verify", "--trials", "150", "--m", "8", "--l", "8"]);
    let b = run(&["--seed", "2", "verify", "--trials", "150", "--m", "8", "--l", "8"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(stdout(&a), stdout(&b));
}

#[test]
fn construct_bitwise_emits_a_parseable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wc.txt");
    let out = run(&[
        "construct", "--which", "bitwise", "--m", "3", "--eps", "0.01",
        "-o", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("0.49 100"), "{text}");
    assert!(text.contains("0.47 011"), "{text}");

    // the emitted file feeds straight back into decode
    let out = run(&["decode", path.to_str().unwrap(), "--metric", "bitwise"]);
    assert!(stdout(&out).contains("prediction: 000"));
}

#[test]
fn construct_tight2_reports_zero_slack() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.json");
    let out = run(&["construct", "--which", "tight2", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let payload: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((payload["regret"].as_f64().unwrap() - 0.08).abs() < 1e-12);
    assert!(payload["slack"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn construct_rejects_infeasible_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let out = run(&[
        "construct", "--which", "tight2", "--sigma-max", "1.0",
        "-o", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
}

#[test]
fn losses_command_prints_every_loss() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("scores.txt");
    std::fs::write(&scores, "0.5 0.5\n").unwrap();
    let out = run(&["losses", "10", scores.to_str().unwrap(), "--gamma", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bce"), "{text}");
    assert!(text.contains("1.38629436"), "{text}");
    assert!(text.contains("0.292893219"), "{text}"); // cosine loss
    assert!(text.contains("0.666666667"), "{text}"); // iou loss

    let toy_scores = dir.path().join("p.txt");
    std::fs::write(&toy_scores, "0.8 0.7 0.2 0.3 0.9\n").unwrap();
    let out = run(&[
        "losses", "11001", toy_scores.to_str().unwrap(), "--tau", "1",
        "--candidates", toy_path(), "--true-index", "3", "--grad-check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("contrastive-fp-cos"), "{text}");
    assert!(text.contains("grad-check rel err"), "{text}");
}

#[test]
fn retrieve_reports_hit_rates() {
    let dir = tempfile::tempdir().unwrap();
    let cands = dir.path().join("cands.txt");
    std::fs::write(
        &cands,
        "m=3\ntrue=0\n0.6 110\n0.4 011\n---\nm=3\ntrue=1\n0.5 100\n0.5 011\n",
    )
    .unwrap();
    let preds = dir.path().join("preds.txt");
    // first prediction nails its truth; second ranks the wrong candidate first
    std::fs::write(&preds, "0.9 0.8 0.1\n0.9 0.1 0.2\n").unwrap();

    let out = run(&[
        "retrieve", cands.to_str().unwrap(), preds.to_str().unwrap(),
        "--sim", "cosine", "--k", "1,2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("HR@1    50.00%"), "{text}");
    assert!(text.contains("HR@2    100.00%"), "{text}");
    assert!(text.contains("mean tanimoto"), "{text}");
}

#[test]
fn band_true_reference_variant() {
    let out = run(&["band", toy_path(), "--true-ref"]);
    assert!(out.status.success());
    // similarities to y4 = 11001 are {2/3, 1/4, 1/4}
    assert!(stdout(&out).contains("0.25"), "{}", stdout(&out));

    // without a true= marker the row reports an error but the run succeeds
    let dir = tempfile::tempdir().unwrap();
    let nofile = dir.path().join("no_true.txt");
    std::fs::write(&nofile, "m=3\n0.5 100\n0.5 011\n").unwrap();
    let out = run(&["band", nofile.to_str().unwrap(), "--true-ref"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("error"), "{}", stdout(&out));
}

#[test]
fn exit_codes() {
    // usage error: unknown subcommand
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // validation error: nonexistent file
    let out = run(&["decode", "/nonexistent/file.txt", "--metric", "hr1"]);
    assert_eq!(out.status.code(), Some(1));

    // validation error: probabilities sum to 0.9
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "m=2\n0.5 10\n0.4 01\n").unwrap();
    let out = run(&["decode", bad.to_str().unwrap(), "--metric", "hr1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.9"));

    // tolerance overrides are validated
    let out = run(&["--tolerance", "bogus=1", "verify", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
}
