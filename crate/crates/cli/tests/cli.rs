use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn linproc(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_linproc")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let r = linproc(&full);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", r.stdout));
    assert_eq!(doc["schema_version"], 1);
    (r.code, doc)
}

fn states(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn prove_examples() {
    let r = linproc(&["prove", ". ; . |- a -o a"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("[⊸R]") && r.stdout.contains("[init]"), "{}", r.stdout);
    assert_eq!(linproc(&["prove", "b, !a ; a |- a"]).code, 0);
    assert_eq!(linproc(&["prove", ". ; a * b |- b * a"]).code, 0);
    assert_eq!(linproc(&["prove", ". ; a |- b"]).code, 1);
    assert_eq!(linproc(&["prove", ". ; . |- !a"]).code, 1);
    assert_eq!(linproc(&["prove", ". ; a & b |- a & b"]).code, 0);
    assert_eq!(linproc(&["prove", ". ; 1 |- 1"]).code, 0);
    assert_eq!(linproc(&["prove", ". ; . |- 1"]).code, 0);
}

#[test]
fn derivations_round_trip_through_the_checker() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("proof.json");
    let r = linproc(&["--json", "prove", ". ; a * b |- b * a"]);
    assert_eq!(r.code, 0);
    std::fs::write(&path, &r.stdout).unwrap();
    assert_eq!(linproc(&["check-deriv", path.to_str().unwrap()]).code, 0);

    // a 1L node whose premise keeps the 1
    let bad = r#"{"rule":"1L","conclusion":{"gamma":[],"delta":[{"t":"one"}],"goal":{"t":"one"}},
        "premises":[{"rule":"1R","conclusion":{"gamma":[],"delta":[{"t":"one"}],"goal":{"t":"one"}},"premises":[]}]}"#;
    std::fs::write(&path, bad).unwrap();
    let r = linproc(&["check-deriv", path.to_str().unwrap()]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
}

#[test]
fn logical_examples() {
    assert_eq!(linproc(&["logical", ". ; a", ". ; a & b"]).code, 0);
    assert_eq!(linproc(&["logical", ". ; a & b", ". ; a"]).code, 1);
    assert_eq!(linproc(&["logical", ". ; a", ". ; !a"]).code, 0);
    assert_eq!(linproc(&["logical", ". ; !a", ". ; a"]).code, 1);
    for s in [". ; .", ". ; a, b", "a ; a -o b", ". ; !top"] {
        assert_eq!(linproc(&["logical", ". ; top", s]).code, 0, "{s}");
    }
}

#[test]
fn step_examples() {
    let succ = |s: &str| {
        let (code, doc) = json(&["step", s]);
        assert_eq!(code, 0);
        doc["successors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| format!("{} {}", e["label"].as_str().unwrap(), e["to"].as_str().unwrap()))
            .collect::<Vec<_>>()
    };
    assert!(succ(". ; a, a -o b").contains(&"tau . ; b".to_string()));
    assert!(succ(". ; top").is_empty());
    let choice = succ(". ; a & b, 1");
    for t in ["tau . ; a, 1", "tau . ; b, 1", "tau . ; a & b"] {
        assert!(choice.contains(&t.to_string()), "{choice:?}");
    }
    assert!(succ(". ; a").contains(&"!a . ; .".to_string()));
    assert!(succ(". ; a -o b").contains(&"?a . ; b".to_string()));
    assert_eq!(succ("a ; ."), vec!["tau a ; a".to_string()]);
}

#[test]
fn lts_writes_dot_and_reports_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let (code, doc) = json(&["--budget-clones", "2", "lts", ". ; !a", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["truncated"], true);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    for s in ["a ; .", "a ; a", "a ; a, a"] {
        assert!(text.contains(&format!("\"{s}\"")), "{s} missing from\n{text}");
    }
    let (_, doc) = json(&["lts", ". ; top"]);
    assert_eq!(doc["truncated"], false);
    assert!(doc["edges"].as_array().unwrap().is_empty());
}

#[test]
fn barbs_examples() {
    let barbs = |s: &str| {
        let (code, doc) = json(&["barbs", s]);
        assert_eq!(code, 0);
        (states(&doc["strong"]), states(&doc["weak"]))
    };
    assert_eq!(barbs(". ; a, a -o b"), (vec!["a".into()], vec!["a".into(), "b".into()]));
    assert_eq!(barbs(". ; top"), (vec![], vec![]));
    assert_eq!(barbs("a ; ."), (vec![], vec!["a".into()]));
}

#[test]
fn sim_examples() {
    let r = linproc(&["sim", ". ; a & b", ". ; a"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("refutation"), "{}", r.stdout);
    let (code, doc) = json(&["sim", ". ; a & b", ". ; a"]);
    assert_eq!(code, 1);
    assert!(!doc["result"]["trace"].as_array().unwrap().is_empty());

    let (code, doc) = json(&["sim", ". ; a", ". ; a & b"]);
    assert_eq!(code, 0);
    assert!(!doc["result"]["witness"].as_array().unwrap().is_empty());
    assert_eq!(linproc(&["sim", ". ; a", ". ; !a"]).code, 0);
    assert_eq!(linproc(&["sim", ". ; !a", ". ; a"]).code, 1);
    assert_eq!(linproc(&["sim", ". ; a", "b ; a"]).code, 0);
    assert_eq!(linproc(&["sim", ". ; a, b", ". ; a * b"]).code, 0);
    assert_eq!(linproc(&["sim", ". ; a * b", ". ; b * a"]).code, 0);
    assert_eq!(linproc(&["sim", ". ; b * a", ". ; a * b"]).code, 0);
    assert_eq!(linproc(&["sim", ". ; 1", ". ; ."]).code, 0);
    assert_eq!(linproc(&["sim", ". ; .", ". ; 1"]).code, 0);
}

#[test]
fn ctx_examples() {
    let r = linproc(&["ctx", ". ; a", ". ; b", "--context", ". ; ."]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("barb a"), "{}", r.stdout);
    let r = linproc(&["ctx", ". ; a -o b", ". ; top", "--context", ". ; a"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("barb b"), "{}", r.stdout);
    for s in [". ; a", ". ; a & b", "a ; a -o b"] {
        let r = linproc(&["ctx", s, s, "--context", ". ; .", "--context", ". ; a", "--context", "a ; a -o a"]);
        assert_ne!(r.code, 1, "{s}: {}", r.stdout);
    }
    let (code, doc) = json(&["ctx", ". ; a & b", ". ; a"]);
    assert_eq!(code, 1);
    assert!(doc["result"]["context"].is_object());
}

#[test]
fn crosscheck_tiny_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = json(&["crosscheck", "--preset", "tiny", "--replay-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let report = &doc["report"];
    assert_eq!(report["disagreements"].as_array().unwrap().len(), 0);
    assert!(report.get("wall_time_ms").is_none());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn usage_errors_exit_64_and_name_the_argument() {
    let r = linproc(&["sim", "; a", ". ; a"]);
    assert_eq!(r.code, 64);
    assert!(r.stderr.contains("<left>"), "{}", r.stderr);
    let r = linproc(&["--budget-depth", "x", "prove", "a"]);
    assert_eq!(r.code, 64);
    assert!(r.stderr.contains("--budget-depth"), "{}", r.stderr);
    let r = linproc(&["crosscheck", "--preset", "huge"]);
    assert_eq!(r.code, 64);
    assert!(r.stderr.contains("--preset"), "{}", r.stderr);
    assert_eq!(linproc(&["frobnicate"]).code, 64);
    assert_eq!(linproc(&["--help"]).code, 0);
}

#[test]
fn budget_flags_reach_the_checkers() {
    // with no clones a replicated atom never appears in Δ
    let (_, doc) = json(&["--budget-clones", "0", "barbs", "a ; ."]);
    assert!(states(&doc["weak"]).is_empty());
    let (_, doc) = json(&["--budget-depth", "3", "--budget-states", "10", "--budget-clones", "1", "prove", ". ; a |- a"]);
    assert_eq!(doc["budget"]["max_depth"], 3);
    assert_eq!(doc["budget"]["max_nodes"], 10);
    assert_eq!(doc["budget"]["max_clones_per_branch"], 1);
}
