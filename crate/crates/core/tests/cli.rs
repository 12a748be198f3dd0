use std::process::Command;

fn padepde(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_padepde"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn expand_prints_the_series() {
    let (code, out, _) = padepde(&["expand", "--problem", "corpus/one-wave-massshell-2-2.txt", "--order", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("c[3] = (c1^3*lambda)/(8*m^2)"), "{out}");
}

#[test]
fn pade_with_order_override_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("pade.json");
    let (code, out, _) = padepde(&[
        "pade",
        "--problem",
        "corpus/one-wave-massshell-1-1.txt",
        "--L",
        "2",
        "--M",
        "2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("pade [2/2]"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["command"], "pade");
    assert_eq!(v["pade"]["l"], 2);
}

#[test]
fn verify_follows_the_rules_flag() {
    let file = "corpus/two-wave-massshell-2-2-condN2.txt";
    let (_, out, _) = padepde(&["verify", "--problem", file]);
    assert!(out.contains("exact: true"), "{out}");
    let (code, out, _) = padepde(&["verify", "--problem", file, "--rules", ""]);
    assert_eq!(code, 0);
    assert!(out.contains("exact: false"), "{out}");
}

#[test]
fn conditions_accept_named_rules() {
    let (code, out, _) = padepde(&[
        "conditions",
        "--problem",
        "corpus/two-wave-massshell-1-1.txt",
        "--rules",
        "kleingordon",
    ]);
    assert_eq!(code, 0);
    assert!(!out.contains("E["), "{out}");
}

#[test]
fn unknown_rule_is_a_usage_error() {
    let (code, _, err) = padepde(&["verify", "--problem", "corpus/one-wave-massshell-2-2.txt", "--rules", "nosuch"]);
    assert_eq!(code, 1);
    assert!(err.contains("nosuch"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let (code, _, _) = padepde(&["expand", "--problem", "corpus/none.txt"]);
    assert_eq!(code, 1);
}

#[test]
fn corpus_filter_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("corpus.json");
    let (code, out, _) = padepde(&["corpus", "--filter", "two-wave*condN2", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let names: Vec<&str> = v["scenarios"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["two-wave/massshell/[2/2]+condN2", "two-wave/secondbranch/[1/1]+condN2v2"]);
    assert_eq!(v["failed"], 0);
}
