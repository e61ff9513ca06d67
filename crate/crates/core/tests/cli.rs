//! End-to-end tests of the installed binary.

use std::process::{Command, Output};

fn invseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn count_examples() {
    let out = invseq(&["count", "--pattern", "012", "--n", "8", "--method", "recurrence"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "13358");

    let out = invseq(&["count", "--pattern", "000", "--n", "8", "--method", "brute"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "28673");

    // pattern longer than the sequence
    let out = invseq(&["count", "--pattern", "0123", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn count_refined_and_check() {
    let out = invseq(&[
        "count", "--pattern", "102", "--n", "4", "--refine", "3", "--method", "recurrence",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5");

    // k >= n leaves nothing to count
    let out = invseq(&["count", "--pattern", "102", "--n", "4", "--refine", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");

    let out = invseq(&["count", "--pattern", "201", "--n", "7", "--check"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4548");
}

#[test]
fn sequence_text() {
    let out = invseq(&["sequence", "--pattern", "110", "--n-max", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 2 6 23 109 618 4098 31173");

    let out = invseq(&["sequence", "--pattern", "101", "--n-max", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 2 6 23 109 619 4113 31352");

    // every nonempty sequence starts with 0, hence contains the pattern 0
    let out = invseq(&["sequence", "--pattern", "0", "--n-max", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0 0 0");
}

#[test]
fn sequence_csv_and_bfile() {
    let out = invseq(&["sequence", "--pattern", "012", "--n-max", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# pattern=012 method=brute");
    assert_eq!(lines[1], "n,k,count");
    assert!(lines.contains(&"4,3,3"));

    let out = invseq(&["sequence", "--pattern", "012", "--n-max", "4", "--format", "bfile"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 1\n2 2\n3 5\n4 17\n");

    let out = invseq(&[
        "sequence", "--pattern", "012", "--n-max", "3", "--format", "bfile", "--offset", "5",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "5 1\n6 2\n7 5\n");
}

#[test]
fn sequence_json() {
    let out = invseq(&[
        "sequence", "--pattern", "021", "--n-max", "5", "--format", "json",
        "--method", "recurrence",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pattern"], "021");
    assert_eq!(v["method"], "recurrence");
    assert_eq!(v["totals"][4]["n"], 5);
    assert_eq!(v["totals"][4]["count"], "107");
    assert!(v.get("timestamp").is_none());

    // determinism modulo --timestamp
    let again = invseq(&[
        "sequence", "--pattern", "021", "--n-max", "5", "--format", "json",
        "--method", "recurrence",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn classify_text_and_json() {
    let out = invseq(&[
        "classify", "--length", "3", "--n-max", "8", "--level", "superstrong",
        "--format", "text",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "12 classes at level superstrong (n <= 8)"
    );
    assert!(text.lines().any(|l| l == "100 110"));

    let out = invseq(&["classify", "--length", "1", "--n-max", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["level"], "wilf");
    assert_eq!(v["classes"], serde_json::json!([["0"]]));

    let out = invseq(&[
        "classify", "--patterns", "100, 110, 120", "--n-max", "6", "--level", "strong",
        "--format", "text",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l == "100 110"));
}

#[test]
fn verify_suites() {
    let out = invseq(&["verify", "tables3and4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "tables3and4");

    let out = invseq(&["verify", "derangement-identity", "--format", "text"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("derangement-identity: pass"));
}

#[test]
fn config_file_defaults_and_overrides() {
    let dir = std::env::temp_dir().join("invseq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defaults.conf");
    std::fs::write(&path, "# defaults\npattern = 012\nn = 8\nn-max = 4\n").unwrap();
    let path = path.to_str().unwrap();

    let out = invseq(&["count", "--config", path, "--method", "recurrence"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "13358");

    // explicit flag beats the config value
    let out = invseq(&["count", "--config", path, "--pattern", "000"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "28673");

    let out = invseq(&["sequence", "--config", path]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 2 5 17");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["count", "--pattern", "012"][..],          // missing --n
        &["count", "--n", "5"],                      // missing --pattern
        &["count", "--pattern", "021", "--n", "30"], // over the brute ceiling
        &["count", "--pattern", "021", "--n", "8", "--method", "fast"],
        &["count", "--pattern", "0123", "--n", "8", "--method", "recurrence"],
        &["sequence", "--pattern", "21", "--n-max", "5"], // not a reduced word
        &["classify", "--length", "3", "--n-max", "9", "--level", "superstrong"],
        &["classify", "--n-max", "5"], // neither --length nor --patterns
        &["verify", "no-such-suite"],
    ] {
        let out = invseq(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    }
}
