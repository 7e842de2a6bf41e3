use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn peaktally(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peaktally"))
        .current_dir(dir)
        .env_remove("PEAKTALLY_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = peaktally(dir.path(), args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn stdout_of(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn count_examples() {
    assert_eq!(
        stdout_of(&["count", "--group", "hyp", "--set", "2", "--n", "4"]).trim(),
        "128"
    );
    assert_eq!(
        stdout_of(&["count", "--group", "hyp", "--hat", "--n", "4"]).trim(),
        "41"
    );
    assert_eq!(
        stdout_of(&["count", "--set", "2", "--n", "4", "--method", "oracle"]).trim(),
        "8"
    );
    assert_eq!(
        stdout_of(&["count", "--set", "2,3", "--n", "6"]).trim(),
        "0"
    );

    let all = stdout_of(&[
        "count", "--group", "sym", "--hat", "--set", "1,3", "--n", "4", "--method", "all",
    ]);
    assert!(all.contains("recursion"), "{all}");
    assert!(all.contains("oracle"), "{all}");
    assert!(all.contains("{1,m}"), "{all}");
    assert!(all.contains("{1,n-1}"), "{all}");
    assert!(all.contains("agree: 5"), "{all}");

    let json: Value = serde_json::from_str(&stdout_of(&[
        "count", "--group", "hyp", "--hat", "--set", "3", "--n", "4", "--method", "all",
        "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["count"], "71");
    assert_eq!(json["agree"], true);
    assert_eq!(json["set"], serde_json::json!([3]));
}

#[test]
fn table_examples() {
    let json: Value = serde_json::from_str(&stdout_of(&[
        "table", "--group", "hyp", "--hat", "--n-max", "2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(
        json,
        serde_json::json!({
            "variant": "hyp-hat",
            "rows": [
                {"n": 1, "set": [], "count": "2"},
                {"n": 2, "set": [], "count": "5"},
                {"n": 2, "set": [1], "count": "3"},
            ]
        })
    );

    let csv = stdout_of(&["table", "--group", "sym", "--n-max", "3", "--format", "csv"]);
    assert_eq!(csv, "n,set,count\n1,,1\n2,,2\n3,,4\n3,2,2\n");

    let oracle = stdout_of(&[
        "table", "--group", "hyp", "--n-max", "5", "--method", "all", "--format", "csv",
    ]);
    let formula = stdout_of(&["table", "--group", "hyp", "--n-max", "5", "--format", "csv"]);
    assert_eq!(oracle, formula);

    // sections follow the Fibonacci numbers
    let rows = stdout_of(&[
        "table", "--group", "sym", "--hat", "--n-max", "9", "--format", "csv",
    ]);
    let in_nine = rows.lines().filter(|l| l.starts_with("9,")).count();
    assert_eq!(in_nine, 55);
}

#[test]
fn poly_examples() {
    let p = stdout_of(&["poly", "--set", "2"]);
    assert_eq!(p.lines().next(), Some("-2 + 1*C(n,1)"));
    assert!(p.contains("degree: 1"));
    assert_eq!(stdout_of(&["poly", "--set", ""]).lines().next(), Some("1"));
    let zero = stdout_of(&["poly", "--set", "2,3"]);
    assert_eq!(zero.lines().next(), Some("0"));
    assert!(zero.contains("note:"));
}

#[test]
fn admissible_examples() {
    let sets = |args: &[&str]| -> usize {
        let json: Value = serde_json::from_str(&stdout_of(args)).unwrap();
        json["sets"].as_array().unwrap().len()
    };
    assert_eq!(sets(&["admissible", "--n", "5", "--format", "json"]), 5);
    assert_eq!(
        sets(&["admissible", "--n", "4", "--hat", "--format", "json"]),
        5
    );
    let one = stdout_of(&["admissible", "--n", "1", "--format", "csv"]);
    assert_eq!(one, "set\n\"\"\n");
}

#[test]
fn verify_examples() {
    let (code, out, _) = run(&[
        "verify",
        "--n-max-sym",
        "2",
        "--n-max-hyp",
        "2",
        "--closed-n-max",
        "8",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS"));

    let (code, out, _) = run(&[
        "verify",
        "--n-max-sym",
        "4",
        "--n-max-hyp",
        "4",
        "--closed-n-max",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    let decomposition = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| {
            r["check"] == "decomposition"
                && r["params"]["group"] == "hyp"
                && r["params"]["set"] == "3"
                && r["params"]["n"] == 4
        })
        .unwrap();
    assert_eq!(decomposition["lhs"], "128");
    assert_eq!(decomposition["note"], "71 + 57");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--n", "0"]).0, 1);
    assert_eq!(run(&["count", "--n", "4", "--set", "3,2"]).0, 1);
    assert_eq!(run(&["count", "--n", "4", "--set", "0"]).0, 1);
    assert_eq!(run(&["count", "--n", "4", "--group", "bogus"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&[]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    // oracle opt-in above the default cap, refusal above the hard cap
    let (code, _, err) = run(&["count", "--group", "hyp", "--n", "10", "--method", "oracle"]);
    assert_eq!(code, 1);
    assert!(err.contains("--allow-large"), "{err}");
    let (code, _, err) = run(&["count", "--n", "14", "--method", "oracle", "--allow-large"]);
    assert_eq!(code, 1);
    assert!(err.contains("hard cap"), "{err}");
    assert_eq!(
        run(&["count", "--set", "2,4,6", "--n", "12", "--method", "closed"]).0,
        0
    );
    assert_eq!(
        run(&["count", "--set", "3,6,9", "--n", "12", "--method", "closed"]).0,
        1
    );
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let out = peaktally(
        dir.path(),
        &["count", "--group", "hyp", "--hat", "--set", "3", "--n", "4"],
    );
    assert!(out.status.success());
    let path = dir.path().join(".peaktally-cache.json");
    let cache: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cache["format_version"], 1);
    assert_eq!(cache["entries"]["hyp-hat|3|4"], "71");

    // a doctored cache is honoured by count, ignored by verify
    let doctored = r#"{"entries":{"sym|2|4":"9"},"format_version":1,"polys":{}}"#;
    std::fs::write(&path, doctored).unwrap();
    let out = peaktally(dir.path(), &["count", "--set", "2", "--n", "4"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "9");
    let out = peaktally(
        dir.path(),
        &[
            "verify",
            "--n-max-sym",
            "4",
            "--n-max-hyp",
            "3",
            "--closed-n-max",
            "6",
        ],
    );
    assert!(out.status.success());

    // flag beats environment
    let other = dir.path().join("other.json");
    let out = Command::new(env!("CARGO_BIN_EXE_peaktally"))
        .current_dir(dir.path())
        .env("PEAKTALLY_CACHE", dir.path().join("env.json"))
        .args(["count", "--n", "5", "--cache"])
        .arg(&other)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(other.exists());
    assert!(!dir.path().join("env.json").exists());

    // a rejected cache is reported and left untouched
    std::fs::write(&path, r#"{"entries":{},"format_version":7,"polys":{}}"#).unwrap();
    let out = peaktally(dir.path(), &["count", "--set", "2", "--n", "4"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "8");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .contains("\"format_version\":7"));

    let out = peaktally(dir.path(), &["count", "--n", "6", "--no-cache"]);
    assert!(out.status.success());
}
