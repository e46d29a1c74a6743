use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn bhset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhset"))
        .args(args)
        .output()
        .expect("run bhset")
}

fn bhset_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bhset"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bhset");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

/// Runs and expects success, returning the `result` payload.
fn ok(args: &[&str]) -> Value {
    let out = bhset(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let d = doc(&out);
    assert_eq!(d["schema_version"], "1");
    d["result"].clone()
}

fn fails(args: &[&str], code: i32) -> Value {
    let out = bhset(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    doc(&out)["error"].clone()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("bhset-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn xhn_counts_and_lists() {
    assert_eq!(ok(&["xhn", "-h", "2", "-n", "4"])["count"], 10);
    let r = ok(&["xhn", "-h", "2", "-n", "2", "--list", "--diffs"]);
    assert_eq!(r["list"], json!([[2, 0], [1, 1], [0, 2]]));
    assert_eq!(r["diffs"], json!([[2, -2], [1, -1]]));
    fails(&["xhn", "-h", "0", "-n", "2"], 2);
    let e = fails(
        &["xhn", "-h", "10", "-n", "30", "--list", "--cap", "1000"],
        3,
    );
    assert_eq!(e["kind"], "cap_exceeded");
}

#[test]
fn epsilon_examples() {
    let r = ok(&["epsilon", "-h", "2", "sqrt:2", "sqrt:3"]);
    assert!(r["eps"]["lo"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with("0.3178"));
    assert!(r["eps"]["hi"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with("0.3178"));
    assert_eq!(r["eps"]["argmin"], json!([1, -1]));
    assert_eq!(r["q_min"], 13);

    let r = ok(&["epsilon", "-h", "2", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7"]);
    assert!(r["eps"]["lo"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with("0.0918"));
    assert_eq!(r["q_min"], 44);

    let e = fails(&["epsilon", "-h", "2", "rat:1", "rat:2"], 4);
    assert!(e["message"]
        .as_str()
        .unwrap()
        .contains("independence unresolved"));
}

#[test]
fn epsilon_precision_exhaustion_and_validation() {
    let e = fails(
        &[
            "epsilon",
            "-h",
            "2",
            "--precision-max",
            "128",
            "sqrt:2",
            "sqrt:8",
            "sqrt:18",
        ],
        4,
    );
    assert_eq!(e["kind"], "independence_unresolved");
    fails(&["epsilon", "-h", "2", "sqrt:2", "sqrt:3,sqrt:5"], 2);
    fails(&["epsilon", "-h", "2", "sqrt:"], 2);
    fails(&["epsilon", "-h", "2", "sqrt:-2", "sqrt:3"], 2);
    fails(&["epsilon", "-h", "2", "sqrt:2"], 2);
}

#[test]
fn epsilon_vector_theta() {
    let r = ok(&["epsilon", "-h", "2", "sqrt:2,sqrt:3", "sqrt:5,sqrt:7"]);
    assert_eq!(r["d"], 2);
    assert_eq!(r["n"], 2);
}

#[test]
fn negative_theta_after_separator() {
    let r = ok(&["epsilon", "-h", "2", "--", "sqrt:2", "-sqrt:3"]);
    assert_eq!(r["n"], 2);
}

#[test]
fn generate_examples() {
    let r = ok(&["generate", "-h", "2", "-m", "1", "sqrt:2", "sqrt:3"]);
    assert_eq!(r["params"]["q"], 13);
    assert_eq!(r["set"], json!([[18], [22]]));
    assert_eq!(r["certified"], true);

    let r = ok(&[
        "generate", "-h", "2", "-m", "1", "-q", "22", "sqrt:2", "sqrt:3", "sqrt:5", "--all",
    ]);
    assert_eq!(r["count"], 8);
    assert_eq!(r["total"], "8");
    assert_eq!(r["sets"].as_array().unwrap().len(), 8);

    let e = fails(
        &[
            "generate", "-h", "2", "-m", "1", "-q", "5", "sqrt:2", "sqrt:3",
        ],
        5,
    );
    assert_eq!(e["kind"], "uncertified_modulus");
    let r = ok(&[
        "generate", "-h", "2", "-m", "1", "-q", "5", "--force", "sqrt:2", "sqrt:3",
    ]);
    assert_eq!(r["certified"], false);
}

#[test]
fn generate_sampling_needs_seed_and_is_deterministic() {
    let args = [
        "generate", "-h", "2", "-m", "2", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7", "--all",
        "--limit", "10",
    ];
    let e = fails(&args, 3);
    assert_eq!(e["kind"], "limit_exceeded");
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "7"]);
    let a = ok(&seeded);
    let b = ok(&seeded);
    assert_eq!(a, b);
    assert_eq!(a["sampled"], true);
    assert_eq!(a["total"], "256");
    assert_eq!(a["count"], 10);
}

#[test]
fn payload_is_byte_identical_apart_from_timing() {
    let run = || {
        let mut d = doc(&bhset(&[
            "generate", "-h", "3", "-m", "2", "sqrt:2", "sqrt:3", "sqrt:5", "--all",
        ]));
        d.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&d).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn generate_pipes_into_verify() {
    let gen = bhset(&[
        "generate", "-h", "2", "-m", "1", "-q", "44", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7",
        "--all",
    ]);
    assert!(gen.status.success());
    let out = bhset_stdin(&["verify", "-h", "2", "--file", "-"], &gen.stdout);
    assert!(out.status.success());
    let r = doc(&out)["result"].clone();
    assert_eq!(r["count"], 16);
    assert_eq!(r["all_bh"], true);
    for rep in r["reports"].as_array().unwrap() {
        assert_eq!(rep["sumset_size"], 10);
    }

    let gad = bhset(&[
        "gadic", "-g", "10", "-l", "2", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7",
    ]);
    let out = bhset_stdin(&["verify", "-h", "2", "--file", "-"], &gad.stdout);
    assert_eq!(doc(&out)["result"]["all_bh"], true);
}

#[test]
fn verify_sets_file() {
    let gen = ok(&[
        "generate", "-h", "2", "-m", "1", "-q", "44", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7",
        "--all",
    ]);
    let sets: Vec<Value> = gen["sets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["set"].clone())
        .collect();
    let path = temp_file("sets.json", &json!({"d": 1, "sets": sets}).to_string());
    let r = ok(&["verify", "-h", "2", "--file", path.to_str().unwrap()]);
    assert_eq!(r["count"], 16);
    assert!(r["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["is_bh"] == true && x["sumset_size"] == 10));

    let path = temp_file("pts.txt", "# q = 13\n18\n22\n");
    let r = ok(&["verify", "-h", "2", "--file", path.to_str().unwrap()]);
    assert_eq!(r["reports"][0]["sumset_size"], 3);

    let path = temp_file("bad.json", r#"{"d": 2, "sets": [[[1, 2], [3]]]}"#);
    fails(&["verify", "-h", "2", "--file", path.to_str().unwrap()], 2);
    fails(&["verify", "-h", "2", "--file", "/nonexistent/bhset"], 2);
}

#[test]
fn verify_examples() {
    let r = ok(&["verify", "-h", "2", "--points", "18 22"]);
    assert_eq!(r["reports"][0]["is_bh"], true);
    assert_eq!(r["reports"][0]["sumset_size"], 3);

    let r = ok(&["verify", "-h", "2", "--points", "0 1 2"]);
    let rep = &r["reports"][0];
    assert_eq!(rep["is_bh"], false);
    assert_eq!(rep["witness"]["sum"], json!([2]));
    assert_eq!(r["all_bh"], false);

    let r = ok(&["verify", "-h", "2", "--points", "0,0; 1,0; 0,1"]);
    assert_eq!(r["reports"][0]["is_bh"], true);
    fails(&["verify", "-h", "2", "--points", "1 1"], 2);
    fails(
        &[
            "verify",
            "-h",
            "3",
            "--points",
            "1 2 3 4 5 6 7 8",
            "--cap",
            "10",
        ],
        3,
    );
}

#[test]
fn gadic_examples() {
    let r = ok(&[
        "gadic", "-g", "10", "-l", "2", "sqrt:2", "sqrt:3", "sqrt:5", "sqrt:7",
    ]);
    assert_eq!(r["set"], json!([[141], [173], [223], [264]]));
    assert_eq!(r["certified"], true);
    let r = ok(&[
        "gadic",
        "-g",
        "10",
        "--auto-level",
        "sqrt:2",
        "sqrt:3",
        "sqrt:5",
        "sqrt:7",
    ]);
    assert_eq!(r["level"], 2);
    let r = ok(&["gadic", "-g", "2", "--auto-level", "sqrt:2", "sqrt:3"]);
    assert_eq!(r["level"], 4);
    assert_eq!(r["set"], json!([[22], [27]]));
    fails(&["gadic", "-g", "1", "-l", "2", "sqrt:2"], 2);
    let e = fails(
        &["gadic", "-g", "10", "-l", "2", "--", "sqrt:2", "-sqrt:3"],
        2,
    );
    assert_eq!(e["kind"], "non_positive_theta");
}

#[test]
fn text_mode() {
    let out = bhset(&["--text", "verify", "-h", "2", "--points", "0 1 2"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("B_2: no"));
    assert!(s.contains("2 = 0 + 2 = 1 + 1"));
    let out = bhset(&["generate", "-h", "2", "sqrt:2", "sqrt:3", "--text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("{18, 22}"));
    let out = bhset(&["epsilon", "-h", "2", "rat:1", "rat:2", "--text"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: independence unresolved"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bhset(&["verify", "-h", "2"]).status.code(), Some(2));
    assert_eq!(
        bhset(&["gadic", "-g", "10", "sqrt:2"]).status.code(),
        Some(2)
    );
    assert_eq!(bhset(&["bogus"]).status.code(), Some(2));
    assert_eq!(bhset(&["--help"]).status.code(), Some(0));
}
