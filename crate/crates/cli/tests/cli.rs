use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const G_EX: &str = "stochastic parity 3;\n0 0 0 1 \"u\";\n1 0 0 0,2 \"v\";\n2 0 0 2 \"w\";\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        path
    }
}

fn sgt(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgt"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn reachability_template_of_the_running_example() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let out = sgt(&[
        &"template",
        &p(&g),
        &"--objective",
        &"reach",
        &"--target",
        &"2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let t = stdout_json(&out);
    assert_eq!(t["colive"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(t["prohibited"], serde_json::json!([]));
    assert_eq!(t["live_groups"], serde_json::json!([]));
    assert_eq!(t["winning_set"], serde_json::json!([0, 1, 2]));
}

#[test]
fn combining_the_two_small_templates() {
    let ws = Workspace::new();
    let t2 = ws.file("t2.json", r#"{"colive": [[0, 1]]}"#);
    let t3 = ws.file("t3.json", r#"{"colive": [[1, 0]]}"#);
    let out = sgt(&[&"combine", &p(&t2), &p(&t3)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out)["colive"],
        serde_json::json!([[0, 1], [1, 0]])
    );
}

#[test]
fn disabling_the_edge_to_w_is_not_winning() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let t1 = ws.file(
        "t1.json",
        r#"{"colive": [[0, 1], [1, 0]], "winning_set": [0, 1, 2]}"#,
    );
    let out = sgt(&[
        &"adapt",
        &p(&g),
        &p(&t1),
        &"--disable",
        &"1:2",
        &"--target",
        &"2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["preserved"], Value::Bool(false));
    assert_eq!(r["critical"], Value::Bool(true));
    assert!(r["diagnosis"].as_str().unwrap().starts_with("not winning"));
    assert_eq!(r["fresh_winning_set"], serde_json::json!([2]));
}

#[test]
fn solve_and_verify_agree_on_parity() {
    let ws = Workspace::new();
    let g = ws.file(
        "parity.txt",
        "stochastic parity 3;\n0 1 0 1;\n1 2 2 0,2;\n2 1 1 2,1;\n",
    );
    let solve = sgt(&[&"solve", &p(&g), &"--objective", &"parity"]);
    assert_eq!(solve.status.code(), Some(0));
    let verify = sgt(&[&"verify", &p(&g), &"--objective", &"parity", &"--oracle"]);
    assert_eq!(verify.status.code(), Some(0));
    let v = stdout_json(&verify);
    assert_eq!(v["agree"], Value::Bool(true));
    assert_eq!(stdout_json(&solve)["winning_set"], v["oracle_winning_set"]);
}

#[test]
fn parameterized_transcripts_are_reproducible() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let t1 = ws.file(
        "t1.json",
        r#"{"colive": [[0, 1], [1, 0]], "winning_set": [0, 1, 2]}"#,
    );
    let run = || {
        sgt(&[
            &"extract",
            &p(&g),
            &p(&t1),
            &"--mode",
            &"param",
            &"--seed",
            &"7",
            &"--start",
            &"0",
        ])
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("1: [0:1/2 2:1/2]"), "{text}");
    assert!(text.contains("transcript seed 7 start 0"));
}

#[test]
fn pure_extraction_reports_dead_ends() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let t1 = ws.file(
        "t1.json",
        r#"{"colive": [[0, 1], [1, 0]], "winning_set": [0, 1, 2]}"#,
    );
    let out = sgt(&[&"extract", &p(&g), &p(&t1)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "semantic");
}

#[test]
fn simulation_report_embeds_the_seed() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let t1 = ws.file(
        "t1.json",
        r#"{"colive": [[0, 1], [1, 0]], "winning_set": [0, 1, 2]}"#,
    );
    let adv = ws.file("adv.json", "[]");
    let table = format!("table:{}", adv.display());
    let out = sgt(&[
        &"simulate",
        &p(&g),
        &p(&t1),
        &"--target",
        &"2",
        &"--runs",
        &"50",
        &"--seed",
        &"11",
        &"--adversary",
        &table,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("seed 11\n"), "{text}");
    assert!(text.contains("satisfied 50"), "{text}");
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let missing = ws.dir.path().join("missing.txt");
    let out = sgt(&[&"solve", &p(&missing), &"--target", &"0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");

    let syntax = ws.file("syntax.txt", "stochastic game 1;\n0 0 0 0;\n");
    let out = sgt(&[&"solve", &p(&syntax), &"--target", &"0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["line"], 1);

    let dead = ws.file("dead.txt", "stochastic parity 1;\n0 0 0 ;\n");
    let out = sgt(&[&"solve", &p(&dead), &"--target", &"0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "semantic");

    let a = ws.file("a.json", r#"{"prohibited": [[0, 1]]}"#);
    let b = ws.file("b.json", r#"{"live_groups": [[[0, 1]]]}"#);
    let out = sgt(&[&"combine", &p(&a), &p(&b)]);
    assert_eq!(out.status.code(), Some(4));
    let d = stderr_json(&out);
    assert_eq!(d["error"], "conflict");
    assert_eq!(d["witness"]["live_group"], serde_json::json!([[0, 1]]));

    let mut big = String::from("stochastic parity 8;\n");
    for v in 0..8 {
        big.push_str(&format!("{v} 0 0 {},{};\n", (v + 1) % 8, v));
    }
    let big = ws.file("big.txt", &big);
    let out = sgt(&[&"verify", &p(&big), &"--target", &"0", &"--oracle"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(stderr_json(&out)["error"], "budget");
}

#[test]
fn template_edges_must_exist() {
    let ws = Workspace::new();
    let g = ws.file("gex.txt", G_EX);
    let bad = ws.file("bad.json", r#"{"colive": [[0, 2]]}"#);
    let out = sgt(&[&"extract", &p(&g), &p(&bad)]);
    assert_eq!(out.status.code(), Some(3));
}
