use std::io::Write;
use std::process::{Command, Output};

fn rccs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rccs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("valid json")
}

#[test]
fn parse_prints_a_tree_or_fails_with_two() {
    let o = rccs(&["parse", "a.0|b.0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "Par\n  Prefix a\n    Nil\n  Prefix b\n    Nil\n"
    );
    assert_eq!(code(&rccs(&["parse", "a.b.0+b.a.0"])), 0);
    let o = rccs(&["parse", "a.0 +"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cannot parse"));
}

#[test]
fn parse_json() {
    let o = rccs(&["parse", "--format", "json", "(a)a.0"]);
    assert_eq!(
        json(&o),
        serde_json::json!({"restrict": {"name": "a", "body": {"prefix": {"action": "a", "then": "nil"}}}})
    );
}

#[test]
fn encode_formats() {
    let o = rccs(&["encode", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), r#"{"events":[],"configurations":[[]]}"#);

    let o = rccs(&["encode", "--format", "dot", "a.0|b.0"]);
    let dot = stdout(&o);
    assert!(dot.contains("rankdir=BT"));
    assert_eq!(dot.matches(" -> ").count(), 4);

    let o = rccs(&["encode", "a.b.0"]);
    assert!(stdout(&o).starts_with("events: e0:a e1:b\nconfigurations: {} {e0} {e0,e1}\n"));
}

#[test]
fn encode_reports_clashes() {
    for extra in [&[][..], &["--no-par-collapse"][..]] {
        let mut args = vec!["encode", "a.0|a.0"];
        args.extend_from_slice(extra);
        let o = rccs(&args);
        assert_eq!(code(&o), 2);
        assert!(
            stderr(&o).contains("auto-concurrency on a"),
            "{}",
            stderr(&o)
        );
    }
    let o = rccs(&["encode", "a.0 + a.0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not collapsed"));
}

#[test]
fn step_replays_a_script() {
    let o = rccs(&[
        "step",
        "a.0|b.0",
        "--script",
        "fwd a; fwd b; bwd",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2]["address"], serde_json::json!(["e0", "e1"]));
    assert_eq!(rows[3]["step"], "2:b-");
    assert_eq!(rows[3]["address"], serde_json::json!(["e0"]));
    assert_eq!(rows[3]["memory"], serde_json::json!(["1:a"]));

    let o = rccs(&[
        "step",
        "a.0|b.0",
        "--script",
        "fwd a; fwd 2:b; bwd 1",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)[3]["address"], serde_json::json!(["e1"]));
}

#[test]
fn step_without_script_and_illegal_steps() {
    let o = rccs(&["step", "a.0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("state 0:"));
    assert!(!stdout(&o).contains("state 1"));
    assert_eq!(code(&rccs(&["step", "a.0", "--script", "bwd"])), 2);
    assert_eq!(
        code(&rccs(&["step", "a.b.0", "--script", "fwd a; fwd b; bwd 1"])),
        2
    );
    assert_eq!(code(&rccs(&["step", "a.0", "--script", "fwd b"])), 2);
    assert_eq!(code(&rccs(&["step", "a.0", "--script", "fwd 3:a"])), 2);
}

#[test]
fn check_exit_codes() {
    let o = rccs(&["check", "hhpb", "a.0|b.0", "a.b.0+b.a.0"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["failing_stratum"], 2);
    assert_eq!(v["witness"]["stratum"], "B2");

    assert_eq!(
        code(&rccs(&["check", "strong", "a.0|b.0", "a.b.0+b.a.0"])),
        0
    );
    assert_eq!(code(&rccs(&["check", "hhpb", "a.0", "a.0"])), 0);
    assert_eq!(code(&rccs(&["check", "bfbarb", "a.0", "b.0"])), 1);
    assert_eq!(code(&rccs(&["check", "oracle", "a.0|b.0", "b.0|a.0"])), 0);
    assert_eq!(
        code(&rccs(&[
            "check",
            "oracle",
            "--max-events",
            "3",
            "a.0|b.0",
            "b.0|a.0"
        ])),
        2
    );
    assert_eq!(code(&rccs(&["check", "hhpb", "a.0"])), 2);
    assert_eq!(code(&rccs(&["check", "hhpb", "a.0|a.0", "a.0"])), 2);
    assert_eq!(code(&rccs(&["check", "nonsense", "a.0", "a.0"])), 2);
}

#[test]
fn check_reads_terms_from_expr_and_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a.0 | b.0\n\nb.0 | a.0").unwrap();
    let path = f.path().to_str().unwrap();
    assert_eq!(code(&rccs(&["check", "hhpb", "--file", path])), 0);
    assert_eq!(
        code(&rccs(&["check", "hhpb", "--expr", "a.0", "--expr", "b.0"])),
        1
    );
}

#[test]
fn discriminate_transcripts() {
    let o = rccs(&["discriminate", "a.0|b.0", "a.b.0+b.a.0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(
        out.starts_with("context: ('a.0 + #c0.0) | ('b.0 + #c1.0) | [·]\n"),
        "{out}"
    );
    assert!(out.contains("failing stratum: B2"));
    assert!(out.contains("verified: the context discriminates"));

    let o = rccs(&["discriminate", "a.0|b.0", "b.0|a.0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("processes are HHPB-related; nothing to discriminate"));

    let o = rccs(&["discriminate", "--format", "json", "a.0", "b.0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["context"], "[·]");
    assert_eq!(v["barbs"], serde_json::json!(["{a}", "{b}"]));
    assert_eq!(v["discriminates"], true);
}

#[test]
fn congruence_with_extra_contexts() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "[] | #k.0\n(a)[]").unwrap();
    let path = f.path().to_str().unwrap();
    let o = rccs(&[
        "congruence",
        "--format",
        "json",
        "--contexts",
        path,
        "a.0|b.0",
        "b.0|a.0",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["scope"], "over context family");
    let contexts: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["context"].as_str().unwrap())
        .collect();
    assert!(contexts.contains(&"[·] | #k.0"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "a.0 +").unwrap();
    let o = rccs(&[
        "congruence",
        "--contexts",
        bad.path().to_str().unwrap(),
        "a.0",
        "a.0",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn batch_over_a_file_and_a_corpus() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a.0 | b.0\nb.0 | a.0\na.b.0 + b.a.0").unwrap();
    let o = rccs(&["batch", "--file", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let related: Vec<bool> = rows
        .iter()
        .map(|r| r["related"].as_bool().unwrap())
        .collect();
    assert_eq!(related, vec![true, false, false]);

    let a = rccs(&["batch", "--pairs", "15", "--seed", "7"]);
    let b = rccs(&["batch", "--pairs", "15", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a).lines().count(), 15);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn bounds_must_be_positive() {
    assert_eq!(
        code(&rccs(&["--max-context", "0", "discriminate", "a.0", "b.0"])),
        2
    );
}
