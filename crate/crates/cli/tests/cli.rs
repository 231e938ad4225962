use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn efgdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efgdom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, stdout(o)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("efgdom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_fixtures() {
    let fig1 = fixture("fig1.efg");
    let o = efgdom(&["validate", path(&fig1)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok:"), "{}", stdout(&o));
    let o = efgdom(&["validate", "--json", path(&fig1)]);
    assert_eq!(json(&o)["violations"], serde_json::json!([]));

    let bad = scratch("bad.efg");
    std::fs::write(&bad, "EFG 2 R \"g\" { \"P1\" \"P2\" }\nc \"\" 1 \"\" { \"a\" 0.5 \"b\" 0.6 } 0\nt \"\" 1 \"\" { 1, -1 }\nt \"\" 2 \"\" { 0, 0 }\n").unwrap();
    let o = efgdom(&["validate", "--json", path(&bad)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["violations"].as_array().unwrap().len(), 1);

    let o = efgdom(&["validate", path(&fixture("missing.efg"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let fig2 = fixture("fig2.efg");
    for args in [
        vec!["frobnicate"],
        vec!["--jobs", "0", "validate", path(&fig2)],
        vec!["check", path(&fig2), "--player", "3", "--infoset", "P1", "--action", "2"],
        vec!["check", path(&fig2), "--player", "1"],
        vec!["reduce", "--in", path(&fig2), "--out", "x.efg", "--log", "x.json", "--max-rounds", "0"],
        vec!["reduce", "--in", path(&fig2), "--out", "x.efg", "--log", "x.json", "--mode", "sideways"],
    ] {
        let o = efgdom(&args);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(efgdom(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_reports_values() {
    let fig2 = fixture("fig2.efg");
    let o = efgdom(&["check", path(&fig2), "--player", "1", "--infoset", "P1", "--action", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["player"], 1);
    assert_eq!(v["result"], "StrictlyDominated");
    assert!((v["u1"].as_f64().unwrap() + 50.0).abs() < 1e-9);
    assert!(v["u2"].as_f64().unwrap().abs() < 1e-9);

    let o = efgdom(&["check", path(&fig2), "--player", "1", "--infoset", "nope", "--action", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = efgdom(&["check", path(&fig2), "--player", "1", "--infoset", "P1", "--action", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let fig1 = fixture("fig1.efg");
    for args in [
        vec!["check", path(&fig1), "--player", "2", "--infoset", "P2 top", "--action", "2", "--weak"],
        vec!["sequence-form", "--json", path(&fig1)],
        vec!["--jobs", "3", "solve", "--json", path(&fig1)],
    ] {
        let (a, b) = (efgdom(&args), efgdom(&args));
        assert_eq!(a.status.code(), Some(0), "{:?}", args);
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}

#[test]
fn reduce_writes_game_and_log() {
    let (out, log) = (scratch("fig1-reduced.efg"), scratch("fig1-log.json"));
    let fig1 = fixture("fig1.efg");
    let run = |jobs: &str| {
        let o = efgdom(&["--jobs", jobs, "reduce", "--in", path(&fig1), "--out", path(&out), "--log", path(&log)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        (stdout(&o), std::fs::read(&out).unwrap(), std::fs::read(&log).unwrap())
    };
    let first = run("1");
    assert!(first.0.contains("round 1: removed"), "{}", first.0);
    assert_eq!(first, run("4"));
    let v: serde_json::Value = serde_json::from_slice(&first.2).unwrap();
    assert!(!v["rounds"].as_array().unwrap().is_empty());
    assert!(v["terminated"].is_string());
    let o = efgdom(&["validate", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok:"));
}

#[test]
fn sequence_form_and_solve() {
    let fig2 = fixture("fig2.efg");
    let v = json(&efgdom(&["sequence-form", "--json", path(&fig2)]));
    assert_eq!(v["sequences"][0].as_array().unwrap().len(), 3);
    assert_eq!(v["E"]["cols"], 3);
    let text = stdout(&efgdom(&["sequence-form", path(&fig2)]));
    assert!(text.starts_with("player 1 sequences (3)"), "{}", text);

    let v = json(&efgdom(&["solve", "--json", path(&fig2)]));
    assert!(v["value"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["x"].as_array().unwrap().len(), 3);
}

#[test]
fn grid_report_from_a_log() {
    let log = scratch("aof-log.json");
    std::fs::write(
        &log,
        r#"{"rounds":[{"round":1,"removals":[
            {"player":1,"infoset":"AA","action":"fold","mode":"strict","u1":-100,"u2":900,"u3":null,"u4":null},
            {"player":2,"infoset":"72o","action":"call","mode":"strict","u1":-300,"u2":-200,"u3":null,"u4":null}]}],
           "terminated":"fixed-point"}"#,
    )
    .unwrap();
    let o = efgdom(&["report", "grid", "--log", path(&log)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("Player 1 (168 undecided)"), "{}", text);
    assert!(text.contains("S(1)") && text.contains("F(1)"));
    let v = json(&efgdom(&["report", "grid", "--json", "--log", path(&log)]));
    assert_eq!(v["player1"]["cells"][0][0], "S(1)");
    assert_eq!(v["player2"]["cells"][12][7], "F(1)");

    std::fs::write(&log, "{not json").unwrap();
    assert_eq!(efgdom(&["report", "grid", "--log", path(&log)]).status.code(), Some(1));
}

#[test]
fn json_games_round_trip() {
    let (as_json, back) = (scratch("fig3.json"), scratch("fig3-back.efg"));
    let fig3 = fixture("fig3.efg");
    // reducing with no removals possible still rewrites the game in the output format
    let log = scratch("fig3-log.json");
    let o = efgdom(&["reduce", "--in", path(&fig3), "--out", path(&as_json), "--log", path(&log), "--max-rounds", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&as_json).unwrap()).unwrap();
    assert!(v["nodes"].is_array());
    let o = efgdom(&["reduce", "--in", path(&as_json), "--out", path(&back), "--log", path(&log), "--max-rounds", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&efgdom(&["validate", path(&back)])), stdout(&efgdom(&["validate", path(&as_json)])));
}

#[test]
fn poker_generation_rejects_bad_blinds() {
    let out = scratch("aof.efg");
    let o = efgdom(&["gen", "poker-aof", "--stack-bb", "4", "--sb", "300", "--bb", "200", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = efgdom(&["gen", "poker-aof", "--stack-bb", "4", "--mc-samples", "0", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
}
