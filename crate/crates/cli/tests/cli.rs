use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slackspace")).args(args).env_remove("SLACKSPACE_TIME_BUDGET").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const PENTAGON_X: &str =
    r#"{"rows":5,"cols":3,"entries":[["1","0","0"],["1","1","0"],["1","2","1"],["1","1","2"],["1","0","1"]]}"#;

#[test]
fn exit_code_matrix() {
    let dir = TempDir::new().unwrap();
    let bad_cone = write(dir.path(), "bad.json", r#"{"d":2,"v":4,"facets":[[1,2],[1,2,3],[3,4],[4,1]]}"#);
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["slack".into(), fixture("pentagon.vh.json")], 0),
        (vec!["ideal".into(), "plucker".into(), "--k".into(), "3".into(), "--v".into(), "5".into()], 0),
        (vec!["check".into(), fixture("cut-cube.check.json")], 0),
        (vec!["check".into(), fixture("sphere.check.json")], 1),
        (vec!["check".into(), fixture("sphere-super.check.json")], 1),
        (vec!["check".into(), fixture("prismatoid.check.json")], 1),
        (vec!["slack".into(), bad_cone.clone()], 2),
        (vec!["check".into(), garbage], 2),
        (vec!["check".into(), dir.path().join("missing.json").display().to_string()], 2),
        (vec!["ideal".into(), "slack".into()], 2),
        (vec!["slack".into(), fixture("pentagon.json"), "--time-budget".into(), "0".into()], 2),
        (vec!["convert".into(), "--from".into(), "gale".into(), "--to".into(), "plucker".into(), fixture("pentagon.json")], 2),
        (
            vec!["ideal".into(), "slack".into(), fixture("pentagon.json"), "--order".into(), "lex".into(), "--max-basis".into(), "3".into()],
            3,
        ),
    ];
    for (args, want) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(code(&out), want, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn malformed_facets_name_the_antichain_violation() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"d":2,"v":4,"facets":[[1,2],[1,2,3],[3,4],[4,1]]}"#);
    let out = run(&["slack", &bad]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("antichain violation"), "{}", stderr(&out));
}

#[test]
fn resource_abort_reports_partial_state() {
    let out = run(&["ideal", "slack", &fixture("pentagon.json"), "--order", "lex", "--max-basis", "3"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("partial state"), "{}", stderr(&out));
}

#[test]
fn pentagon_slack_matrices() {
    let out = run(&["slack", &fixture("pentagon.vh.json")]);
    let m = json(&out);
    assert_eq!(m["entries"][0], serde_json::json!(["0", "1", "3", "1", "0"]));
    let out = run(&["slack", &fixture("pentagon.json")]);
    assert!(stderr(&out).contains("15 variables"));
    assert_eq!(json(&out)["entries"][0][1], "x_1");
}

#[test]
fn ideal_summaries() {
    let out = run(&["ideal", "slack", &fixture("pentagon.json"), "--order", "lex"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("25 generators, max degree 4"), "{}", stderr(&out));
    let out = run(&["ideal", "plucker", "--k", "3", "--v", "5"]);
    assert_eq!(json(&out)["generators"].as_array().unwrap().len(), 5);
    let out = run(&["ideal", "reduced", &fixture("sphere.json"), "--facets", "1,2,3,4,5,6"]);
    assert!(stderr(&out).contains("6 generators"), "{}", stderr(&out));
    let out = run(&["ideal", "section", &fixture("prism.json"), "--bases", "3=124,4=136,5=236"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("5 generators"), "{}", stderr(&out));
}

#[test]
fn check_prints_verdict_and_certificate() {
    let out = run(&["check", &fixture("sphere.check.json")]);
    assert!(stderr(&out).contains("not realizable (trivial-saturated-ideal)"));
    let report = json(&out);
    assert_eq!(report["verdict"], "not-realizable");
    assert_eq!(report["certificate"]["kind"], "trivial-saturated-ideal");
    let out = run(&["check", &fixture("prismatoid.check.json")]);
    assert_eq!(json(&out)["certificate"]["kind"], "sign-contradiction");
}

#[test]
fn concurrent_checks_match_sequential_ones() {
    let files = ["sphere.check.json", "sphere-super.check.json", "prismatoid.check.json", "cut-cube.check.json"];
    let paths: Vec<String> = files.iter().map(|f| fixture(f)).collect();
    let mut args = vec!["check"];
    args.extend(paths.iter().map(String::as_str));
    let sequential = run(&args);
    args.extend(["--jobs", "4"]);
    let parallel = run(&args);
    assert_eq!(code(&sequential), 1);
    assert_eq!(code(&parallel), 1);
    assert_eq!(sequential.stdout, parallel.stdout);
    assert_eq!(json(&parallel).as_array().unwrap().len(), 4);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["check".to_string(), fixture("prismatoid.check.json")],
        vec!["ideal".into(), "slack".into(), fixture("pentagon.json"), "--order".into(), "lex".into()],
        vec!["slack".into(), fixture("cut-cube.json")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn job_cone_paths_are_relative_to_the_job() {
    let dir = TempDir::new().unwrap();
    std::fs::create_dir(dir.path().join("cones")).unwrap();
    std::fs::copy(fixtures().join("sphere.json"), dir.path().join("cones/s.json")).unwrap();
    let job = write(dir.path(), "job.json", r#"{"cone": "cones/s.json", "facets": [1, 2, 3, 4, 5, 6], "flag": [1, 2, 4, 5, 6]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_slackspace")).args(["check", &job]).current_dir("/").output().unwrap();
    assert_eq!(code(&out), 1, "{}", stderr(&out));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("out.json");
    let out = run(&["check", &fixture("cut-cube.check.json"), "--output", target.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["verdict"], "no-obstruction-found");
}

#[test]
fn time_budget_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_slackspace"))
        .args(["slack", &fixture("pentagon.json")])
        .env("SLACKSPACE_TIME_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_slackspace"))
        .args(["slack", &fixture("pentagon.json")])
        .env("SLACKSPACE_TIME_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn conversions_round_trip() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", PENTAGON_X);
    let p = dir.path().join("p.json").display().to_string();
    let s = dir.path().join("s.json").display().to_string();
    let g = dir.path().join("g.json").display().to_string();
    let cone = fixture("pentagon.json");
    let steps: [&[&str]; 4] = [
        &["convert", "--from", "matrix", "--to", "plucker", &x, "--round-trip", "-o", &p],
        &["convert", "--from", "plucker", "--to", "slack", &p, "--cone", &cone, "--round-trip", "-o", &s],
        &["convert", "--from", "slack", "--to", "gale", &s, "--cone", &cone, "--round-trip", "-o", &g],
        &["convert", "--from", "gale", "--to", "slack", &g, "--cone", &cone, "--round-trip"],
    ];
    let mut last = None;
    for args in steps {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).contains("round trip: ok"));
        last = Some(out);
    }
    let pl: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let coords: Vec<&str> = pl["coords"].as_object().unwrap().values().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(coords.len(), 10);
    assert_eq!(pl["coords"]["123"], "1");
    assert_eq!(pl["coords"]["134"], "3");
    let gale: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert!(gale["dual_plucker"]["coords"].is_object());
    let back = json(&last.unwrap());
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(back["entries"][i][j] == "0", original["entries"][i][j] == "0");
        }
    }
}

#[test]
fn pentagon_gale_vectors_give_the_slack_matrix() {
    let dir = TempDir::new().unwrap();
    let b = write(
        dir.path(),
        "b.json",
        r#"{"rows":5,"cols":2,"entries":[["1","1"],["1","-1"],["0","1"],["2","0"],["-1","2"]]}"#,
    );
    let out = run(&["convert", "--from", "gale", "--to", "slack", &b, "--cone", &fixture("pentagon.json")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&out)["entries"][0], serde_json::json!(["0", "4", "1", "1", "0"]));
}

#[test]
fn dual_conversion_is_an_involution() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", PENTAGON_X);
    let p = dir.path().join("p.json").display().to_string();
    run(&["convert", "--from", "matrix", "--to", "plucker", &x, "-o", &p]);
    let out = run(&["convert", "--from", "plucker", "--to", "dual", &p, "--round-trip"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&out)["k"], 2);
}
