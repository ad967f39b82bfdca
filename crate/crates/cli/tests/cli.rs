use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amalgam")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn nf_on_instance_a() {
    let out = run(&["amalgam", "nf", "--amalgam", &fixture("instance_a/amalgam.json"), "L:1 G:3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["pretty"], "(a^2; a)");
    assert_eq!(r["result"]["length"], 1);
    assert_eq!(r["result"]["normal_form"], "H:1 L:1");
    assert_eq!(r["tool"], "amalgam");
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn mul_and_len() {
    let a = fixture("instance_a/amalgam.json");
    let out = run(&["amalgam", "mul", "--amalgam", &a, "L:1 G:1", "G:5 L:3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["normal_form"], "e");
    let out = run(&["amalgam", "len", "--amalgam", &a, "L:1 G:1 L:1"]);
    assert_eq!(report(&out)["result"]["length"], 3);
}

#[test]
fn bad_word_is_a_usage_error() {
    let out = run(&["amalgam", "nf", "--amalgam", &fixture("instance_a/amalgam.json"), "L:1 X:3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("argument `word`"), "{}", stderr(&out));
}

#[test]
fn group_check_and_malnormal() {
    let out = run(&["group", "check", "--group", &fixture("groups/d7.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["order"], 14);

    let out = run(&[
        "group",
        "malnormal",
        "--group",
        &fixture("groups/d7.json"),
        "--subgroup",
        &fixture("groups/d7_reflection.json"),
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&[
        "--recheck",
        "group",
        "malnormal",
        "--group",
        &fixture("groups/z4.json"),
        "--subgroup",
        &fixture("groups/z4_square.json"),
    ]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["result"]["counterexample"]["h"], 2);
    assert_eq!(r["recheck"]["confirmed"], true);
}

#[test]
fn find_separated_exit_codes() {
    let trivial = fixture("groups/trivial.json");
    let out = run(&[
        "fingroup",
        "find-separated",
        "--group",
        &fixture("groups/z51.json"),
        "--subgroup",
        &trivial,
        "--n",
        "18",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["sequence"].as_array().unwrap().len(), 18);
    assert_eq!(r["result"]["reverified"], true);

    let out =
        run(&["fingroup", "find-separated", "--group", &fixture("groups/z5.json"), "--subgroup", &trivial, "--n", "3"]);
    assert_eq!(code(&out), 1);
    assert!(report(&out)["result"]["sequence"].is_null());
    // two H-cosets of size one are enough without the inverse condition
    let out = run(&[
        "fingroup",
        "find-separated",
        "--group",
        &fixture("groups/z5.json"),
        "--subgroup",
        &trivial,
        "--n",
        "3",
        "--plain",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn malformed_inputs_exit_2_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"family":"cyclic"}"#).unwrap();
    let out = run(&["group", "check", "--group", &bad.display().to_string()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bad.json"));

    let missing = dir.path().join("missing.json").display().to_string();
    assert_eq!(code(&run(&["group", "check", "--group", &missing])), 2);

    let am = dir.path().join("am.json");
    std::fs::write(
        &am,
        r#"{"L":{"family":"cyclic","n":4},"G":{"family":"cyclic","n":6},"H":{"family":"cyclic","n":2},"emb_L":[0,2],"emb_G":[0,1]}"#,
    )
    .unwrap();
    let out = run(&["amalgam", "nf", "--amalgam", &am.display().to_string(), "e"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("emb_G"), "{}", stderr(&out));

    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{"n":18,"lambda":"1/7","a_seq":[],"x_seq":[],"a":20,"b":0,"colour":1}"#).unwrap();
    let out = run(&[
        "shelah",
        "build-r",
        "--amalgam",
        &fixture("instance_b/amalgam.json"),
        "--params",
        &params.display().to_string(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("colour"), "{}", stderr(&out));
}

#[test]
fn lambda_must_be_an_exact_fraction_in_range() {
    let (a, r) = (fixture("instance_b/amalgam.json"), fixture("instance_b/relators.jsonl"));
    for bad in ["0.5", "1/0", "7/7", "-1/7", "x"] {
        let out = run(&["sc", "cprime", "--amalgam", &a, "--relators", &r, "--lambda", bad]);
        assert_eq!(code(&out), 2, "{bad}");
    }
}

#[test]
fn build_r_reproduces_the_fixture() {
    let out = run(&[
        "shelah",
        "build-r",
        "--amalgam",
        &fixture("instance_b/amalgam.json"),
        "--params",
        &fixture("instance_b/params.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, std::fs::read(fixture("instance_b/relators.jsonl")).unwrap());
}

#[test]
fn cprime_pass_and_fail() {
    let (a, r) = (fixture("instance_b/amalgam.json"), fixture("instance_b/relators.jsonl"));
    let out = run(&["sc", "cprime", "--amalgam", &a, "--relators", &r, "--lambda", "1/7", "--mode", "exhaustive"]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    assert!(rep["result"]["max_piece_length"].as_u64().unwrap() <= 5);
    assert_eq!(rep["result"]["relators"], 183_600);

    let out = run(&["--recheck", "sc", "cprime", "--amalgam", &a, "--relators", &r, "--lambda", "1/40"]);
    assert_eq!(code(&out), 1);
    let rep = report(&out);
    assert_eq!(rep["result"]["violation"]["kind"], "too_short");
    assert_eq!(rep["recheck"]["confirmed"], true);

    let out = run(&[
        "sc",
        "cprime",
        "--amalgam",
        &a,
        "--relators",
        &r,
        "--lambda",
        "1/7",
        "--mode",
        "sampled",
        "--samples",
        "5000",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["config"]["samples"], 5000);
}

#[test]
fn pieces_bound_failure_is_rechecked() {
    let (a, r) = (fixture("instance_b/amalgam.json"), fixture("instance_b/relators.jsonl"));
    let out = run(&["--recheck", "sc", "pieces", "--amalgam", &a, "--relators", &r, "--bound", "2"]);
    assert_eq!(code(&out), 1);
    let rep = report(&out);
    assert_eq!(rep["result"]["max_piece_length"], 3);
    assert_eq!(rep["recheck"]["confirmed"], true);
}

#[test]
fn hull_dump_contains_the_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let dump: PathBuf = dir.path().join("hull.jsonl");
    let a = fixture("instance_b_small/amalgam.json");
    let out = run(&[
        "sc",
        "hull",
        "--amalgam",
        &a,
        "--relators",
        &fixture("instance_b_small/relators.jsonl"),
        "--dump",
        &dump.display().to_string(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["size"], 85_248);
    let text = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(text.lines().count(), 85_248);
    let lines: std::collections::HashSet<&str> = text.lines().collect();
    let seeds = std::fs::read_to_string(fixture("instance_b_small/relators.jsonl")).unwrap();
    assert!(seeds.lines().all(|l| lines.contains(l)));
}

#[test]
fn dehn_decides_and_replays() {
    let (a, r) = (fixture("instance_b/amalgam.json"), fixture("instance_b/relators.jsonl"));
    let rel = std::fs::read_to_string(&r).unwrap();
    let first: String = serde_json::from_str(rel.lines().next().unwrap()).unwrap();
    let conj = format!("G:7 {first} G:44");
    let out = run(&["--recheck", "sc", "dehn", "--amalgam", &a, "--relators", &r, "--lambda", "1/7", &conj]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    assert_eq!(rep["result"]["member"], true);
    assert_eq!(rep["recheck"]["confirmed"], true);

    let out = run(&["--recheck", "sc", "dehn", "--amalgam", &a, "--relators", &r, "--lambda", "1/7", "L:1 G:2 L:3"]);
    assert_eq!(report(&out)["result"]["member"], false);

    // the solver refuses λ above 1/6
    let out = run(&["sc", "dehn", "--amalgam", &a, "--relators", &r, "--lambda", "1/5", "e"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn shelah_verifiers() {
    let (a, p) = (fixture("instance_b/amalgam.json"), fixture("instance_b/params.json"));
    let out = run(&["shelah", "verify-cprime", "--amalgam", &a, "--params", &p]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["max_piece_length"], 3);

    let out =
        run(&["shelah", "verify-amalgamation", "--amalgam", &a, "--params", &p, "--samples", "20", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    assert_eq!(rep["config"]["budgets"]["samples"], 20);
    assert_eq!(rep["result"]["conclusions"].as_array().unwrap().len(), 6);

    let out = run(&["shelah", "verify-amalgamation", "--amalgam", &a, "--params", &p, "--single"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["kind"], "amalgamation2");

    let out = run(&["shelah", "verify-malnormal", "--amalgam", &a, "--params", &p]);
    assert_eq!(code(&out), 0);

    let out = run(&["shelah", "verify-malnormal", "--amalgam", &a, "--params", &p, "--lambda", "1/6"]);
    assert_eq!(code(&out), 1);
    let rep = report(&out);
    assert_eq!(rep["result"]["hypothesis_failed"]["witness"], "(1−6·1/6)·36 = 0 ≤ 4");
}

#[test]
fn output_file_matches_stdout_and_jobs_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = [
        "sc",
        "pieces",
        "--amalgam",
        &fixture("instance_b/amalgam.json"),
        "--relators",
        &fixture("instance_b/relators.jsonl"),
    ];
    let stdout = run(&args).stdout;
    let mut with_out = vec!["-o", path.to_str().unwrap()];
    with_out.extend(args);
    let out = run(&with_out);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);

    let env_run = Command::new(env!("CARGO_BIN_EXE_amalgam")).args(args).env("AMALGAM_JOBS", "2").output().unwrap();
    assert_eq!(env_run.stdout, stdout);
}
