use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_locality-lab"));
    c.env_remove("LOCALITY_LAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &path]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn header(text: &str) -> (usize, usize) {
    let line = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let f: Vec<usize> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
    (f[0], f[1])
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn generate_tree_and_ring() {
    let o = run(&["generate", "--type", "tree", "--n", "1000", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(header(&text), (1000, 999));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1000);

    let o = run(&["generate", "--type", "ring", "--n", "5"]);
    let text = stdout(&o);
    assert_eq!(header(&text), (5, 5));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn generate_regular_bipartite_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = run(&[
        "generate", "--type", "regular-bipartite", "--delta", "3", "--side", "20", "--min-girth", "6", "--seed", "4",
        "-o", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(&o);
    assert_eq!(s["n"], 40);
    assert_eq!(s["m"], 60);
    assert_eq!(s["delta"], 3);
    assert!(s["girth"].as_u64().unwrap() >= 6);
}

#[test]
fn generation_failure_exits_3() {
    let o = run(&["generate", "--type", "regular-bipartite", "--delta", "5", "--side", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn run_delta_55_reports_phases() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "t.txt", &["--type", "tree", "--n", "2000", "--max-degree", "60", "--seed", "9"]);
    let labels = dir.path().join("labels.txt");
    let o = run(&["run", "--alg", "delta-55", "--graph", &g, "--seed", "3", "--labels", labels.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["verified"], true);
    let report = &r["result"]["report"];
    for k in ["rounds_phase1", "rounds_phase2", "rounds_phase3"] {
        assert!(report[k].is_u64(), "{k}");
    }
    assert!(labels.exists());
}

#[test]
fn be_tree_rejects_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "r.txt", &["--type", "ring", "--n", "10"]);
    let o = run(&["run", "--alg", "be-tree", "--graph", &g]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_large_paper_preset_exits_0_or_5() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "t.txt", &["--type", "tree", "--n", "3000", "--max-degree", "20", "--seed", "2"]);
    let o = run(&["run", "--alg", "delta-large", "--graph", &g, "--preset", "paper", "--seed", "1"]);
    let code = o.status.code().unwrap();
    assert!(code == 0 || code == 5, "exit {code}");
    assert_eq!(json(&o)["failed"], code == 5);
}

#[test]
fn sweep_over_n_has_one_row_per_trial() {
    let o = run(&["sweep", "--alg", "delta-55", "--axis", "n", "--values", "1000,10000,100000", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r.split(',').count() == 11));
    assert_eq!(text.lines().filter(|l| l.starts_with("# summary")).count(), 3);
}

#[test]
fn sweep_q_on_fixed_tree_shrinks_bands() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "t.txt", &["--type", "tree", "--n", "5000", "--max-degree", "6", "--seed", "5"]);
    let o = run(&["sweep", "--alg", "be-tree", "--axis", "q", "--values", "3,4,5,6,7,8", "--trials", "3", "--graph", &g]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut means = Vec::new();
    for q in 3..=8u64 {
        let b: Vec<f64> = data_rows(&text)
            .iter()
            .map(|r| r.split(',').collect::<Vec<_>>())
            .filter(|c| c[9] == q.to_string())
            .map(|c| c[10].parse().unwrap())
            .collect();
        means.push(b.iter().sum::<f64>() / b.len() as f64);
    }
    assert!(means.windows(2).all(|w| w[1] <= w[0]), "{means:?}");
}

#[test]
fn sweep_with_no_values_prints_header_only() {
    let o = run(&["sweep", "--alg", "delta-55", "--axis", "n", "--values", ""]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, vec![locality_lab_cli::SWEEP_HEADER]);
}

#[test]
fn oracle_claim4() {
    let o = run(&["oracle", "claim4", "--delta", "55"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(data_rows(&text).len(), 52);
    assert!(text.contains("holds=true"));
}

#[test]
fn oracle_distance_sets_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "p.txt", &["--type", "path", "--n", "5"]);
    let o = run(&["oracle", "distance-sets", "--graph", &g, "--k", "2", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with(",2,2,3,320,true"));

    let big = generate(dir.path(), "b.txt", &["--type", "path", "--n", "41"]);
    let o = run(&["oracle", "distance-sets", "--graph", &big, "--k", "2", "--t", "2"]);
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn oracle_derand_demo() {
    let o = run(&["oracle", "derand-demo", "--n", "2", "--id-bits", "2", "--r-bits", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("id,hex_bits") || text.lines().any(|l| l == "id,hex_bits"));
    assert!(!text.contains("# result: none"));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let with_env = bin().env("LOCALITY_LAB_SEED", "77").args(["generate", "--type", "tree", "--n", "50"]).output().unwrap();
    let with_flag = run(&["generate", "--type", "tree", "--n", "50", "--seed", "77"]);
    assert_eq!(with_env.stdout, with_flag.stdout);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"type":"tree","n":50,"seed":1}"#).unwrap();
    let o = run(&["generate", "--config", cfg.to_str().unwrap(), "--n", "60"]);
    assert_eq!(header(&stdout(&o)), (60, 59));
}

#[test]
fn config_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "t.txt", &["--type", "tree", "--n", "500", "--seed", "8"]);
    let first = run(&["run", "--alg", "delta-55", "--graph", &g, "--seed", "11"]);
    let cfg = dir.path().join("out.json");
    std::fs::write(&cfg, &first.stdout).unwrap();
    let again = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["sweep", "--alg", "linial", "--axis", "n", "--values", "100,200", "--trials", "3"];
    let one = bin().args(["--jobs", "1"]).args(args).output().unwrap();
    let two = bin().args(["--jobs", "2"]).args(args).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["run", "--alg", "nope", "--graph", "x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
