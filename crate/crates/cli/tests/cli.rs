use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn spcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcg"))
        .args(args)
        .env("SPCG_WORKERS", "2")
        .output()
        .expect("spawn spcg")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spcg-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_then_solve() {
    let text = stdout(&spcg(&["generate", "fujisan", "--algorithm", "dominoes", "--seed", "5"]));
    assert!(text.starts_with("fujisan\n"));
    let path = scratch("board.txt");
    fs::write(&path, &text).unwrap();
    let json: serde_json::Value = serde_json::from_str(&stdout(&spcg(&["solve", path.to_str().unwrap()]))).unwrap();
    assert!(json["solvable"].is_boolean());
    if json["solvable"] == true {
        let len = json["min_length"].as_u64().unwrap();
        assert!(len >= 8);
        assert_eq!(json["path"].as_array().unwrap().len() as u64, len);
    }
}

#[test]
fn generate_is_deterministic_and_counts() {
    let args = ["generate", "pretzel", "-a", "banded-suits", "-s", "11", "-n", "3", "-p", "4,4"];
    let a = stdout(&spcg(&args));
    assert_eq!(a, stdout(&spcg(&args)));
    assert_eq!(a.matches("pretzel 4 4").count(), 3);
}

#[test]
fn count_reports_exact_values() {
    let text = stdout(&spcg(&["count", "pretzel", "--algorithm", "shuffled"]));
    assert!(text.contains("20922789888000"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&spcg(&["count", "boxoff", "-a", "shuffled", "-p", "2,3,2", "--json"]))).unwrap();
    assert_eq!(json["count"]["exact"], "20");
    assert_eq!(json["count"]["oom"], 1);
}

#[test]
fn experiment_and_analyze() {
    let config = scratch("config.json");
    let report = scratch("report.json");
    fs::write(
        &config,
        r#"{"game":"boxoff","algorithms":["shuffled","l-tiles"],"challenges":50,"trial_count":5,
            "master_seed":3,"metrics":{"pair_equality":true}}"#,
    )
    .unwrap();
    let summary = stdout(&spcg(&["experiment", "-c", config.to_str().unwrap(), "-o", report.to_str().unwrap()]));
    assert!(summary.contains("l-tiles"));
    let first = fs::read(&report).unwrap();
    stdout(&spcg(&["experiment", "-c", config.to_str().unwrap(), "-o", report.to_str().unwrap()]));
    assert_eq!(first, fs::read(&report).unwrap());
    assert!(stdout(&spcg(&["analyze", report.to_str().unwrap()])).contains("solvability shuffled vs l-tiles"));

    let csv = stdout(&spcg(&["experiment", "-c", config.to_str().unwrap(), "-o", "-", "-f", "csv"]));
    assert_eq!(csv.lines().count(), 1 + 100);
    assert!(csv.starts_with("game,algorithm,params,index,seed,solvable"));
}

#[test]
fn errors_exit_nonzero() {
    assert!(!spcg(&["solve", "/nonexistent/challenge.txt"]).status.success());
    assert!(!spcg(&["generate", "boxoff", "-a", "dominoes"]).status.success());
    let bad = scratch("bad.json");
    fs::write(&bad, r#"{"game":"boxoff","algorithms":["shuffled"],"challenges":7}"#).unwrap();
    assert!(!spcg(&["experiment", "-c", bad.to_str().unwrap()]).status.success());
    let garbage = scratch("garbage.txt");
    fs::write(&garbage, "boxoff 2 2 2\nAX\nAB\n").unwrap();
    assert!(!spcg(&["solve", garbage.to_str().unwrap()]).status.success());
}
