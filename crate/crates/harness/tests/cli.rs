use std::process::{Command, Output};

use qsba_harness::{Report, COLUMNS};

fn qsba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsba"))
        .args(args)
        .env("QSBA_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn passing_attack_exits_zero_with_csv() {
    let o = qsba(&["attack", "usd", "--l", "10", "--trials", "2000", "--seed", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(COLUMNS.join(",").as_str()));
    assert!(lines.all(|l| l.starts_with("multicopy_usd.") && l.ends_with(",true")));
}

#[test]
fn failing_row_exits_one() {
    // Three sessions are far too few for the information estimate to settle.
    let o = qsba(&["attack", "cnot", "--trials", "3", "--seed", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains(",false"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&qsba(&["attack", "no_such_attack"])), 2);
    assert_eq!(code(&qsba(&["attack", "cnot", "--mode", "sideways"])), 2);
    assert_eq!(code(&qsba(&["protocol", "bb84"])), 2);
    assert_eq!(code(&qsba(&["bounds", "--trials", "0"])), 2);
    assert_eq!(code(&qsba(&["bounds", "--format", "xml"])), 2);
    assert_eq!(code(&qsba(&["frobnicate"])), 2);
    assert_eq!(code(&qsba(&["bounds", "--config", "/nonexistent/c.json"])), 2);
    // Odd copy counts are rejected by the basis-split attack itself.
    assert_eq!(code(&qsba(&["attack", "basis_split", "--l", "3", "--trials", "10"])), 2);
}

#[test]
fn json_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let o = qsba(&["bounds", "--l", "10", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.command, "bounds");
    let exact = r.rows.iter().find(|r| r.metric == "bounds.l10.exact").unwrap();
    assert!((exact.estimate - 0.991_095_005_288_533).abs() < 1e-12);
    assert!(r.all_pass());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"kind":"protocol","target":"sqsba","trials":20,"seed":1,"format":"json"}"#).unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["protocol", "--config", cfg.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = qsba(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_slice::<Report>(&o.stdout).unwrap()
    };
    let a = run(&[]);
    assert_eq!((a.command.as_str(), a.seed), ("protocol sqsba", 1));
    let b = run(&["--seed", "2"]);
    assert_eq!(b.seed, 2);
    // A file written for another command is refused.
    assert_eq!(code(&qsba(&["bounds", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["attack", "swap", "--trials", "50", "--seed", "11"];
    let (a, b) = (qsba(&args), qsba(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, qsba(&["attack", "swap", "--trials", "50", "--seed", "12"]).stdout);
}
