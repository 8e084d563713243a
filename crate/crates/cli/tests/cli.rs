use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn codense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codense"))
        .args(args)
        .env_remove("CODENSE_BUDGET")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn reports(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON report per line"))
        .collect()
}

#[test]
fn three_point_size_four() {
    let out = codense(&["--json", "check", "three-point", "--size", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["status"]["kind"], "pass");
    assert_eq!(r[0]["metrics"]["carrier_size"], 4);
}

#[test]
fn power_of_two_corpus_with_seed() {
    let out = codense(&["--json", "check", "power-of-two", "--count", "500", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(reports(&out)[0]["seed"], 7);
}

#[test]
fn limit_of_swap_cycle_is_empty() {
    let out = codense(&["--json", "limit", &fixture("swap-cycle.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(reports(&out)[0]["metrics"]["carrier_size"], 0);
}

#[test]
fn linear_fixture_limit() {
    let out = codense(&["--json", "limit", &fixture("graph-q2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = &reports(&out)[0];
    assert_eq!(r["metrics"]["category"], "finvec");
    assert_eq!(r["metrics"]["carrier_size"], 2);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(codense(&["check", "no-such-check"]).status.code(), Some(2));
    assert_eq!(codense(&["limit", "/nonexistent/file.json"]).status.code(), Some(2));

    let path = std::env::temp_dir().join(format!("codense-dangling-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"category":"finset","nodes":[{"id":"a","size":1}],"edges":[{"id":"loose","src":"a","dst":"b","table":[0]}]}"#,
    )
    .unwrap();
    let out = codense(&["limit", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("loose"));
}

#[test]
fn failures_exit_one_and_replay() {
    // probes of dimension <= 1 do not pin down a plane over F_2
    let args = ["--json", "codensity", "vec", "--q", "2", "--dim", "2", "--probe-max", "1"];
    let out = codense(&args);
    assert_eq!(out.status.code(), Some(1));
    let r = &reports(&out)[0];
    assert_eq!(r["status"]["kind"], "fail");
    let inst = &r["status"]["counterexample"]["instance"];
    let (q, dim, m) = (inst["q"].to_string(), inst["dim"].to_string(), inst["probe_max"].to_string());
    let again = codense(&["--json", "codensity", "vec", "--q", &q, "--dim", &dim, "--probe-max", &m]);
    assert_eq!(again.status.code(), Some(1));
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn budget_skips_unless_strict() {
    let run = |strict: bool| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_codense"));
        if strict {
            cmd.arg("--strict");
        }
        cmd.args(["--json", "check", "three-point", "--size", "6"])
            .env("CODENSE_BUDGET", "10")
            .output()
            .unwrap()
    };
    let lenient = run(false);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(reports(&lenient)[0]["status"]["kind"], "skipped");
    assert_eq!(run(true).status.code(), Some(2));
}

#[test]
fn json_output_is_stable() {
    let args = ["--json", "check", "dd-monad", "--q", "3", "--max-dim", "3", "--seed", "5"];
    let a = codense(&args);
    let b = codense(&args);
    assert_eq!(a.stdout, b.stdout);
    let line = String::from_utf8_lossy(&a.stdout);
    let keys = ["\"check_id\"", "\"anchor\"", "\"status\"", "\"metrics\""];
    let pos: Vec<usize> = keys.iter().map(|k| line.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn codensity_set_small() {
    let out = codense(&["--json", "codensity", "set", "--size", "2", "--probe-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<String> = reports(&out).iter().map(|r| r["check_id"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["codensity-value", "codensity-monad"]);
}

#[test]
fn whole_suite_passes() {
    let out = codense(&["check", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("[FAIL]"));
}
