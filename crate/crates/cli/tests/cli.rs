use std::path::Path;
use std::process::{Command, Output};

fn dwpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwpp"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn compare_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dwpp(&["compare", "--out", dir.path().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("Travel time [s] (Mean ± SD)"));
    for file in ["metrics.csv", "summary.csv", "summary.txt"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dwpp(&[
        "sweep",
        "--out",
        dir.path().to_str().unwrap(),
        "--values",
        "0.3,0.6",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn simulate_reports_metrics_and_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let out = dwpp(&[
        "simulate",
        "--controller",
        "dwpp",
        "--path",
        "B",
        "--lookahead",
        "0.5",
        "--out",
        traj.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("violations [%]   0.00"), "{text}");
    assert!(text.contains("reached goal     true"));
    assert!(std::fs::read_to_string(&traj)
        .unwrap()
        .starts_with("t,x,y,theta"));
}

#[test]
fn simulate_from_waypoint_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("line.csv");
    let mut csv = String::from("x,y\n");
    for i in 0..=40 {
        csv.push_str(&format!("{},0\n", i as f64 * 0.05));
    }
    std::fs::write(&file, csv).unwrap();
    let out = dwpp(&[
        "simulate",
        "--controller",
        "PP",
        "--waypoints",
        file.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn check_optimal_prints_both_selections() {
    let out = dwpp(&[
        "check-optimal",
        "--v-lo",
        "0.2",
        "--v-hi",
        "0.5",
        "--omega-lo",
        "-0.5",
        "--omega-hi",
        "1.0",
        "--kappa",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("closed form  v = 0.500000  omega = 1.000000  distance = 0.000e0"),
        "{text}"
    );
    assert!(text.contains("grid  201"));
}

#[test]
fn errors_exit_nonzero() {
    let missing = Path::new("/nonexistent/config.toml");
    let out = dwpp(&["compare", "--config", missing.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("config.toml"));

    let out = dwpp(&["simulate", "--path", "Z"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown path `Z`"));

    let out = dwpp(&[
        "check-optimal",
        "--v-lo",
        "1",
        "--v-hi",
        "0",
        "--omega-lo",
        "0",
        "--omega-hi",
        "1",
        "--kappa",
        "1",
    ]);
    assert!(!out.status.success());

    let out = dwpp(&["simulate", "--controller", "XPP"]);
    assert!(!out.status.success());
}
