use std::path::PathBuf;
use std::process::{Command, Output};

use kinetic1d::harness::{builtin, CaseConfig, BUILTIN_CASES};

fn kinetic1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kinetic1d")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_match_builtins() {
    for name in BUILTIN_CASES {
        let path = configs_dir().join(format!("{name}.toml"));
        let from_file = CaseConfig::load(&path, &[]).unwrap();
        assert_eq!(from_file, builtin(name).unwrap(), "{name}");
    }
}

#[test]
fn stability_table() {
    let o = kinetic1d(&["stability", "--table1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "order,space,M=1,M=2,M=3,M=4,M=5,M=6");
    assert_eq!(lines.len(), 7);
    assert!(lines.contains(&"2,dx1,1.00,1.00,1.00,0.78,0.71,0.85"));
    assert!(lines.contains(&"4,dx4,0.00,0.00,1.26,2.06,0.04,0.62"));
}

#[test]
fn single_scheme_stability() {
    let o = kinetic1d(&["stability", "--order", "2", "--space", "dx4", "--iterations", "2"]);
    assert!(o.status.success());
    // the table's zero entries: unstable for any practical step
    assert!(stdout(&o).trim().parse::<f64>().unwrap() < 0.01);
}

#[test]
fn converge_prints_report() {
    let o = kinetic1d(&["converge", "diffusion", "--meshes", "20,40", "--t-end", "0.01", "--a", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,L2,r");
    assert_eq!(lines.len(), 3);
    let row: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(row[0], "40");
    let prev: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    let (l2, r): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
    assert!(((prev / l2).log2() - r).abs() < 1e-6);
}

#[test]
fn knudsen_prints_sweep() {
    let o = kinetic1d(&["knudsen", "diffusion", "--speeds", "1,2", "--n", "50", "--t-end", "0.01", "--format", "text"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().split_whitespace().eq(["a", "epsilon", "L2", "r"]));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn run_writes_profile_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let (out, snaps) = (dir.path().join("profile.csv"), dir.path().join("snaps.csv"));
    let o = kinetic1d(&[
        "run",
        "burgers-sine",
        "--set",
        "grid.n=30",
        "--n",
        "20",
        "--t-end",
        "0.05",
        "--set",
        "run.snapshots=[0.01, 0.02]",
        "-o",
        out.to_str().unwrap(),
        "--snapshots",
        snaps.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let profile = std::fs::read_to_string(&out).unwrap();
    // named flags win over --set
    assert_eq!(profile.lines().count(), 21);
    assert_eq!(profile.lines().next().unwrap(), "x,u0,exact_u0");
    let s = std::fs::read_to_string(&snaps).unwrap();
    // requested times plus the final state
    let times: Vec<&str> = s.lines().skip(1).step_by(20).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(times, ["0.010000000", "0.020000000", "0.050000000"]);
    assert_eq!(s.lines().count(), 1 + 3 * 20);
    assert!(String::from_utf8_lossy(&o.stderr).contains("L2 = "));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case.toml");
    std::fs::write(&path, builtin("advection-diffusion").unwrap().to_toml().unwrap()).unwrap();
    let o = kinetic1d(&["run", path.to_str().unwrap(), "--n", "16", "--t-end", "0.01", "--ratio", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 17);
}

#[test]
fn configuration_errors_exit_with_2() {
    assert_eq!(kinetic1d(&["run", "no-such-case"]).status.code(), Some(2));
    assert_eq!(kinetic1d(&["converge", "diffusion", "--meshes", "20,30"]).status.code(), Some(2));
    assert_eq!(kinetic1d(&["run", "diffusion", "--set", "scheme.order=3"]).status.code(), Some(2));
    assert_eq!(kinetic1d(&["run", "diffusion", "--format", "xml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[problem]\nkind = \"diffusion\"\nalpha = 0.01\nunknown = 1\n").unwrap();
    assert_eq!(kinetic1d(&["run", path.to_str().unwrap()]).status.code(), Some(2));
    // clap usage errors share the code
    assert_eq!(kinetic1d(&["converge", "diffusion"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_3() {
    // |u| reaches 1.5 but the kinetic speed is pinned at 0.5
    let o = kinetic1d(&["run", "burgers-sine", "--a", "0.5", "--n", "20"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subcharacteristic"));
}

#[test]
fn lists_cases() {
    let o = kinetic1d(&["cases"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), BUILTIN_CASES.to_vec());
}
