//! End-to-end checks of the command-line surface: flags, exit codes, and the
//! CSV/summary formats, including the decimal round-trip guarantee.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genedrift"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn genedrift");
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin()
        .args(args)
        .output()
        .expect("spawn genedrift")
        .status
        .code()
        .expect("exit code")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("genedrift-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_summary(path: &Path) -> std::collections::HashMap<String, String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn solve_with_zero_end_time_reports_the_initial_state() {
    let dir = temp_dir("t0");
    run_ok(&[
        "solve",
        "--cells",
        "200",
        "--tau",
        "0.001",
        "--t-end",
        "0",
        "--p",
        "0.4",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);

    let snapshot = dir.join("snapshot_000_t0.csv");
    let text = std::fs::read_to_string(&snapshot).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));

    let grid = genedrift::build_grid::<f64>(200).unwrap();
    let ic = genedrift::InitialCondition::narrow(0.4).unwrap();
    let expected = genedrift::gaussian_initial(&grid, &ic).unwrap();
    for (i, line) in lines.enumerate() {
        let (x, f) = line.split_once(',').unwrap();
        // Shortest round-trip formatting: parsing must restore the exact bits.
        assert_eq!(x.parse::<f64>().unwrap(), grid.nodes()[i]);
        assert_eq!(f.parse::<f64>().unwrap(), expected.f[i]);
    }

    let summary = read_summary(&dir.join("summary.txt"));
    assert_eq!(summary["steps"], "0");
    let p0: f64 = summary["P0"].parse().unwrap();
    assert!((p0 - 1.0).abs() < 1e-6);
}

#[test]
fn solve_accepts_the_reserved_seed_flag() {
    let dir = temp_dir("seed");
    run_ok(&[
        "solve",
        "--cells",
        "20",
        "--tau",
        "0.01",
        "--t-end",
        "0.1",
        "--seed-unused",
        "42",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
}

#[test]
fn solve_diagnostics_track_conservation() {
    let dir = temp_dir("diag");
    run_ok(&[
        "solve",
        "--scheme",
        "central-whole",
        "--cells",
        "100",
        "--tau",
        "0.01",
        "--t-end",
        "1",
        "--p",
        "0.3",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,P,E,interior_mass,v_norm,f0,fM"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    let p0 = rows[0][1];
    let e0 = rows[0][2];
    for row in &rows {
        assert!((row[1] - p0).abs() <= 1e-12);
        assert!((row[2] - e0).abs() <= 1e-12);
    }
}

#[test]
fn solve_rejects_bad_flags_with_usage_exit() {
    let dir = temp_dir("usage");
    let d = dir.to_str().unwrap();
    assert_eq!(exit_code(&["solve", "--p", "1.5", "--out-dir", d]), 1);
    assert_eq!(exit_code(&["solve", "--cells", "2", "--out-dir", d]), 1);
    assert_eq!(exit_code(&["solve", "--tau", "0", "--out-dir", d]), 1);
    assert_eq!(
        exit_code(&["solve", "--scheme", "laxwendroff", "--out-dir", d]),
        1
    );
    assert_eq!(
        exit_code(&[
            "solve",
            "--t-end",
            "1",
            "--snapshots",
            "2.0",
            "--out-dir",
            d
        ]),
        1
    );
}

#[test]
fn solve_reports_unwritable_output_as_io_failure() {
    let dir = temp_dir("io");
    let blocker = dir.join("blocker");
    std::fs::write(&blocker, "not a directory").unwrap();
    let out_dir = blocker.join("sub");
    assert_eq!(
        exit_code(&[
            "solve",
            "--cells",
            "10",
            "--tau",
            "0.1",
            "--t-end",
            "0",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]),
        3
    );
}

#[test]
fn compare_defaults_are_tight_and_deterministic() {
    let out = run_ok(&["compare"]);
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("identity,max_abs_deviation"));
    for line in lines {
        let (_, dev) = line.split_once(',').unwrap();
        let dev: f64 = dev.parse().unwrap();
        assert!(dev <= 1e-13, "deviation {dev}");
    }

    let again = run_ok(&["compare"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn compare_small_grid_meets_the_same_bound() {
    let out = run_ok(&["compare", "--cells", "5"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines().skip(1) {
        let dev: f64 = line.split_once(',').unwrap().1.parse().unwrap();
        assert!(dev <= 1e-13);
    }
}

#[test]
fn compare_rejects_zero_samples() {
    assert_eq!(exit_code(&["compare", "--samples", "0"]), 1);
}

#[test]
fn viscosity_unit_test_function_pairs_to_one() {
    let dir = temp_dir("visc");
    run_ok(&[
        "viscosity",
        "--epsilons",
        "0.5,0.01,1e-6",
        "--profile-points",
        "64",
        "--test-function",
        "one",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let pairings = std::fs::read_to_string(dir.join("pairings.csv")).unwrap();
    let mut lines = pairings.lines();
    assert_eq!(lines.next(), Some("epsilon,pairing"));
    for line in lines {
        let (_, v) = line.split_once(',').unwrap();
        let v: f64 = v.parse().unwrap();
        assert!((v - 1.0).abs() <= 1e-8, "pairing {v}");
    }

    // U-shaped, symmetric, deeper well for smaller viscosity.
    let read_profile = |eps: &str| -> Vec<(f64, f64)> {
        let text = std::fs::read_to_string(dir.join(format!("profile_eps{eps}.csv"))).unwrap();
        text.lines()
            .skip(1)
            .map(|l| {
                let (x, f) = l.split_once(',').unwrap();
                (x.parse().unwrap(), f.parse().unwrap())
            })
            .collect()
    };
    let big = read_profile("0.5");
    let small = read_profile("0.01");
    for profile in [&big, &small] {
        let n = profile.len();
        assert_eq!(n, 65);
        let mid = profile[n / 2].1;
        assert!(profile[0].1 > mid && profile[n - 1].1 > mid);
        for i in 0..n {
            let (a, b) = (profile[i].1, profile[n - 1 - i].1);
            assert!((a - b).abs() <= 1e-12 * a.max(b));
        }
    }
    assert!(
        small[32].1 < big[32].1,
        "smaller eps should dig a deeper well"
    );
    assert!(
        small[0].1 > big[0].1,
        "smaller eps should spike higher at the ends"
    );
}

#[test]
fn viscosity_rejects_unknown_test_function() {
    let dir = temp_dir("visc-bad");
    assert_eq!(
        exit_code(&[
            "viscosity",
            "--test-function",
            "gauss",
            "--out-dir",
            dir.to_str().unwrap(),
        ]),
        1
    );
}

#[test]
fn oracle_is_byte_deterministic_and_tracks_p() {
    let dir_a = temp_dir("oracle-a");
    let dir_b = temp_dir("oracle-b");
    let args = |d: &Path| {
        vec![
            "oracle".to_string(),
            "--pop-size".into(),
            "50".into(),
            "--p".into(),
            "0.4".into(),
            "--trials".into(),
            "5000".into(),
            "--seed".into(),
            "11".into(),
            "--max-generations".into(),
            "100000".into(),
            "--out-dir".into(),
            d.to_str().unwrap().into(),
        ]
    };
    let out_a = bin().args(args(&dir_a)).output().unwrap();
    let out_b = bin().args(args(&dir_b)).output().unwrap();
    assert!(out_a.status.success() && out_b.status.success());

    let bytes_a = std::fs::read(dir_a.join("oracle_summary.txt")).unwrap();
    let bytes_b = std::fs::read(dir_b.join("oracle_summary.txt")).unwrap();
    assert_eq!(bytes_a, bytes_b);
    assert_eq!(out_a.stdout, out_b.stdout);

    let summary = read_summary(&dir_a.join("oracle_summary.txt"));
    let fixed: f64 = summary["fixed_fraction"].parse().unwrap();
    assert!((fixed - 0.4).abs() < 0.05, "fixed fraction {fixed}");
}

#[test]
fn oracle_rejects_degenerate_starts() {
    assert_eq!(
        exit_code(&["oracle", "--pop-size", "100", "--p", "0.0001"]),
        1
    );
    assert_eq!(
        exit_code(&["oracle", "--pop-size", "100", "--p", "0.9999"]),
        1
    );
}
