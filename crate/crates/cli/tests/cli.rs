//! End-to-end tests of the compiled binary: determinism, schema, exit codes,
//! and the exact-vs-brute-force curve cross-check.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stratawalk"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn parse_curve(csv: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,m,start_a,start_b,t,tv"));
    lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn tmix_small_case_prints_zero() {
    let out = run_ok(&["tmix", "--n", "3", "--eps", "0.6", "--chain", "h", "--start", "1"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn exact_tv_matches_oracle_tv() {
    let exact = run_ok(&["exact-tv", "--n", "10", "--chain", "w", "--m", "1", "--t-max", "60"]);
    let oracle = run_ok(&["oracle-tv", "--n", "10", "--start-weight", "1", "--t-max", "60"]);
    let e = parse_curve(&exact);
    let o = parse_curve(&oracle);
    assert_eq!(e.len(), 61);
    for (t, (a, b)) in e.iter().zip(&o).enumerate() {
        assert!((a - b).abs() <= 1e-10, "t={t}: {a} vs {b}");
    }
}

#[test]
fn stochastic_outputs_are_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    for p in [&p1, &p2] {
        run_ok(&[
            "couple", "--n", "16", "--trials", "64", "--seed", "5",
            "--out", p.to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(&p1).unwrap();
    assert_eq!(a, std::fs::read(&p2).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("n,m,run,tau,capped\n"));
    assert_eq!(text.lines().count(), 65);
    assert!(!text.contains('\r'));

    // a different seed changes the outcomes
    let p3 = dir.path().join("c.csv");
    run_ok(&[
        "couple", "--n", "16", "--trials", "64", "--seed", "6",
        "--out", p3.to_str().unwrap(),
    ]);
    assert_ne!(std::fs::read(&p1).unwrap(), std::fs::read(&p3).unwrap());
}

#[test]
fn seed_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("env.csv");
    let p2 = dir.path().join("flag.csv");
    let out = bin()
        .env("STRATAWALK_SEED", "9")
        .args(["couple", "--n", "12", "--trials", "16", "--out", p1.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    run_ok(&["couple", "--n", "12", "--trials", "16", "--seed", "9", "--out", p2.to_str().unwrap()]);
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn usage_errors_exit_with_code_2() {
    for args in [
        &["tmix", "--n", "3", "--eps", "1.5", "--chain", "h"][..],
        &["exact-tv", "--n", "8", "--chain", "h", "--m", "2", "--t-max", "1"][..],
        &["cutoff-profile", "--n-list", "4,8", "--out", "/tmp/x"][..],
        &["tmix", "--n", "3"][..], // missing required --eps (clap)
    ] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_failure_exits_with_code_1() {
    let out = bin()
        .args(["exact-tv", "--n", "6", "--t-max", "1", "--out", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_writes_replayable_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("moves.log");
    let out = run_ok(&[
        "simulate", "--n", "12", "--start-weight", "3", "--t", "200",
        "--seed", "4", "--out", log.to_str().unwrap(),
    ]);
    let final_state: stratawalk::CubeState =
        out.trim().split(',').nth(1).unwrap().parse().unwrap();
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("n=12\n"));
    let parsed = stratawalk::MoveLog::read_from(std::io::BufReader::new(text.as_bytes())).unwrap();
    assert_eq!(parsed.len(), 200);
    let start = stratawalk::CubeState::prefix_ones(12, 3).unwrap();
    assert_eq!(stratawalk::walk::replay(&start, &parsed).unwrap(), final_state);
}

#[test]
fn cutoff_profile_emits_both_schemas() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "cutoff-profile", "--n-list", "16,32",
        "--alpha-min", "-2", "--alpha-max", "2", "--alpha-step", "2",
        "--eps", "0.25", "--out", dir.path().to_str().unwrap(),
    ]);
    let profile = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert!(profile.starts_with("n,alpha,t,tv\n"));
    assert_eq!(profile.lines().count(), 7);
    // tv decreases along the alpha grid for each n
    let tvs: Vec<f64> = profile
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(tvs[0] > tvs[2] && tvs[3] > tvs[5]);
    let tmix_csv = std::fs::read_to_string(dir.path().join("tmix.csv")).unwrap();
    assert!(tmix_csv.starts_with("n,eps,tmix,tmix_over_nlogn\n"));
    assert_eq!(tmix_csv.lines().count(), 3);
}
