use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covert-irs"))
}

#[test]
fn preset_run_writes_csv_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let status = bin()
        .args(["run", "--preset", "fig3", "--trials", "3", "--values", "20,400", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("param,solver,mean_rate,stderr,mean_willie_power,feasible_frac,trials")
    );
    // Two values times four solvers.
    assert_eq!(lines.count(), 8);
    assert!(dir.path().join("fig3.gp").exists());
}

#[test]
fn runs_are_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = bin()
            .args(["run", "--preset", "fig4", "--trials", "4", "--seed", "11", "--values", "40", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn sweep_reads_a_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "M = 2\nN = 4\nkappa = 0.05\n").unwrap();
    let out = dir.path().join("n.csv");
    let status = bin()
        .args(["sweep", "--param", "N", "--values", "2:4:2", "--solvers", "multi-optimal,multi-random"])
        .args(["--trials", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 5);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let unknown = bin()
        .args(["run", "--preset", "fig99", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(2));

    let bad_solver = bin()
        .args(["run", "--preset", "fig3", "--solvers", "nope", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(bad_solver.status.code(), Some(2));

    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "kappa = lots\n").unwrap();
    let bad_file = bin()
        .args(["sweep", "--param", "N", "--values", "4", "--solvers", "multi-optimal", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(bad_file.status.code(), Some(2));

    let bad_kappa = bin().args(["dep", "--kappa", "1.5"]).output().unwrap();
    assert_eq!(bad_kappa.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn dep_meets_the_covert_target_at_the_partial_csi_power() {
    let output = bin().args(["dep", "--kappa", "0.01", "--mean-z", "1e-10"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).unwrap();
    let field = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    let xi = field("xi");
    let p_star = field("P*");
    assert!(xi >= 0.99 - 1e-9, "xi = {xi}");
    assert!(p_star > 0.0 && p_star <= 0.01 + 1e-15);
}
