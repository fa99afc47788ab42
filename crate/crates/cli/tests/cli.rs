use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conformal-flow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn csv_rows(text: &str) -> Vec<Vec<&str>> {
    text.lines().skip(1).map(|l| l.split(',').collect()).collect()
}

fn assert_manifest_complete(out: &Path) {
    let manifest = read(out, "manifest.txt");
    let files = manifest.split("[files]\n").nth(1).expect("files section");
    let mut listed = 0;
    for line in files.lines().filter(|l| !l.is_empty()) {
        let name = line.split(' ').next().unwrap();
        let meta = fs::metadata(out.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(meta.len() > 0, "{name} is empty");
        listed += 1;
    }
    assert!(listed > 0);
}

#[test]
fn transform_default_sweep_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["transform", "--out", "t"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = read(&tmp.path().join("t"), "transform_report.csv");
    assert!(report.starts_with("function,alpha,identity,max_error\n"));
    let rows = csv_rows(&report);
    assert!(!rows.is_empty());
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() <= 1e-8, "{r:?}");
    }
    let alphas: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(alphas.len(), 3);
    assert_manifest_complete(&tmp.path().join("t"));
}

#[test]
fn transform_at_alpha_one_is_exact_except_quadrature() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["transform", "--alpha", "1", "--out", "t"]);
    assert_eq!(code(&o), 0);
    for r in csv_rows(&read(&tmp.path().join("t"), "transform_report.csv")) {
        let err: f64 = r[3].parse().unwrap();
        if r[2] == "integral" {
            assert!(err <= 1e-13, "{r:?}");
        } else {
            assert_eq!(err, 0.0, "{r:?}");
        }
    }
}

#[test]
fn invalid_alpha_exits_two_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["transform", "--alpha", "1.5", "--out", "t"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("alpha"));
    assert!(!tmp.path().join("t").exists());
}

#[test]
fn orbit_hits_every_target() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["orbit", "--out", "o"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = tmp.path().join("o");
    let meta = read(&out, "orbit_metadata.txt");
    let hits: Vec<f64> = meta
        .lines()
        .filter(|l| l.starts_with("measured_distance_"))
        .map(|l| l.split('=').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(hits.len(), 3);
    assert!(hits.iter().all(|&d| d <= 0.1));
    assert!(meta.contains("tail_bound="));
    assert!(read(&out, "orbit.csv").starts_with("t,target_index,distance\n"));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("3 of 3 targets hit"));
    assert_manifest_complete(&out);
}

#[test]
fn orbit_refusals() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["orbit", "--kappa", "0", "--out", "a"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("criterion violation"));
    assert!(!tmp.path().join("a").exists());

    let o = run(tmp.path(), &["orbit", "--x-max", "100", "--out", "b"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("x_max must be at least"));
    assert!(!tmp.path().join("b").exists());
}

#[test]
fn orbit_with_no_targets_writes_an_empty_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["orbit", "--targets", "0", "--n", "2000", "--out", "o"]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(&tmp.path().join("o"), "orbit.csv"), "t,target_index,distance\n");
}

#[test]
fn outputs_are_byte_identical_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        assert_eq!(code(&run(tmp.path(), &["orbit", "--n", "4000", "--seed", "9", "--out", dir])), 0);
    }
    for f in ["orbit.csv", "orbit_metadata.txt", "candidate.csv"] {
        assert_eq!(read(&tmp.path().join("a"), f), read(&tmp.path().join("b"), f), "{f}");
    }
    assert_eq!(code(&run(tmp.path(), &["orbit", "--n", "4000", "--seed", "10", "--out", "c"])), 0);
    assert_ne!(read(&tmp.path().join("a"), "orbit.csv"), read(&tmp.path().join("c"), "orbit.csv"));
}

#[test]
fn dsw_verdicts_and_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["dsw", "--n", "4000", "--out", "good"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let good = tmp.path().join("good");
    assert!(read(&good, "dsw_report.txt").contains("verdict=hypotheses-supported\n"));
    assert!(read(&good, "dsw_lambdas.csv").starts_with("re_lambda,im_lambda,eigen_residual,cr_residual\n"));
    assert_manifest_complete(&good);

    let o = run(tmp.path(), &["dsw", "--n", "4000", "--kappa", "-1", "--out", "bad"]);
    assert_eq!(code(&o), 1);
    assert!(read(&tmp.path().join("bad"), "dsw_report.txt").contains("verdict=hypotheses-violated(imag-axis)\n"));

    let o = run(tmp.path(), &["dsw", "--region", "0,0,-1,1", "--out", "flat"]);
    assert_eq!(code(&o), 2);
    assert!(!tmp.path().join("flat").exists());
}

#[test]
fn isometry_and_evolve_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["isometry", "--p", "4", "--alpha", "0.25", "--out", "i"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(csv_rows(&read(&tmp.path().join("i"), "isometry_report.csv")).len(), 5);
    for family in ["exponential", "heat", "rotation", "translation"] {
        let o = run(tmp.path(), &["evolve", "--family", family, "--out", family]);
        assert_eq!(code(&o), 0, "{family}: {}", stderr(&o));
        let out = tmp.path().join(family);
        assert!(read(&out, "evolve.csv").starts_with("t,s,node_index,re,im\n"));
        assert_eq!(csv_rows(&read(&out, "evolve_report.csv")).len(), 21);
    }
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("exp.cfg"), "# isometry sweep\np = 3\nalpha = 0.5 # order\nn = 3000\nout = from-config\n").unwrap();
    let o = run(tmp.path(), &["isometry", "--config", "exp.cfg", "--alpha", "0.75"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = tmp.path().join("from-config");
    let manifest = read(&out, "manifest.txt");
    assert!(manifest.contains("alpha = 0.75\n") && manifest.contains("p = 3\n") && manifest.contains("n = 3000\n"));
    let report = read(&out, "isometry_report.csv");
    let row = &csv_rows(&report)[0];
    assert_eq!(row[1].parse::<f64>().unwrap(), 3.0);
    assert_eq!(row[2].parse::<f64>().unwrap(), 0.75);

    fs::write(tmp.path().join("bad.cfg"), "alpha = 0.5\nbeta = 2\n").unwrap();
    let o = run(tmp.path(), &["isometry", "--config", "bad.cfg", "--out", "nope"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("beta"));
    assert!(!tmp.path().join("nope").exists());
}

#[test]
fn selftest_matrix_is_deterministic_and_names_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let first = run(tmp.path(), &["selftest", "--out", "a"]);
    assert!(start.elapsed() < Duration::from_secs(60));
    let second = run(tmp.path(), &["selftest", "--out", "b"]);
    assert_eq!(read(&tmp.path().join("a"), "selftest.csv"), read(&tmp.path().join("b"), "selftest.csv"));
    let stdout = String::from_utf8_lossy(&first.stdout);
    for id in 1..=11 {
        assert!(stdout.lines().any(|l| l.trim_start().starts_with(&format!("{id} "))), "suite {id} missing");
    }
    // the α = 0.1 clock round trip is the one known red line
    assert_eq!(code(&first), 1);
    assert_eq!(code(&second), 1);
    let err = stderr(&first);
    assert!(err.contains("α=0.1 max round-trip ulps"), "{err}");
    assert_eq!(err.lines().filter(|l| l.starts_with("FAIL")).count(), 1, "{err}");
    assert_manifest_complete(&tmp.path().join("a"));
}

#[test]
fn injected_negative_controls_are_named() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["selftest", "--inject-negative-control", "--out", "n"]);
    assert_eq!(code(&o), 1);
    let stdout = String::from_utf8_lossy(&o.stdout);
    for suite in ["derivative representation", "alpha-semigroup law", "hypercyclic candidate", "spectral chaos hypotheses"] {
        let line = stdout.lines().find(|l| l.contains(suite)).unwrap();
        assert!(line.ends_with("FAIL"), "{line}");
    }
    assert!(stdout.contains("failed: negative-control:"));
}

#[test]
fn unknown_command_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(tmp.path(), &["chaos"])), 2);
    assert_eq!(code(&run(tmp.path(), &["orbit", "--n", "many"])), 2);
}
