//! End-to-end tests of the installed binary: output files, determinism
//! across processes, and failure modes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nehari::graph::{builtin_g9, serialize_graph};

fn nehari(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nehari"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn write_g9(dir: &Path) -> String {
    let (g, a) = builtin_g9();
    let path = dir.join("g9.graph");
    fs::write(&path, serialize_graph(&g, &a)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn g9_runs_are_byte_identical_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let run_a = nehari(&["g9", "--seed", "42", "--out", out_a.to_str().unwrap()]);
    let run_b = nehari(&["g9", "--seed", "42", "--out", out_b.to_str().unwrap()]);
    assert!(run_a.status.success(), "{}", String::from_utf8_lossy(&run_a.stderr));
    assert!(run_b.status.success());
    for name in ["sweep.csv", "trend.csv"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let stdout = String::from_utf8_lossy(&run_a.stdout);
    assert!(stdout.contains("verdict: converged"), "{stdout}");
}

#[test]
fn solve_writes_solution_csv() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g9(dir.path());
    let out = dir.path().join("solution.csv");
    let run = nehari(&[
        "solve", "--graph", &graph, "--lambda", "1", "--p", "2", "--positive",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vertex,u,a,residual"));
    assert_eq!(lines.count(), 9);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("ground state found"), "{stdout}");
    assert!(stdout.contains("verifier        = ok"), "{stdout}");
}

#[test]
fn dirichlet_accepts_either_domain_source_with_equal_output() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g9(dir.path());
    let by_well = dir.path().join("well.csv");
    let by_ids = dir.path().join("ids.csv");
    let run_well = nehari(&[
        "dirichlet", "--graph", &graph, "--omega-from-well", "--p", "2", "--positive",
        "--out", by_well.to_str().unwrap(),
    ]);
    let run_ids = nehari(&[
        "dirichlet", "--graph", &graph, "--omega", "x1,x2,x3,x4,x5,x6", "--p", "2",
        "--positive", "--out", by_ids.to_str().unwrap(),
    ]);
    assert!(run_well.status.success());
    assert!(run_ids.status.success());
    assert_eq!(fs::read(&by_well).unwrap(), fs::read(&by_ids).unwrap());

    // The domain source is mandatory and exclusive.
    let neither = nehari(&["dirichlet", "--graph", &graph, "--p", "2", "--out", "x.csv"]);
    assert!(!neither.status.success());
    let both = nehari(&[
        "dirichlet", "--graph", &graph, "--omega", "x1", "--omega-from-well", "--p", "2",
        "--out", "x.csv",
    ]);
    assert!(!both.status.success());
}

#[test]
fn sweep_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g9(dir.path());
    let out = dir.path().join("sweep-out");
    let run = nehari(&[
        "sweep", "--graph", &graph, "--lambdas", "1e0:1e2:x10", "--p", "2", "--positive",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let sweep = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let trend = fs::read_to_string(out.join("trend.csv")).unwrap();
    assert!(sweep.starts_with("lambda,m_lambda,m_gap,w12_distance,outside_max,potential_mass"));
    assert!(trend.starts_with("lambda,u1,u2,u3,u4,u5,u6,u7,u8,u9"));
    assert_eq!(sweep.lines().count(), 4);
    assert_eq!(trend.lines().count(), 4);
}

#[test]
fn verify_passes_on_a_sound_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g9(dir.path());
    let run = nehari(&["verify", "--graph", &graph, "--trials", "25"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("result: PASS"), "{stdout}");
}

#[test]
fn errors_reach_stderr_with_nonzero_exit() {
    let run = nehari(&[
        "solve", "--graph", "/definitely/not/here.graph", "--lambda", "1", "--p", "2",
        "--out", "x.csv",
    ]);
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("error:"), "{stderr}");
    assert!(stderr.contains("not/here.graph"), "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let graph = write_g9(dir.path());
    let bad_grid = nehari(&[
        "sweep", "--graph", &graph, "--lambdas", "10:1:x10", "--p", "2", "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert!(!bad_grid.status.success());
    let stderr = String::from_utf8_lossy(&bad_grid.stderr);
    assert!(stderr.contains("lambda grid"), "{stderr}");

    let bad_p = nehari(&[
        "solve", "--graph", &graph, "--lambda", "1", "--p", "1.5", "--out",
        dir.path().join("y.csv").to_str().unwrap(),
    ]);
    assert!(!bad_p.status.success());
}
