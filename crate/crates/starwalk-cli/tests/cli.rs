//! End-to-end tests of the `starwalk` binary: frozen output values, file
//! schemas, determinism, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starwalk"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("binary exits normally")
}

/// Whitespace token at `index` on the first stdout line starting with
/// `prefix`, parsed as `f64`.
fn token_value(stdout: &str, prefix: &str, index: usize) -> f64 {
    let line = stdout
        .lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no line starts with `{prefix}` in:\n{stdout}"));
    line.split_whitespace().nth(index).unwrap().parse().unwrap()
}

fn read_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn three_phase_walk_peaks_near_three_quarters() {
    let dir = tmp_dir("walk_three_phase");
    let out = run(&[
        "walk",
        "--phases",
        "2pi/3:50,-2pi/3:50,0:1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    let peak = token_value(&stdout, "peak per-edge probability", 3);
    let step = token_value(&stdout, "peak per-edge probability", 6);
    assert!((0.70..=0.80).contains(&peak), "peak = {peak}");
    assert!((15.0..=21.0).contains(&step), "step = {step}");

    let rows = read_rows(&dir.join("walk_trace.csv"));
    assert_eq!(rows[0], "k,P_k");
    assert!(rows.len() >= 30);
}

#[test]
fn flat_profile_traces_one_over_n() {
    let dir = tmp_dir("walk_flat");
    let out = run(&[
        "walk",
        "--phases",
        "0:8",
        "--trace",
        "flat.csv",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    let rows = read_rows(&dir.join("flat.csv"));
    assert_eq!(rows[0], "k,P_k");
    assert_eq!(rows.len(), 34, "header plus steps 0..=32");
    for row in &rows[1..] {
        let p: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((p - 0.125).abs() <= 1e-12, "row `{row}`");
    }
}

#[test]
fn marked_pi_edge_walk_reaches_the_grover_peak() {
    let dir = tmp_dir("walk_pi");
    let out = run(&[
        "walk",
        "--phases",
        "pi:1,0:63",
        "--trace",
        "pi.csv",
        "--svg",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    let peak = token_value(&stdout_of(&out), "peak per-edge probability", 3);
    assert!(peak >= 0.9, "peak = {peak}");
    let svg = std::fs::read_to_string(dir.join("pi.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(code_of(&run(&["walk"])), 2);
    assert_eq!(code_of(&run(&["walk", "--phases", "xyz:3"])), 2);
    assert_eq!(code_of(&run(&["walk", "--phases", "0:0"])), 2);
    assert_eq!(code_of(&run(&["no-such-command"])), 2);
    assert_eq!(code_of(&run(&["--help"])), 0);
}

#[test]
fn spectrum_prints_the_certified_closed_forms() {
    let out = run(&["spectrum", "--phases", "pi:1,0:99"]);
    assert_eq!(code_of(&out), 0);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("multiplicity = 98"), "{stdout}");
    assert!(stdout.contains("0.980000"), "{stdout}");
    assert!(stdout.contains("0.198997"), "{stdout}");
    assert!(stdout.contains("principal_residual=1e-9"), "{stdout}");
    assert_eq!(
        stdout
            .lines()
            .filter(|l| l.starts_with("principal"))
            .count(),
        2
    );
}

#[test]
fn spectrum_dense_check_bounds_the_mismatch() {
    let out = run(&["spectrum", "--phases", "pi:1,0:15", "--dense-check"]);
    assert_eq!(code_of(&out), 0);
    let mismatch = token_value(&stdout_of(&out), "max eigenvalue mismatch", 4);
    assert!(mismatch <= 1e-8, "mismatch = {mismatch}");
}

#[test]
fn spectrum_reports_clustered_phases_as_numerical_failure() {
    let out = run(&["spectrum", "--phases", "2.0:1,2.00001:1"]);
    assert_eq!(code_of(&out), 3);
    assert!(stderr_of(&out).contains("residual"));
}

#[test]
fn even_instance_search_matches_the_frozen_peak() {
    let dir = tmp_dir("grover_even");
    let out = run(&[
        "grover",
        "-N",
        "243",
        "-d",
        "3",
        "--even",
        "--seed",
        "1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    let p = token_value(&stdout, "P_max_sim", 1);
    let k = token_value(&stdout, "P_max_sim", 4);
    assert!((0.77..=0.78).contains(&p), "P = {p}");
    assert_eq!(k, 14.0);
    assert!(stdout.contains("queries 14 (1 per iteration)"), "{stdout}");

    let rows = read_rows(&dir.join("grover_trace.csv"));
    assert_eq!(rows[0], "k,P_k,P_pred");
}

#[test]
fn sign_flip_mode_reaches_near_certainty_at_d_queries() {
    let dir = tmp_dir("grover_sign_flip");
    let out = run(&[
        "grover",
        "-N",
        "256",
        "-d",
        "4",
        "--mode",
        "sign-flip",
        "--seed",
        "2",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    let stdout = stdout_of(&out);
    let p = token_value(&stdout, "P_max_sim", 1);
    assert!(p >= 0.95, "P = {p}");
    assert!(stdout.contains("(4 per iteration)"), "{stdout}");
}

#[test]
fn four_item_search_succeeds_exactly_after_one_iteration() {
    let dir = tmp_dir("grover_four");
    let out = run(&[
        "grover",
        "-N",
        "4",
        "-d",
        "2",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    let stdout = stdout_of(&out);
    let p = token_value(&stdout, "P_max_sim", 1);
    let k = token_value(&stdout, "P_max_sim", 4);
    assert!(p >= 0.999_999, "P = {p}");
    assert_eq!(k, 1.0);
    assert!(stdout.contains("regime warning"), "{stdout}");
}

#[test]
fn strict_mode_refuses_out_of_regime_instances() {
    let dir = tmp_dir("grover_strict");
    let out = run(&[
        "grover",
        "-N",
        "10",
        "-d",
        "3",
        "-M",
        "5",
        "--strict",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 4);
    assert!(stderr_of(&out).contains("refused"));
}

#[test]
fn predictions_print_the_closed_forms() {
    let out = run(&["predict", "-N", "243", "-d", "3", "-M", "1"]);
    assert_eq!(code_of(&out), 0);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("P_max_pred 0.750000"), "{stdout}");
    assert!(stdout.contains("k_max_pred 14.1372"), "{stdout}");

    let two = run(&["predict", "-N", "100", "-d", "2"]);
    assert!(stdout_of(&two).contains("P_max_pred 1.00000"));
}

#[test]
fn sweeps_fit_square_root_scaling_and_rerun_identically() {
    let dir_a = tmp_dir("sweep_a");
    let dir_b = tmp_dir("sweep_b");
    let args = ["sweep", "--N", "81,243,729", "--d", "3", "--seed", "3"];
    let first = run(&[&args[..], &["--out-dir", dir_a.to_str().unwrap()]].concat());
    assert_eq!(code_of(&first), 0, "stderr: {}", stderr_of(&first));
    let second = run(&[&args[..], &["--out-dir", dir_b.to_str().unwrap()]].concat());
    assert_eq!(code_of(&second), 0);

    let bytes_a = std::fs::read(dir_a.join("sweep.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.join("sweep.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "reruns are byte-identical");

    let rows = read_rows(&dir_a.join("sweep.csv"));
    assert_eq!(
        rows[0],
        "N,d,M,mode,seed,k_max_sim,P_max_sim,k_max_pred,P_max_pred,queries,wall_ms,regime_warn"
    );
    assert_eq!(rows.len(), 4, "header plus three records");

    let stdout = stdout_of(&first);
    let fit_line = stdout
        .lines()
        .find(|l| l.starts_with("fit k_max_sim"))
        .unwrap();
    let exponent: f64 = fit_line
        .split("N^")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.45..=0.55).contains(&exponent), "exponent = {exponent}");
}

#[test]
fn sweep_json_mirrors_the_record_schema() {
    let dir = tmp_dir("sweep_json");
    let out = run(&[
        "sweep",
        "--N",
        "81,243",
        "--d",
        "3",
        "--format",
        "json",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    let json = std::fs::read_to_string(dir.join("sweep.json")).unwrap();
    assert!(json.trim_start().starts_with('['));
    assert!(json.contains("\"N\": 81"));
    assert!(json.contains("\"P_max_sim\""));
    assert!(!dir.join("sweep.csv").exists());
}

#[test]
fn out_dir_environment_variable_is_honored() {
    let dir = tmp_dir("env_out_dir");
    let out = Command::new(env!("CARGO_BIN_EXE_starwalk"))
        .args(["walk", "--phases", "0:8", "--trace", "env.csv"])
        .env("STARWALK_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("env.csv").exists());
}
