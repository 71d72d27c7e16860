use std::path::{Path, PathBuf};
use std::process::Command;

use ifunc_cli::corpus::run_regression;
use ifunc_cli::render::{from_json, render_json};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn ifunc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ifunc")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ifunc-test-{}-{}", name, std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn unit_series_prints_one() {
    let cfg = corpus_dir().join("p2_degree3.toml");
    let (code, out, _) = ifunc(&["--config", cfg.to_str().unwrap(), "--max-degree", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\n");
}

#[test]
fn config_errors_exit_two_with_position() {
    let dir = scratch("config");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "[presentation]\npreset = \"projective_space(2)\"\n\n[run]\nmax_degre = 2\n").unwrap();
    let (code, _, err) = ifunc(&["--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5, column 1"), "{}", err);
    assert!(err.contains("max_degre"), "{}", err);

    let (code, _, err) =
        ifunc(&["--config", corpus_dir().join("p2_degree3.toml").to_str().unwrap(), "--convexity", "sometimes"]);
    assert_eq!(code, 2);
    assert!(err.contains("run.convexity"), "{}", err);
}

#[test]
fn unbounded_fiber_exits_four() {
    let dir = scratch("unbounded");
    let path = dir.join("unbounded.toml");
    let text = "[presentation]\ntorus_rank = 2\nweights = [[1, 0], [0, 1], [1, 0], [0, 1], [1, 1]]\n\
                theta = [1, 1]\nroots = [[1, -1], [-1, 1]]\npositive_roots = [0]\n\
                weyl_generators = [[[0, 1], [1, 0]]]\nchi_g_basis = [[1, 1]]\n";
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = ifunc(&["--config", path.to_str().unwrap()]);
    assert_eq!(code, 4, "{}", err);
    assert!(err.contains("direction"), "{}", err);
}

#[test]
fn machine_output_is_deterministic_and_round_trips() {
    let cfg = corpus_dir().join("g24_degree2.toml");
    let a = ifunc(&["--config", cfg.to_str().unwrap(), "--output", "json"]);
    let b = ifunc(&["--config", cfg.to_str().unwrap(), "--output", "json"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let series = from_json(&a.1).unwrap();
    assert_eq!(render_json(&series), a.1);
    assert!(!a.1.contains('.'), "no floating point in machine output");
}

#[test]
fn out_flag_writes_file() {
    let dir = scratch("out");
    let path = dir.join("p1.tex");
    let cfg = corpus_dir().join("p1_degree5.toml");
    let (code, out, _) =
        ifunc(&["--config", cfg.to_str().unwrap(), "--output", "latex", "--max-degree", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let tex = std::fs::read_to_string(&path).unwrap();
    assert_eq!(tex, "1\n+ q^{1} \\frac{1}{z^{2}}\n- q^{1} \\frac{2 p}{z^{3}}\n");
}

#[test]
fn regression_corpus_passes() {
    let (n, failures) = run_regression(&corpus_dir()).unwrap();
    assert!(n >= 10);
    assert!(failures.is_empty(), "{:?}", failures);
}

#[test]
fn perturbed_expected_output_fails_exactly_once() {
    let dir = scratch("perturbed");
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.join("quintic_degree3.expected.json");
    let text = std::fs::read_to_string(&target).unwrap();
    let perturbed = text.replacen("\"120\"", "\"121\"", 1);
    assert_ne!(text, perturbed);
    std::fs::write(&target, perturbed).unwrap();
    let (_, failures) = run_regression(&dir).unwrap();
    assert_eq!(failures.len(), 1, "{:?}", failures);
    assert_eq!(failures[0].config, dir.join("quintic_degree3.toml"));

    let (code, out, _) = ifunc(&["--corpus", dir.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("1 failed"), "{}", out);
    assert!(out.contains("quintic_degree3.toml"), "{}", out);
}

#[test]
fn empty_corpus_is_an_error() {
    let dir = scratch("empty");
    assert!(run_regression(&dir).is_err());
    let (code, _, err) = ifunc(&["--corpus", dir.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(err.contains("no .toml cases"), "{}", err);
}
