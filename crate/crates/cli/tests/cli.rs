//! Black-box tests of the `tsdict` binary.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tsdict_core::io::write_ucr_tsv;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tsdict")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fit_then_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    let test = dir.path().join("test.tsv");
    write_ucr_tsv(&common::sinusoid_dataset(8, 48, [12.0, 6.0], 0.2, 1), &train).unwrap();
    write_ucr_tsv(&common::sinusoid_dataset(8, 48, [12.0, 6.0], 0.2, 2), &test).unwrap();
    let model = dir.path().join("model.json");
    let preds = dir.path().join("pred.csv");

    let out = run(&[
        "fit",
        "--train",
        arg(&train),
        "--model-out",
        arg(&model),
        "--rmax",
        "8",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("feature_dim = 4096"));
    assert!(model.is_file());

    let out = run(&[
        "predict",
        "--model",
        arg(&model),
        "--test",
        arg(&test),
        "--out",
        arg(&preds),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let content = std::fs::read_to_string(&preds).unwrap();
    assert_eq!(content.lines().count(), 17); // header + 16 rows
    assert!(content.starts_with("index,predicted,true\n"));
}

#[test]
fn rmax_auto_resolves_from_dataset_size() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    write_ucr_tsv(&common::noise_dataset(200, 20, 5), &train).unwrap();
    let model = dir.path().join("model.json");

    let out = run(&[
        "fit",
        "--train",
        arg(&train),
        "--model-out",
        arg(&model),
        "--rmax",
        "auto",
        "--seed",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("r_max = 50 (auto)"), "{}", stdout(&out));
}

#[test]
fn evaluate_on_bundled_data_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let models: Vec<PathBuf> = (0..2)
        .map(|i| dir.path().join(format!("m{i}.json")))
        .collect();
    let mut accuracies = Vec::new();
    for model in &models {
        let out = run(&[
            "evaluate",
            "--train",
            arg(&bundled("synthetic_TRAIN.tsv")),
            "--test",
            arg(&bundled("synthetic_TEST.tsv")),
            "--model-out",
            arg(model),
            "--seed",
            "7",
            "--rmax",
            "10",
            "--quiet",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let acc = text
            .lines()
            .find_map(|l| l.strip_prefix("accuracy = "))
            .expect("accuracy line")
            .to_owned();
        accuracies.push(acc);
    }
    assert_eq!(accuracies[0], accuracies[1]);
    assert_eq!(
        std::fs::read(&models[0]).unwrap(),
        std::fs::read(&models[1]).unwrap()
    );
}

#[test]
fn predict_rejects_mismatched_series_length() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    let test = dir.path().join("test.tsv");
    write_ucr_tsv(&common::noise_dataset(6, 32, 7), &train).unwrap();
    write_ucr_tsv(&common::noise_dataset(6, 16, 8), &test).unwrap();
    let model = dir.path().join("model.json");
    let preds = dir.path().join("pred.csv");

    let out = run(&[
        "fit",
        "--train",
        arg(&train),
        "--model-out",
        arg(&model),
        "--rmax",
        "3",
        "--quiet",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "predict",
        "--model",
        arg(&model),
        "--test",
        arg(&test),
        "--out",
        arg(&preds),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("shape mismatch"), "{}", stderr(&out));
    assert!(!preds.exists(), "no partial output on failure");
}

#[test]
fn missing_input_fails_with_diagnostic() {
    let out = run(&[
        "fit",
        "--train",
        "/nonexistent/train.tsv",
        "--model-out",
        "/tmp/whatever.json",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error: "), "{}", stderr(&out));
}

#[test]
fn out_of_bounds_override_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    write_ucr_tsv(&common::noise_dataset(6, 32, 9), &train).unwrap();
    let out = run(&[
        "fit",
        "--train",
        arg(&train),
        "--model-out",
        arg(&dir.path().join("m.json")),
        "--wmin",
        "3",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("invalid parameters"), "{}", stderr(&out));
}

#[test]
fn benchmark_walks_ucr_layout_and_sorts_rows() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["Zeta", "Alpha"] {
        let sub = dir.path().join(name);
        std::fs::create_dir(&sub).unwrap();
        write_ucr_tsv(
            &common::sinusoid_dataset(5, 40, [10.0, 5.0], 0.2, 11),
            &sub.join(format!("{name}_TRAIN.tsv")),
        )
        .unwrap();
        write_ucr_tsv(
            &common::sinusoid_dataset(5, 40, [10.0, 5.0], 0.2, 12),
            &sub.join(format!("{name}_TEST.tsv")),
        )
        .unwrap();
    }
    let report = dir.path().join("report.csv");
    let out = run(&[
        "benchmark",
        arg(dir.path()),
        "--out",
        arg(&report),
        "--rmax",
        "4",
        "--quiet",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let content = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("name,m_train"));
    assert!(lines[1].starts_with("Alpha,"));
    assert!(lines[2].starts_with("Zeta,"));
    assert_eq!(lines[1].split(',').count(), 10);
}
