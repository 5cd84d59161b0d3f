use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use monge_align::io;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monge-align"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["synth", "--out", s(&path)];
    args.extend_from_slice(extra);
    ok_json(&args);
    path
}

#[test]
fn missing_inputs_is_a_usage_error() {
    let out = run(&["fit", "--method", "tma", "--out", "/tmp/never.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn one_domain_sits_on_its_barycenter() {
    let dir = tempfile::tempdir().unwrap();
    let sig = synth(dir.path(), "a.bin", &["--n-channels", "3", "--n-samples", "2048", "--seed", "1"]);
    let model = dir.path().join("m.json");
    for method in ["stma", "tma", "sma"] {
        let rep = ok_json(&["fit", "--method", method, "--filter-size", "32", "--inputs", s(&sig), "--out", s(&model)]);
        assert_eq!(rep["domains"][0]["distance_to_barycenter"].as_f64(), Some(0.0), "{method}");

        let out = dir.path().join(format!("{method}.bin"));
        ok_json(&["transform", "--model", s(&model), "--input", s(&sig), "--output", s(&out)]);
        let (x, y) = (io::read_signal(&sig).unwrap().centered(), io::read_signal(&out).unwrap());
        let err = x.data().iter().zip(y.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{method}: {err}");
    }
}

#[test]
fn three_tma_domains_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let inputs: Vec<PathBuf> = (0..3)
        .map(|k| {
            let d = k.to_string();
            synth(dir.path(), &format!("d{k}.bin"), &["--recipe", "expcorr", "--domain", &d, "--seed", &d, "--n-samples", "8192"])
        })
        .collect();
    let model = dir.path().join("tma.json");
    let mut args = vec!["fit", "--method", "tma", "--filter-size", "64", "--out", s(&model), "--inputs"];
    args.extend(inputs.iter().map(|p| s(p)));
    let rep = ok_json(&args);
    for d in rep["domains"].as_array().unwrap() {
        assert!(d["distance_to_barycenter"].as_f64().unwrap() > 0.0);
    }
    assert!(io::load_model(&model).is_ok());

    let target = synth(dir.path(), "t.bin", &["--recipe", "expcorr", "--domain", "4", "--seed", "9", "--n-samples", "8192"]);
    let rep = ok_json(&["eval", "--model", s(&model), "--inputs", s(&target)]);
    assert_eq!(rep["all_after_le_before"], Value::Bool(true));
    let row = &rep["inputs"][0];
    assert!(row["after"].as_f64().unwrap() < row["before"].as_f64().unwrap());
}

#[test]
fn full_length_filters_make_eval_distance_vanish() {
    let dir = tempfile::tempdir().unwrap();
    // one channel: a single-window periodogram of several channels is rank one
    // per bin, and the exact pushforward needs full-rank bins
    let a = synth(dir.path(), "a.bin", &["--n-channels", "1", "--n-samples", "256", "--seed", "1", "--domain", "0"]);
    let b = synth(dir.path(), "b.bin", &["--n-channels", "1", "--n-samples", "256", "--seed", "2", "--domain", "1"]);
    let model = dir.path().join("m.json");
    ok_json(&["fit", "--method", "stma", "--filter-size", "256", "--window", "rect", "--inputs", s(&a), s(&b), "--out", s(&model)]);
    let rep = ok_json(&["eval", "--model", s(&model), "--inputs", s(&a), s(&b)]);
    for row in rep["inputs"].as_array().unwrap() {
        assert!(row["after"].as_f64().unwrap() < 1e-6 * row["before"].as_f64().unwrap().max(1.0), "{row}");
    }
}

#[test]
fn channel_mismatch_exits_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let two = synth(dir.path(), "two.bin", &["--n-channels", "2", "--n-samples", "512"]);
    let three = synth(dir.path(), "three.bin", &["--n-channels", "3", "--n-samples", "512"]);
    let model = dir.path().join("m.json");
    ok_json(&["fit", "--method", "stma", "--filter-size", "16", "--inputs", s(&two), "--out", s(&model)]);
    let out = run(&["transform", "--model", s(&model), "--input", s(&three), "--output", s(&dir.path().join("o.bin"))]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ChannelMismatch");
    assert!(!dir.path().join("o.bin").exists());
}

#[test]
fn transform_is_deterministic_and_reads_only_its_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let src = synth(dir.path(), "src.bin", &["--seed", "5", "--domain", "1"]);
    let tgt = synth(dir.path(), "tgt.bin", &["--seed", "6", "--domain", "2"]);
    let model = dir.path().join("m.json");
    ok_json(&["fit", "--method", "stma", "--filter-size", "64", "--inputs", s(&src), "--out", s(&model)]);
    // the source file is gone before test time
    std::fs::remove_file(&src).unwrap();
    let (o1, o2) = (dir.path().join("o1.bin"), dir.path().join("o2.bin"));
    ok_json(&["transform", "--model", s(&model), "--input", s(&tgt), "--output", s(&o1)]);
    ok_json(&["transform", "--model", s(&model), "--input", s(&tgt), "--output", s(&o2)]);
    assert_eq!(std::fs::read(&o1).unwrap(), std::fs::read(&o2).unwrap());
}

#[test]
fn synth_zero_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let z = synth(dir.path(), "z.csv", &["--recipe", "zero", "--n-channels", "2", "--n-samples", "8"]);
    let text = std::fs::read_to_string(&z).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(io::read_signal(&z).unwrap().data().iter().all(|&v| v == 0.0));
}

#[test]
fn bad_files_report_their_kind() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.bin");
    std::fs::write(&junk, b"XXXXXXXXXXXXXXXXXXXXXXXXXXXX").unwrap();
    let out = run(&["fit", "--method", "tma", "--inputs", s(&junk), "--out", s(&dir.path().join("m.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "BadMagic");

    let short = synth(dir.path(), "short.bin", &["--n-samples", "16"]);
    let out = run(&["fit", "--method", "stma", "--filter-size", "64", "--inputs", s(&short), "--out", s(&dir.path().join("m.json"))]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "SignalTooShort");
}

#[test]
fn biasvar_prints_csv() {
    let out = run(&["biasvar", "--n-ell", "400", "--filters", "4,8,16", "--runs", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("f,sup_bin_bias,sup_bin_std,sup_bin_rmse"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn blur2d_same_angle_has_no_gap() {
    let dir = tempfile::tempdir().unwrap();
    let rep = ok_json(&[
        "blur2d", "--angles", "30", "--angles-target", "30", "--n-images", "10", "--size", "16", "--out-dir", s(dir.path()),
    ]);
    // the target domain draws its own images, so only its aligned gap vanishes
    for d in rep["domains"].as_array().unwrap() {
        if d["role"] == "source" {
            assert!(d["gap_before"].as_f64().unwrap() < 1e-12, "{d}");
        }
        assert!(d["gap_after"].as_f64().unwrap() < 1e-12, "{d}");
    }
    assert!(dir.path().join("report.json").exists());
    assert!(dir.path().join("barycenter_corr.pgm").exists());
}
