// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kpo-spectro"));
    c.env_remove("KPO_SPECTRO_JOBS");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--config")
        .arg(cfg)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn every_shipped_config_validates() {
    let mut n = 0;
    for entry in fs::read_dir(config("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = bin()
                .args(["validate-config", "--config"])
                .arg(&path)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0), "{}", path.display());
            n += 1;
        }
    }
    assert!(n >= 16);
}

#[test]
fn spectrum2d_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "spectrum2d",
            "--set",
            "sweep.beta.points=5",
            "--set",
            "sweep.omega_in.points=11",
        ],
        &config("fig2a.json"),
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("fig2a.csv")).unwrap();
    assert!(text.contains("# config_sha256: "));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "beta_over_2pi_MHz,omega_in_minus_omega_p_half_over_2pi_MHz,re_gamma,im_gamma,abs_gamma"
    );
    assert_eq!(data_rows(&text).len(), 55);
}

#[test]
fn spectrum1d_zero_pump_dip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["spectrum1d", "--set", "beta_over_2pi_MHz=0"],
        &config("fig2c.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("fig2c_line.csv")).unwrap();
    let rows = data_rows(&text);
    let (w, g) = rows
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap(), r[3].parse::<f64>().unwrap()))
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    assert!((w - 7.0).abs() < 1e-9);
    assert!((g - 0.8182).abs() < 1e-4);
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["populations", "--set", "sweep.beta.points=9"];
    let mut files = Vec::new();
    for jobs in ["1", "8"] {
        let sub = dir.path().join(jobs);
        let mut a = args.to_vec();
        a.extend(["--jobs", jobs]);
        assert!(run(&a, &config("fig5.json"), &sub).status.success());
        files.push(fs::read(sub.join("fig5.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn jobs_default_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("KPO_SPECTRO_JOBS", "0")
        .args(["levels", "--config"])
        .arg(config("fig3.json"))
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overwrite_refused_on_hash_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("fig3.json");
    assert!(run(&["levels"], &cfg, dir.path()).status.success());
    assert!(run(&["levels"], &cfg, dir.path()).status.success());
    let changed = run(
        &["levels", "--set", "sweep.beta.points=7"],
        &cfg,
        dir.path(),
    );
    assert_eq!(changed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&changed.stderr).contains("refusing to overwrite"));
    let forced = run(
        &["levels", "--set", "sweep.beta.points=7", "--force"],
        &cfg,
        dir.path(),
    );
    assert!(forced.status.success());
    assert_eq!(
        data_rows(&fs::read_to_string(dir.path().join("fig3.csv")).unwrap()).len(),
        7
    );
}

#[test]
fn wigner_writes_one_file_per_pump() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "wigner",
            "--set",
            "wigner.x.points=21",
            "--set",
            "wigner.p.points=21",
        ],
        &config("fig7-wigner.json"),
        dir.path(),
    );
    assert!(out.status.success());
    for k in 0..4 {
        let text = fs::read_to_string(dir.path().join(format!("fig7-wigner_{k}.csv"))).unwrap();
        assert!(text.contains("# beta_over_2pi_MHz: "));
        assert_eq!(data_rows(&text).len(), 441);
    }
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = bin().arg("plot").output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let bad_flag = bin().args(["levels", "--bogus"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));
    let bad_set = run(
        &["levels", "--set", "no_such_key=1"],
        &config("fig3.json"),
        dir.path(),
    );
    assert_eq!(bad_set.status.code(), Some(2));
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\n  \"schema_version\": 1,\n  \"model\": {\n}").unwrap();
    let out = bin()
        .args(["validate-config", "--config"])
        .arg(&broken)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let missing = bin()
        .args(["validate-config", "--config", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "steady",
            "--set",
            "kappa_ex_over_2pi_MHz=0",
            "--set",
            "kappa_int_over_2pi_MHz=0",
        ],
        &config("fig2a.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no unique steady state"));
}
