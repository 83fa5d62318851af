use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pmconv_cli::{builtin_scenario, manifest_path, run, CliError, RunManifest, ScenarioConfig};
use pmconv_core::seqlab::Mode;

fn pmconv(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pmconv"));
    cmd.args(args).env_remove("PMCONV_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("cfg.json");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PARITY: &str = r#"{
    "name": "parity",
    "space": {"space": "equilateral", "F": {"kind": "exp-simple", "param": 1}},
    "sequence": {"name": "parity"},
    "ideal": {"ideal": "density-zero"},
    "statistics": [
        {"statistic": "pre-cauchy", "t": [0.5]},
        {"statistic": "real-pre-cauchy", "eps": [0.5]},
        {"statistic": "dichotomy", "alpha": 0.4, "beta": 0.6}
    ],
    "windows": {"kind": "list", "windows": [[6, 6], [12, 10]]},
    "mode": "exact",
    "samples": 20000,
    "seed": 7,
    "cross_check": true
}"#;

#[test]
fn list_names_the_builtins() {
    let out = pmconv(&["list"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("example1\t")));
    assert!(text.lines().any(|l| l.starts_with("note31\t")));
}

#[test]
fn malformed_ideal_is_a_config_error_with_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &PARITY.replace("density-zero", "maximal"));
    let out = pmconv(&["validate", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`ideal.ideal`"));
}

#[test]
fn decreasing_schedule_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &PARITY.replace("[[6, 6], [12, 10]]", "[[10, 10], [5, 20]]"),
    );
    let out = pmconv(&["validate", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("windows[1]") && err.contains("strictly"),
        "{err}"
    );
}

#[test]
fn validate_accepts_a_good_config_without_running() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PARITY);
    let out = pmconv(
        &["validate", "--config", &cfg],
        &[("PMCONV_OUT_DIR", dir.path())],
    );
    assert!(out.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn exceeding_the_budget_exits_3_and_names_the_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = pmconv(
        &[
            "run",
            "--builtin",
            "example1",
            "--budget",
            "100",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("window (6, 6)"), "{err}");
    assert!(!manifest_path(dir.path(), "example1").exists());
}

#[test]
fn runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = pmconv(
            &[
                "run",
                "--builtin",
                "example1",
                "--out",
                d.path().to_str().unwrap(),
            ],
            &[],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let read = |d: &Path| -> RunManifest {
        serde_json::from_slice(&fs::read(manifest_path(d, "example1")).unwrap()).unwrap()
    };
    let (ma, mb) = (read(a.path()), read(b.path()));
    assert_eq!(ma.config_sha256, mb.config_sha256);
    assert!(!ma.statistics.is_empty());
    for (sa, sb) in ma.statistics.iter().zip(&mb.statistics) {
        assert_eq!(sa.csv_sha256, sb.csv_sha256);
        let (ca, cb) = (
            fs::read(a.path().join(&sa.csv)).unwrap(),
            fs::read(b.path().join(&sb.csv)).unwrap(),
        );
        assert_eq!(ca, cb);
        assert_eq!(pmconv_cli::output::sha256_hex(&ca), sa.csv_sha256);
    }
}

#[test]
fn env_var_sets_the_default_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = pmconv(
        &["run", "--builtin", "example1"],
        &[("PMCONV_OUT_DIR", dir.path())],
    );
    assert!(out.status.success());
    assert!(manifest_path(dir.path(), "example1").exists());
}

#[test]
fn example1_shows_the_factorial_bound() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(&builtin_scenario("example1").unwrap(), dir.path()).unwrap();
    assert_eq!(m.windows, vec![(2, 2), (6, 6), (24, 24)]);
    let csv = fs::read_to_string(dir.path().join("example1_pre-cauchy.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (w, t) = (f[2].parse::<f64>().unwrap(), f[4].parse::<f64>().unwrap());
        let (count, den) = (
            f[9].parse::<u128>().unwrap(),
            f[10].parse::<u128>().unwrap(),
        );
        assert_eq!(den, (w * w * w * w) as u128);
        // at the smallest t the window bound 1 - (1 - 1/m)^2 (1 - 1/n)^2 holds
        if t == 0.25 && w > 2.0 {
            let bound = 1.0 - (1.0 - 1.0 / w).powi(4);
            assert!((count as f64) / (den as f64) >= bound, "{line}");
        }
    }
}

#[test]
fn note31_p_is_small_and_q_is_large() {
    let dir = tempfile::tempdir().unwrap();
    run(&builtin_scenario("note31").unwrap(), dir.path()).unwrap();
    let last = |name: &str| -> f64 {
        let csv = fs::read_to_string(dir.path().join(name)).unwrap();
        csv.lines()
            .last()
            .unwrap()
            .split(',')
            .nth(5)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(last("note31_strong-ist-p0.csv") < 0.01);
    assert!(last("note31_strong-ist-p1.csv") > 0.99);
}

#[test]
fn empty_statistics_emit_only_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = builtin_scenario("example1").unwrap();
    cfg.statistics.clear();
    let m = run(&cfg, dir.path()).unwrap();
    assert!(m.statistics.is_empty());
    let files: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(
        files,
        vec![std::ffi::OsString::from("example1_manifest.json")]
    );
}

#[test]
fn manifest_records_every_default() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::from_json(
        r#"{"name":"d","space":{"space":"simple","H":{"kind":"exp-simple","param":1}},
            "sequence":{"name":"constant"},"windows":{"kind":"factorial","up_to":3}}"#,
    )
    .unwrap();
    run(&cfg, dir.path()).unwrap();
    let v: serde_json::Value =
        serde_json::from_slice(&fs::read(manifest_path(dir.path(), "d")).unwrap()).unwrap();
    let eff = &v["effective_config"];
    for key in [
        "ideal",
        "statistics",
        "mode",
        "samples",
        "budget",
        "seed",
        "cross_check",
        "output",
    ] {
        assert!(eff.get(key).is_some(), "{key} missing");
    }
    assert_eq!(eff["mode"], "exact");
    assert_eq!(eff["budget"], 1_000_000_000u64);
    assert_eq!(eff["windows"]["from"], 1);
}

#[test]
fn cross_check_reports_discrepancies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::from_json(PARITY).unwrap();
    let m = run(&cfg, dir.path()).unwrap();
    let cc = m.cross_check.unwrap();
    // two quadruple statistics at two windows
    assert_eq!(cc.records.len(), 4);
    assert!(!cc.breach, "{cc:?}");
    assert!(cc
        .records
        .iter()
        .all(|r| r.sigma > 0.0 && r.discrepancy <= 3.0 * r.sigma));
    let dich = m
        .statistics
        .iter()
        .find(|s| s.statistic == "dichotomy")
        .unwrap();
    assert!(dich.summary.as_ref().unwrap().get("verdict").is_some());
}

#[test]
fn sampling_without_a_seed_is_a_config_error() {
    let mut cfg = ScenarioConfig::from_json(PARITY).unwrap();
    cfg.seed = None;
    cfg.mode = Mode::Sampled;
    let dir = tempfile::tempdir().unwrap();
    let e = run(&cfg, dir.path()).unwrap_err();
    assert!(matches!(e, CliError::Config { ref path, .. } if path == "seed"));
    assert_eq!(e.exit_code(), 2);
}
