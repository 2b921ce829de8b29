use std::path::Path;
use std::process::{Command, Output};

/// Runs the binary with the whitespace-separated `line` followed by `extra`.
fn sivfie(line: &str, extra: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sivfie"))
        .args(line.split_whitespace())
        .args(extra)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_writes_the_diagonal_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let res = sivfie("solve --problem 1 --N 3 --seed 5 --grid 1024 --out", &[&out]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("zeta,eta,approx,exact,abs_error"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[0].starts_with("0.05,0.05,"));
    assert!(stderr(&res).contains("wall clock"));
    assert!(res.stdout.is_empty());
}

#[test]
fn trials_json_has_the_statistics_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let res = sivfie(
        "trials --problem 2 --N 2 --n 4 --seed0 9 --grid 512 --format json --out",
        &[&out],
    );
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["N"], 2);
    assert_eq!(v["seeds"], serde_json::json!([9, 10, 11, 12]));
    assert!(v["ci_lo"].as_f64().unwrap() <= v["mean"].as_f64().unwrap());
    assert!(v["mean"].as_f64().unwrap() <= v["ci_hi"].as_f64().unwrap());
}

#[test]
fn compare_has_both_bases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let res = sivfie("compare --problem 1 --N 2 --seed 3 --grid 256 --out", &[&out]);
    assert_eq!(code(&res), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("zeta,eta,exact,chelyshkov_approx,chelyshkov_abs_error,slp_approx,slp_abs_error")
    );
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let from_file = dir.path().join("file.csv");
    let body = serde_json::json!({"problem": 1, "basis": "slp", "N": 2, "seed": 4, "grid": 256, "out": from_file});
    std::fs::write(&cfg, body.to_string()).unwrap();
    assert_eq!(code(&sivfie("solve --config", &[&cfg])), 0);

    let direct = dir.path().join("direct.csv");
    let res = sivfie(
        "solve --problem 1 --basis slp --N 2 --seed 4 --grid 256 --out",
        &[&direct],
    );
    assert_eq!(code(&res), 0);
    assert_eq!(std::fs::read(&from_file).unwrap(), std::fs::read(&direct).unwrap());

    let overridden = dir.path().join("n3.csv");
    let res = Command::new(env!("CARGO_BIN_EXE_sivfie"))
        .args(["solve", "--N", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&overridden)
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
    let reference = dir.path().join("n3-direct.csv");
    let res = sivfie(
        "solve --problem 1 --basis slp --N 3 --seed 4 --grid 256 --out",
        &[&reference],
    );
    assert_eq!(code(&res), 0);
    assert_eq!(std::fs::read(&overridden).unwrap(), std::fs::read(&reference).unwrap());
    assert_ne!(std::fs::read(&overridden).unwrap(), std::fs::read(&from_file).unwrap());
}

#[test]
fn custom_problem_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("uv.json");
    let out = dir.path().join("uv.csv");
    std::fs::write(
        &cfg,
        r#"{
          "problem": {
            "name": "uv",
            "g": {"form": "polynomial", "terms": [{"coef": 0.8888888888888888, "powers": [1, 1]}]},
            "kappa1": {"form": "polynomial", "terms": [{"coef": 1.0, "powers": [1, 1, 1, 1]}]},
            "kappa2": {"form": "zero"},
            "kappa3": {"form": "zero"},
            "exact": [{"coef": 1.0, "powers": [1, 1]}]
          },
          "N": 2
        }"#,
    )
    .unwrap();
    let res = sivfie("solve --grid 64 --out", &[&out, Path::new("--config"), &cfg]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    for line in std::fs::read_to_string(&out).unwrap().lines().skip(1) {
        let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-9, "{line}");
    }
}

#[test]
fn singular_system_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("singular.json");
    std::fs::write(
        &cfg,
        r#"{
          "problem": {
            "g": {"form": "polynomial", "terms": [{"coef": 1.0, "powers": [0, 0]}]},
            "kappa1": {"form": "polynomial", "terms": [{"coef": 1.0, "powers": [0, 0, 0, 0]}]},
            "kappa2": {"form": "zero"},
            "kappa3": {"form": "zero"},
            "exact": []
          },
          "N": 2
        }"#,
    )
    .unwrap();
    let out = dir.path().join("x.csv");
    let res = sivfie("solve --out", &[&out, Path::new("--config"), &cfg]);
    assert_eq!(code(&res), 2, "{}", stderr(&res));
    assert!(stderr(&res).contains("singular"));
    assert!(!out.exists());
}

#[test]
fn invalid_configuration_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for line in [
        "solve --problem 7 --N 2 --out",
        "solve --problem 1 --basis hermite --N 2 --out",
        "solve --problem 1 --N 2 --grid 1000 --out",
        "solve --problem 1 --N 2 --format xml --out",
        "solve --problem 1 --out",
        "solve --problem 1 --N 45 --out",
        "trials --problem 1 --N 2 --out",
    ] {
        assert_eq!(code(&sivfie(line, &[&out])), 3, "{line}");
    }
    let cfg = dir.path().join("bad.json");
    let with_config = |cfg: &Path| sivfie("solve --out", &[&out, Path::new("--config"), cfg]);
    std::fs::write(&cfg, r#"{"problem": 1, "N": 2, "colour": "blue"}"#).unwrap();
    assert_eq!(code(&with_config(&cfg)), 3);
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(code(&with_config(&cfg)), 3);
    assert_eq!(code(&with_config(&dir.path().join("missing.json"))), 3);
}

#[test]
fn selftest_passes() {
    let res = sivfie("selftest", &[]);
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert_eq!(code(&res), 0, "{stdout}");
    assert!(stdout.lines().count() >= 8);
    assert!(stdout.lines().all(|l| l.starts_with("[PASS]")), "{stdout}");
}
