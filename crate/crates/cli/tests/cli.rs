use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use beaches::numerics::{format_complex_csv, parse_complex_csv};
use beaches::{steering_vector, C64};

fn beaches(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beaches")).args(args).output().expect("spawn beaches")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn split_footer(text: &str) -> (Vec<C64>, &str) {
    let body_end = text.trim_end().rfind('\n').unwrap();
    (parse_complex_csv(&text[..body_end]).unwrap(), text[body_end + 1..].trim_end())
}

#[test]
fn noiseless_single_path_is_reproduced() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("y.csv");
    let y: Vec<C64> = steering_vector::<f64>(0.9, 64).into_iter().map(|z| z * C64::new(0.8, -0.3)).collect();
    fs::write(&input, format_complex_csv(&y)).unwrap();

    let out = beaches(&["denoise", input.to_str().unwrap(), "--e0", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let (h, footer) = split_footer(&text);
    assert_eq!(h.len(), 64);
    for (a, b) in h.iter().zip(&y) {
        assert!((a - b).norm() < 1e-9);
    }
    assert!(footer.starts_with("tau_star=0.0,sure_min="), "{footer}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("noisy_b64.csv");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("out{i}.csv"));
        let o = beaches(&["denoise", input.to_str().unwrap(), "--e0", "0.1", "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn golden_outputs() {
    let input = fixture("noisy_b64.csv");
    for (variant, golden) in [("exact", "noisy_b64_exact.golden.csv"), ("hw", "noisy_b64_hw.golden.csv")] {
        let o = beaches(&["denoise", input.to_str().unwrap(), "--e0", "0.1", "--variant", variant]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), fs::read_to_string(fixture(golden)).unwrap(), "{variant}");
    }
}

#[test]
fn malformed_csv_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "1,0\n0,1\n1;2\n0,0\n").unwrap();
    let o = beaches(&["denoise", input.to_str().unwrap(), "--e0", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn non_power_of_two_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("six.csv");
    fs::write(&input, "1,0\n".repeat(6)).unwrap();
    let o = beaches(&["denoise", input.to_str().unwrap(), "--e0", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("power of two"), "{}", stderr(&o));
}

fn write_config(dir: &Path, estimators: &str, trials: usize) -> PathBuf {
    let path = dir.join("cfg.json");
    let text = format!(
        r#"{{"B": 64, "U": 4, "constellation": "16QAM", "snr_db": [-5, 0, 5], "trials": {trials},
            "estimators": [{estimators}], "seed": 11}}"#
    );
    fs::write(&path, text).unwrap();
    path
}

fn sweep_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("snr_db,estimator,ber,mse,trials,seed"));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sweep_perfect_csi_has_zero_mse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#""perfect-csi""#, 1);
    let o = beaches(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = sweep_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r[1], "perfect-csi");
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[4], "1");
        assert_eq!(r[5], "11");
    }
}

#[test]
fn sweep_ml_mse_matches_noise_variance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#""ml""#, 100);
    let o = beaches(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for r in sweep_rows(&stdout(&o)) {
        let snr: f64 = r[0].parse().unwrap();
        let e0 = 10f64.powf(-snr / 10.0);
        let mse: f64 = r[3].parse().unwrap();
        // 100 trials × 4 users × 64 entries: relative SE ≈ 0.3%
        assert!((mse / e0 - 1.0).abs() < 0.02, "{snr}: {mse} vs {e0}");
    }
}

#[test]
fn sweep_is_independent_of_threads_and_honours_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#""ml", "beaches-hw", "beaches-fixedpoint""#, 6);
    let cfg = cfg.to_str().unwrap();
    let one = beaches(&["sweep", "--config", cfg, "--threads", "1"]);
    let four = beaches(&["sweep", "--config", cfg, "--threads", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let other = beaches(&["sweep", "--config", cfg, "--seed", "12"]);
    let rows = sweep_rows(&stdout(&other));
    assert!(rows.iter().all(|r| r[5] == "12"));
    assert_ne!(other.stdout, one.stdout);
}

#[test]
fn sweep_unknown_estimator_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#""lasso""#, 1);
    let o = beaches(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("lasso") && err.contains("beaches-fixedpoint") && err.contains("oracle-mse"), "{err}");
}

#[test]
fn sweep_missing_config_is_io_error() {
    let o = beaches(&["sweep", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_fft_passes() {
    let o = beaches(&["validate", "fft"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS fft::unitarity"), "{text}");
    assert!(text.contains("PASS fft::round_trip"), "{text}");
}

#[test]
fn validate_unknown_suite_is_config_error() {
    let o = beaches(&["validate", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_csv() {
    let o = beaches(&["bench", "--sizes", "64,128", "--reps", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("B,median_ns_per_denoise"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("64,") && rows[1].starts_with("128,"));
    assert!(stderr(&o).contains("R²"));
}

#[test]
fn bench_rejects_non_power_of_two() {
    let o = beaches(&["bench", "--sizes", "100"]);
    assert_eq!(o.status.code(), Some(2));
}
