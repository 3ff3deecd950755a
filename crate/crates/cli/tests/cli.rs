use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

const SMALL: &str = r#"
[array]
n_elements = 60
radius_m = 0.5
[map]
step_lambda = 0.1
line_step_lambda = 0.02
[scan]
start_lambda = -2.0
stop_lambda = 2.0
step_lambda = 0.5
"#;

fn nff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nff"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = nff(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn default_gain_scan_has_minimum_at_center() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    run_ok(&["scan-gain", "--out", out.to_str().unwrap()]);
    let text = fs::read_to_string(out.join("gain.csv")).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "x_f_m,x_f_lambda,peak_field_vpm,gain_db,peak_loc_m"
    );
    let rows = rows(&out.join("gain.csv"));
    assert_eq!(rows.len(), 141);
    let g: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    let imin = (0..g.len()).min_by(|&a, &b| g[a].total_cmp(&g[b])).unwrap();
    assert_eq!(rows[imin][1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn field20_doubles_gain() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run_ok(&["scan-gain", "--config", &cfg, "--out", a.to_str().unwrap()]);
    run_ok(&[
        "scan-gain",
        "--config",
        &cfg,
        "--out",
        b.to_str().unwrap(),
        "--db-convention",
        "field20",
    ]);
    for (ra, rb) in rows(&a.join("gain.csv"))
        .iter()
        .zip(rows(&b.join("gain.csv")))
    {
        let (ga, gb): (f64, f64) = (ra[3].parse().unwrap(), rb[3].parse().unwrap());
        assert!((gb - 2.0 * ga).abs() < 1e-9, "{ga} {gb}");
    }
    assert_eq!(manifest(&b)["db_convention"], "field20");
}

#[test]
fn outputs_are_identical_across_runs_and_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    for exp in ["map", "scan-width", "scan-sll"] {
        let mut digests = Vec::new();
        for (i, threads) in ["1", "4", "4"].iter().enumerate() {
            let out = tmp.path().join(format!("{exp}-{i}"));
            run_ok(&[
                exp,
                "--config",
                &cfg,
                "--out",
                out.to_str().unwrap(),
                "--threads",
                threads,
            ]);
            let m = manifest(&out);
            digests.push(m["outputs"].clone());
        }
        assert_eq!(digests[0], digests[1], "{exp}");
        assert_eq!(digests[1], digests[2], "{exp}");
    }
}

#[test]
fn manifest_lists_every_file_with_its_digest() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("o");
    run_ok(&["map", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let m = manifest(&out);
    let listed: Vec<&str> = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["path"].as_str().unwrap())
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    on_disk.sort();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(sorted, on_disk);
    assert_eq!(sorted, ["field_map.csv", "line_x.csv", "line_y.csv"]);
    for o in m["outputs"].as_array().unwrap() {
        let body = fs::read(out.join(o["path"].as_str().unwrap())).unwrap();
        assert_eq!(
            hex::encode(Sha256::digest(&body)),
            o["sha256"].as_str().unwrap()
        );
        assert_eq!(body.len() as u64, o["bytes"].as_u64().unwrap());
    }
    assert_eq!(m["status"], "ok");
    assert_eq!(m["experiment"], "map");
}

#[test]
fn echoed_config_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    run_ok(&["scan-sll", "--config", &cfg, "--out", a.to_str().unwrap()]);
    let echo = manifest(&a)["config"].as_str().unwrap().to_owned();
    let cfg2 = tmp.path().join("echo.toml");
    fs::write(&cfg2, &echo).unwrap();
    let b = tmp.path().join("b");
    run_ok(&[
        "scan-sll",
        "--config",
        cfg2.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    let mb = manifest(&b);
    assert_eq!(mb["config"].as_str().unwrap(), echo);
    assert_eq!(manifest(&a)["outputs"], mb["outputs"]);
}

#[test]
fn closed_form_bessel_matches_quadrature() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    run_ok(&["closed-form", "--out", out.to_str().unwrap()]);
    let rows = rows(&out.join("closed_form.csv"));
    assert_eq!(rows.len(), 301);
    let mut worst: f64 = 0.0;
    for r in &rows {
        let v: Vec<f64> = r.iter().map(|s| s.parse().unwrap()).collect();
        if v[0] <= 2.0 + 1e-9 {
            worst = worst.max((v[3] - v[4]).abs());
        }
    }
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn several_arrays_get_labelled_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
        [[arrays]]
        label = "full"
        radius_m = 0.5
        n_elements = 60
        [[arrays]]
        label = "half"
        kind = "half-circle"
        radius_m = 0.5
        n_elements = 60
        [scan]
        start_lambda = -1.0
        stop_lambda = 1.0
        step_lambda = 0.5
        "#,
    );
    let out = tmp.path().join("o");
    run_ok(&[
        "scan-gain",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(rows(&out.join("gain_full.csv")).len(), 5);
    assert_eq!(rows(&out.join("gain_half.csv")).len(), 5);
}

#[test]
fn bad_config_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[scan]\nstep_lambda = 0\n");
    let out = nff(&[
        "scan-gain",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("scan.step_lambda"));

    let cfg = write_config(tmp.path(), "[array]\nradius_m = -1\n");
    let out = nff(&["map", "--config", &cfg]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius"));
}

#[test]
fn unresolvable_widths_exit_nonzero_with_partial_outputs() {
    let tmp = TempDir::new().unwrap();
    // valid region of radius 0.15λ is narrower than the main lobe
    let cfg = write_config(
        tmp.path(),
        r#"
        [array]
        n_elements = 16
        radius_m = 0.06
        margin_lambda = 0.15
        [scan]
        start_lambda = 0.0
        stop_lambda = 0.0
        "#,
    );
    let out = tmp.path().join("o");
    let res = nff(&[
        "scan-width",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(manifest(&out)["status"], "partial");
    let rows = rows(&out.join("width.csv"));
    assert_eq!(rows, vec![vec!["0", "nan", "nan", "false"]]);
}

#[test]
fn validate_writes_report() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let res = run_ok(&["validate", "--out", out.to_str().unwrap()]);
    let report = fs::read_to_string(out.join("validation.txt")).unwrap();
    assert!(report.contains("8/8 checks passed"), "{report}");
    assert!(!report.contains("FAIL"));
    assert!(String::from_utf8_lossy(&res.stdout).contains("center field"));
}
