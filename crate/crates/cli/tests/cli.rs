use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_lateral-casimir");

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .env("LATERAL_CASIMIR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    let i = header.split(',').position(|h| h == name || h.starts_with(&format!("{name} ["))).unwrap();
    data_rows(csv).iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn every_scenario_verb_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "small.cfg",
        "[grid]\nz = log(1e-8, 1e-6, 3) m\nkz = lin(0.5, 5, 3)\nx = lin(0, 4, 3) um\nradius = 0, 0.5 um\n",
    );
    for verb in ["plane", "kernel-sweep", "rho-sweep", "lateral-curve", "shift-sweep", "bec-sweep"] {
        let o = run(&["--config", &cfg, verb], dir.path());
        assert!(o.status.success(), "{verb}: {}", stderr(&o));
        let text = stdout(&o);
        assert!(text.starts_with("# scenario: "), "{verb}");
        assert!(text.contains("# config_hash: "), "{verb}");
        assert!(!data_rows(&text).is_empty(), "{verb}");
    }
}

#[test]
fn csv_numbers_use_nine_significant_digits() {
    let dir = TempDir::new().unwrap();
    let o = run(&["rho-sweep"], dir.path());
    assert!(o.status.success());
    for row in data_rows(&stdout(&o)) {
        for cell in row {
            let (mantissa, exponent) = cell.split_once('e').unwrap();
            assert_eq!(mantissa.trim_start_matches('-').len(), 10, "{cell}");
            assert!(exponent.starts_with('+') || exponent.starts_with('-'));
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", "[grid]\nkz = lin(0.5, 8, 12)\n");
    let a = run(&["--config", &cfg, "shift-sweep"], dir.path());
    let b = run(&["--config", &cfg, "--workers", "1", "shift-sweep"], dir.path());
    let c = run(&["--config", &cfg, "--workers", "3", "shift-sweep"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn csv_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", "[grid]\nkz = 1, 3.55, 7\n");
    let csv = stdout(&run(&["--config", &cfg, "kernel-sweep"], dir.path()));
    let json = run(&["--config", &cfg, "--format", "json", "kernel-sweep"], dir.path());
    assert!(json.status.success());
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["metadata"]["scenario"], "kernel-sweep");
    let rho = column(&csv, "rho");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), rho.len());
    let names: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let i = names.iter().position(|n| *n == "rho").unwrap();
    for (r, expected) in rows.iter().zip(&rho) {
        assert_eq!(r[i].as_f64().unwrap(), *expected);
    }
    // sinusoidal corrugation at the reference period: rho ≈ 0.28
    assert!((rho[1] - 0.28).abs() < 0.03, "{}", rho[1]);
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("plane.csv");
    let o = run(&["--output", out.to_str().unwrap(), "plane"], dir.path());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("U0"));
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "e.cfg", "[grid]\nkz = []\n");
    let o = run(&["--config", &cfg, "shift-sweep"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(data_rows(&text).is_empty());
    assert!(text.lines().any(|l| l.starts_with("kz")));
}

#[test]
fn missing_unit_names_the_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "u.cfg", "# trap\n[trap]\n\nz_cm = 2\n");
    let o = run(&["--config", &cfg, "shift-sweep"], dir.path());
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("line 4") && err.contains("z_cm"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_kernel_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "k.cfg", "[kernel]\nkind = nonsense\n");
    let o = run(&["--config", &cfg, "rho-sweep"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("nonsense"));
}

#[test]
fn condensate_larger_than_distance_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "b.cfg", "[grid]\nradius = 0, 2.5 um\n");
    let o = run(&["--config", &cfg, "bec-sweep"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn invalid_workers_fail() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--workers", "0", "rho-sweep"], dir.path());
    assert!(!o.status.success());
}

fn drude_epsilon_loss(w: f64) -> f64 {
    let (wp, g) = (1.37e16, 5.32e13);
    wp * wp * g / (w * (w * w + g * g))
}

fn drude_file() -> String {
    let mut s = String::from("# synthetic Drude metal\n");
    for i in 0..=400 {
        let w = 10f64.powf(9.0 + 11.0 * i as f64 / 400.0);
        s.push_str(&format!("{w:e} {:e}\n", drude_epsilon_loss(w)));
    }
    s
}

#[test]
fn optical_ingest_matches_closed_form_and_caches() {
    let dir = TempDir::new().unwrap();
    let cache = TempDir::new().unwrap();
    let src = write(&dir, "drude.dat", &drude_file());
    let o = run(&["ingest-optical", &src], cache.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let entry = cache.path().join("drude.dat.imag.dat");
    let text = std::fs::read_to_string(&entry).unwrap();
    assert!(text.contains("# source-sha256: "));
    let mut checked = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.contains(':')) {
        let mut it = line.split_whitespace().map(|c| c.parse::<f64>().unwrap());
        let (xi, eps) = (it.next().unwrap(), it.next().unwrap());
        if (1e12..=1e17).contains(&xi) {
            let exact = 1.0 + 1.37e16f64.powi(2) / (xi * (xi + 5.32e13));
            assert!(((eps - exact) / exact).abs() < 0.01, "xi {xi}: {eps} vs {exact}");
            checked += 1;
        }
    }
    assert!(checked > 5);

    // a material table in a run reuses the cache
    let cfg = write(&dir, "m.cfg", "[material]\nmodel = table\ntable = drude.dat\n[grid]\nz = 1e-7, 1e-6 m\n");
    let before = std::fs::metadata(&entry).unwrap().modified().unwrap();
    let o = run(&["--config", &cfg, "plane"], cache.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::metadata(&entry).unwrap().modified().unwrap(), before);
}

#[test]
fn malformed_optical_row_names_the_line() {
    let dir = TempDir::new().unwrap();
    let src = write(&dir, "bad.dat", "# header\n1e12 3.0\n2e12 oops\n");
    let o = run(&["ingest-optical", &src], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains('3'), "{}", stderr(&o));
}

#[test]
fn duplicate_frequencies_are_reported() {
    let dir = TempDir::new().unwrap();
    let mut text = drude_file();
    text.push_str(&format!("1e13 {:e}\n", drude_epsilon_loss(1e13) * 1.01));
    text.push_str(&format!("1e13 {:e}\n", drude_epsilon_loss(1e13) * 0.99));
    let src = write(&dir, "dup.dat", &text);
    let o = run(&["ingest-optical", &src], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("# warning"));
    assert!(stderr(&o).contains("duplicate"));
}

#[test]
fn polarizability_ingest_reports_static_value() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("units: au\n");
    for i in 0..60 {
        let xi = if i == 0 { 0.0 } else { 1e13 * 1.3f64.powi(i) };
        let w0 = 2.414e15;
        text.push_str(&format!("{xi:e} {:e}\n", 318.6 / (1.0 + (xi / w0).powi(2))));
    }
    let src = write(&dir, "alpha.dat", &text);
    let o = run(&["--format", "json", "ingest-polarizability", &src], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let alpha = v["rows"][0][1].as_f64().unwrap();
    assert!((alpha / (318.6 * 1.64877727436e-41) - 1.0).abs() < 1e-8);
}
