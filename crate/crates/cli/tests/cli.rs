use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.conf");
    std::fs::write(&path, body).unwrap();
    path
}

fn cqed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqed")).args(args).output().unwrap()
}

const SMALL_SCAN: &str = "kappa_over_g = 5, 2\nsweep = g2d_over_kappa\nsweep_min = 0.2\nsweep_max = 2\npoints = 4\n";

#[test]
fn scan_output_is_byte_identical_across_runs_and_worker_counts() {
    let dir = scratch("scan_repeat");
    let cfg = write_config(&dir, SMALL_SCAN);
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        let out = dir.join(format!("scan{i}.csv"));
        let o =
            cqed(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--workers", workers]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.join(format!("scan{i}.csv.meta")).exists());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[0].starts_with("kappa_over_g,q_over_g,gamma_over_g,g2d_over_kappa,kappa_d,re_beta"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
}

#[test]
fn norms_puts_norm_columns_first() {
    let dir = scratch("norms");
    let cfg = write_config(&dir, &format!("{SMALL_SCAN}gamma_over_g = 0.1\n"));
    let out = dir.join("norms.csv");
    let o = cqed(&["norms", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("kappa_over_g,q_over_g,gamma_over_g,g2d_over_kappa,kappa_d,norm_out,norm_linear"));
}

#[test]
fn tight_tolerance_flags_rows_with_exit_code_two() {
    let dir = scratch("flagged");
    let cfg = write_config(&dir, SMALL_SCAN);
    let out = dir.join("scan.csv");
    let o = cqed(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains("beta error")), "{text}");
}

#[test]
fn bad_config_is_a_hard_error() {
    let dir = scratch("bad");
    for body in ["sweep = kappa_d\nsweep_min = 1\nsweep_max = 2\npoints = 3\nkappa = 5\n", "kappa_over_g 5\n"] {
        let cfg = write_config(&dir, body);
        let o = cqed(&["scan", "--config", cfg.to_str().unwrap(), "--out", dir.join("x.csv").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&o.stderr).contains("config"));
    }
    let o = cqed(&["scan", "--config", dir.join("missing.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn empty_cavity_point_reports_unit_beta() {
    let dir = scratch("single_g0");
    let cfg = write_config(&dir, "g = 0\nkappa = 2\nd = 3\n");
    let o = cqed(&["single", "--config", cfg.to_str().unwrap(), "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("beta = 1+0i"), "{stdout}");
    assert!(dir.join("out/one_photon.csv").exists() && dir.join("out/two_photon.csv.meta").exists());
}

#[test]
fn physical_units_give_the_pulse_length_in_metres() {
    let dir = scratch("single_units");
    let cfg = write_config(&dir, "g_hz = 120e6\nkappa_hz = 900e6\ng2d_over_kappa = 0.5\nexport_points = 20\n");
    let o = cqed(&["single", "--config", cfg.to_str().unwrap(), "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let metres: f64 = stdout.split("pulse length = ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((metres - 9.368).abs() < 1e-3, "{stdout}");
}

#[test]
fn pulse_writes_shape_and_overlap_tables() {
    let dir = scratch("pulse");
    let cfg = write_config(&dir, "kappa_over_g = 10\ngrid_points = 7\nzooms = 2\nsamples = 50\n");
    let o = cqed(&["pulse", "--config", cfg.to_str().unwrap(), "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let overlap = std::fs::read_to_string(dir.join("out/overlap.csv")).unwrap();
    assert_eq!(overlap.lines().count(), 1 + 49);
    assert!(std::fs::read_to_string(dir.join("out/phi.csv")).unwrap().starts_with("r,re,im\n"));
}

#[test]
fn plot_flag_emits_a_gnuplot_script() {
    let dir = scratch("plot");
    let cfg = write_config(&dir, &format!("{SMALL_SCAN}plot = true\n"));
    let out = dir.join("fig.csv");
    let o = cqed(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let script = std::fs::read_to_string(dir.join("fig.gp")).unwrap();
    assert!(script.contains("fig.csv"), "{script}");
}

#[test]
fn shipped_presets_parse() {
    let presets = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets");
    for entry in std::fs::read_dir(&presets).unwrap() {
        let path = entry.unwrap().path();
        let c = cqed::config::Config::load(&path).unwrap();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let ok = if name.starts_with("fig") {
            cqed::runs::ScanConfig::from_config(&c).is_ok()
        } else if name.starts_with("pulse") {
            cqed::runs::PulseConfig::from_config(&c).is_ok()
        } else if name.starts_with("single") {
            cqed::runs::SingleConfig::from_config(&c).is_ok()
        } else {
            cqed::runs::OracleCompareConfig::from_config(&c).is_ok()
        };
        assert!(ok, "{name}");
    }
}
