//! End-to-end runs of the `spectra` binary.

mod common;

use common::{fixture, spectra};
use spectra_cli::commands::{
    BandsReport, StatsReport, TraceReport, VerifyReport, BANDS_SCHEMA, STATS_SCHEMA, TRACE_SCHEMA,
    VERIFY_SCHEMA,
};
use spectra_cli::RunConfig;
use std::fs;
use std::process::Output;

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit status")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn header_config(csv: &str) -> RunConfig {
    let line = csv
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .expect("config header");
    serde_json::from_str(line).expect("config header parses")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&spectra(&["--help"])), 0);
    assert_eq!(code(&spectra(&["--version"])), 0);
}

#[test]
fn unknown_flag_exits_one() {
    let o = spectra(&["bands", "--model", "I", "--bogus", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn invalid_values_exit_one() {
    for args in [
        &["bands", "--model", "VII"][..],
        &["bands", "--model", "I", "--a", "-1"],
        &["bands", "--model", "I", "--kmin", "5", "--kmax", "2"],
        &["bands", "--model", "I", "--resolution", "3"],
        &["bands", "--model", "III", "--d", "1"],
        &["bands"],
    ] {
        let o = spectra(args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("error"), "{args:?}");
    }
}

#[test]
fn malformed_config_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"model\": \"I\",\n  \"a\": oops\n}\n").unwrap();
    let o = spectra(&["bands", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn unknown_config_field_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    fs::write(&path, r#"{"model": "I", "colour": "blue"}"#).unwrap();
    let o = spectra(&["bands", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn missing_config_file_exits_one() {
    let o = spectra(&["bands", "--config", "/nonexistent/run.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn flags_override_config_file() {
    let cfg = fixture("example_i.json");
    let o = spectra(&[
        "bands",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--kmax",
        "7",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: BandsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.config.alpha, 0.5);
    assert_eq!(r.config.k_max, 7.0);
    assert_eq!(r.config.a, 1.0);
    assert_eq!(r.config.d, Some(1.0));
    assert!(r.bands.iter().all(|b| b.k_hi <= 7.0));
}

#[test]
fn bands_json_has_schema_and_energies() {
    let o = spectra(&["bands", "--model", "I", "--kmax", "15"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: BandsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.schema, BANDS_SCHEMA);
    assert!(!r.bands.is_empty());
    for b in &r.bands {
        assert!(b.k_lo < b.k_hi);
        assert!((b.z_lo - b.k_lo * b.k_lo).abs() <= 1e-12 * b.z_lo.max(1.0));
        assert!((b.z_hi - b.k_hi * b.k_hi).abs() <= 1e-12 * b.z_hi.max(1.0));
    }
    assert_eq!(
        r.gaps.len() + 1,
        r.bands.len()
            + usize::from(r.bands[0].k_lo > r.config.k_min)
            + usize::from(r.bands.last().unwrap().k_hi < r.config.k_max)
    );
}

#[test]
fn csv_header_reproduces_report() {
    let o = spectra(&["bands", "--model", "V", "--kmax", "12", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = stdout(&o);
    assert!(first.starts_with(&format!("# schema: {BANDS_SCHEMA}")));
    let cfg = header_config(&first);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let again = spectra(&["bands", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&again), 0, "{}", stderr(&again));
    assert_eq!(stdout(&again), first);
}

#[test]
fn trace_csv_row_count_matches_grid() {
    for model in ["II", "VI"] {
        let o = spectra(&[
            "trace",
            "--model",
            model,
            "--kmax",
            "8",
            "--resolution",
            "32",
            "--format",
            "csv",
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let text = stdout(&o);
        let grid: usize = text
            .lines()
            .find_map(|l| l.strip_prefix("# grid_size: "))
            .unwrap()
            .parse()
            .unwrap();
        let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
        assert_eq!(rows, grid, "{model}");
    }
}

#[test]
fn trace_json_quantity_per_geometry() {
    for (model, quantity) in [("I", "cos_theta"), ("V", "torus_range")] {
        let o = spectra(&[
            "trace",
            "--model",
            model,
            "--kmax",
            "6",
            "--resolution",
            "16",
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let r: TraceReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r.schema, TRACE_SCHEMA);
        assert_eq!(r.quantity, quantity);
        assert_eq!(r.rows.len(), r.grid_size);
        assert!(r.rows.windows(2).all(|w| w[0].k < w[1].k));
        for row in &r.rows {
            assert_eq!(row.value.is_none(), row.guard);
            if quantity == "torus_range" && !row.guard {
                assert!(row.value.unwrap() <= row.value2.unwrap());
            }
        }
    }
}

#[test]
fn out_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bands.json");
    let o = spectra(&[
        "bands",
        "--model",
        "I",
        "--kmax",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let r: BandsReport = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.config.out.as_deref(), Some(path.as_path()));
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1, "temporary files left behind");
}

#[test]
fn out_into_missing_directory_exits_one() {
    let o = spectra(&[
        "bands",
        "--model",
        "I",
        "--kmax",
        "5",
        "--out",
        "/nonexistent/dir/x.json",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_verified_exits_zero() {
    let o = spectra(&["verify", "--model", "I"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.schema, VERIFY_SCHEMA);
    assert!(r.sphere_poles_above_k >= r.required_poles);
}

#[test]
fn verify_short_range_exits_two() {
    let o = spectra(&["verify", "--model", "I", "--kmax", "3"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.sphere_poles_above_k < r.required_poles);
}

#[test]
fn verify_violations_exit_three() {
    let o = spectra(&["verify", "--model", "III", "--format", "csv"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# verdict: violations"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert!(rows > 0);
}

#[test]
fn stats_short_range_exits_two() {
    let o = spectra(&["stats", "--model", "I", "--kmax", "4"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn stats_both_regimes() {
    let o = spectra(&["stats", "--model", "I", "--both-regimes"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: StatsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.schema, STATS_SCHEMA);
    assert_eq!(r.fits.len(), 2);
    assert_ne!(r.fits[0].regime, r.fits[1].regime);
    assert!(r.rows.windows(2).all(|w| w[0].n < w[1].n));

    let single = spectra(&["stats", "--model", "I"]);
    let s: StatsReport = serde_json::from_str(&stdout(&single)).unwrap();
    assert_eq!(s.fits.len(), 1);
    assert_eq!(s.fits[0], r.fits[0]);
}

#[test]
fn stats_csv_lists_fits_in_header() {
    let o = spectra(&["stats", "--model", "V", "--format", "csv", "--both-regimes"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("# fit: ")).count(), 2);
    assert!(text
        .lines()
        .any(|l| l == "n,pole_k,B_n,L_n,ratio,envelope_C"));
}

#[test]
fn fixture_runs_are_reproduced() {
    for (cfg, expected) in [
        ("example_i.json", "example_i_bands.json"),
        ("example_iii.json", "example_iii_bands.json"),
    ] {
        let o = spectra(&["bands", "--config", fixture(cfg).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let got: BandsReport = serde_json::from_str(&stdout(&o)).unwrap();
        let want: BandsReport =
            serde_json::from_str(&fs::read_to_string(fixture(expected)).unwrap()).unwrap();
        assert_eq!(got, want, "{cfg}");
    }
}
