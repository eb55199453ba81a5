//! End-to-end behaviour of the `comptonlab` command line.

use std::process::Command;

use comptonlab::cli;
use comptonlab::config::{self, CONSTANTS_ENV};
use comptonlab::core::ConstantsTable;
use comptonlab::output::results_payload;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("comptonlab").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_comptonlab"));
    c.env_remove(CONSTANTS_ENV);
    c
}

#[test]
fn every_subcommand_reports_metadata() {
    let cases: &[(&str, &[&str])] = &[
        ("constants", &["constants"]),
        ("walk", &["walk", "--steps", "10", "--walkers", "10"]),
        ("nelson", &["nelson", "--walkers", "200", "--t-end", "0.5"]),
        ("dirac", &["dirac", "--t-end", "10", "--sample-dt", "0.1"]),
        ("kerr-newman", &["kerr-newman", "--particle", "electron"]),
        (
            "cosmo",
            &["cosmo", "--tau", "1", "--t-end", "10", "--dt", "1"],
        ),
        ("audit", &["audit"]),
    ];
    for (name, args) in cases {
        let v = json(args);
        let meta = &v["metadata"];
        assert_eq!(meta["subcommand"], *name);
        assert_eq!(meta["artifact_version"], env!("CARGO_PKG_VERSION"));
        assert!(meta["wall_time"].as_f64().unwrap() >= 0.0);
        assert!(meta.get("seed").is_some() && meta.get("rng_name").is_some());
        assert!(v["results"].is_object());
    }
}

#[test]
fn zero_step_walk_stays_at_origin() {
    let r = run(&[
        "walk",
        "--steps",
        "0",
        "--walkers",
        "10",
        "--seed",
        "7",
        "--output",
        "csv",
    ]);
    assert_eq!(r.code, 0);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("walker_index,x,y,z,r2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(*row, format!("{i},0.0,0.0,0.0,0.0"));
    }
}

#[test]
fn csv_headers_are_fixed() {
    let header = |args: &[&str]| run(args).stdout.lines().next().unwrap().to_string();
    assert_eq!(
        header(&["walk", "--dim", "1", "--walkers", "2", "--output", "csv"]),
        "walker_index,x,r2"
    );
    assert_eq!(
        header(&["walk", "--dim", "2", "--walkers", "2", "--output", "csv"]),
        "walker_index,x,y,r2"
    );
    assert_eq!(
        header(&[
            "nelson",
            "--walkers",
            "20",
            "--t-end",
            "0.1",
            "--output",
            "csv"
        ]),
        "walker_index,x_final"
    );
    assert_eq!(
        header(&["dirac", "--t-end", "1", "--output", "csv"]),
        "t,mean_x,norm"
    );
    assert_eq!(
        header(&["cosmo", "--tau", "1", "--t-end", "1", "--output", "csv"]),
        "t,N"
    );
}

#[test]
fn identical_commands_give_identical_payloads() {
    let cases: &[&[&str]] = &[
        &["walk", "--steps", "300", "--walkers", "500", "--seed", "3"],
        &[
            "nelson",
            "--model",
            "free",
            "--walkers",
            "500",
            "--dt",
            "0.01",
            "--t-end",
            "1",
            "--seed",
            "9",
        ],
        &[
            "dirac",
            "--method",
            "checkerboard",
            "--t-end",
            "5",
            "--sample-dt",
            "0.125",
        ],
        &["cosmo", "--tau", "2", "--t-end", "100"],
        &["audit"],
    ];
    for args in cases {
        let a = run(args).stdout;
        let b = run(args).stdout;
        assert_eq!(
            results_payload(&a).unwrap(),
            results_payload(&b).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn worker_count_does_not_change_payloads() {
    let walk = ["walk", "--steps", "200", "--walkers", "3000", "--seed", "1"];
    let nelson = [
        "nelson",
        "--walkers",
        "3000",
        "--t-end",
        "0.5",
        "--seed",
        "1",
    ];
    for args in [&walk[..], &nelson[..]] {
        let one = run(&[&["--threads", "1"], args].concat()).stdout;
        let four = run(&[&["--threads", "4"], args].concat()).stdout;
        assert_eq!(results_payload(&one), results_payload(&four));
    }
}

#[test]
fn bad_numbers_exit_two_before_running() {
    let cases: &[&[&str]] = &[
        &["walk", "--step-length", "0"],
        &["walk", "--step-length", "nan"],
        &["walk", "--dim", "4"],
        &["walk", "--walkers", "0"],
        &["walk", "--steps", "-3"],
        &["nelson", "--dt", "0"],
        &["nelson", "--omega", "-1"],
        &["nelson", "--omega", "100", "--dt", "0.01"],
        &["nelson", "--t-end", "inf"],
        &["nelson", "--bins", "0"],
        &["nelson", "--particle", "graviton"],
        &["dirac", "--m", "0"],
        &["dirac", "--dx", "-0.1"],
        &["dirac", "--extent", "10.3"],
        &["kerr-newman", "--mass", "0"],
        &["kerr-newman"],
        &["cosmo", "--tau", "0"],
        &["cosmo", "--N0", "-1"],
        &["cosmo", "--t-end", "-5"],
        &["audit", "--N", "0"],
        &["audit", "--R", "-1e28"],
        &["--threads", "0", "constants"],
        &["frobnicate"],
        &["walk", "--bogus"],
        &[],
    ];
    for args in cases {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.stdout.is_empty(), "{args:?}");
        assert!(!r.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_go_to_stdout() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    for sub in [
        "constants",
        "walk",
        "nelson",
        "dirac",
        "kerr-newman",
        "cosmo",
        "audit",
    ] {
        assert!(r.stdout.contains(sub), "{sub}");
    }
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn default_audit_passes() {
    let v = json(&["audit", "--R", "1e28", "--N", "1e80", "--particle", "pion"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        if row["structural"].as_bool().unwrap() {
            assert!(row["residual_dex"].as_f64().unwrap().abs() <= 1.0);
        }
    }
    assert_eq!(v["metadata"]["seed"], Value::Null);
}

#[test]
fn walk_json_carries_seed_and_rng() {
    let v = json(&["walk", "--steps", "50", "--walkers", "100", "--seed", "42"]);
    assert_eq!(v["metadata"]["seed"], 42);
    assert_eq!(v["metadata"]["rng_name"], comptonlab::core::rng::RNG_NAME);
    assert_eq!(v["results"]["ensemble"]["walkers"], 100);
    assert_eq!(v["results"]["expected_rms"].as_f64().unwrap(), 50f64.sqrt());
}

#[test]
fn nelson_reports_both_conventions() {
    let v = json(&[
        "nelson",
        "--particle",
        "electron",
        "--model",
        "harmonic",
        "--omega",
        "1e3",
        "--dt",
        "1e-5",
        "--t-end",
        "1e-3",
        "--walkers",
        "500",
        "--convention",
        "paper",
    ]);
    let d = &v["results"]["diffusion"];
    let hbar_over_m = 1.055e-27 / 9.109e-28;
    assert!((d["nu"].as_f64().unwrap() / hbar_over_m - 1.0).abs() < 1e-12);
    assert!((d["nelson_nu"].as_f64().unwrap() / (0.5 * hbar_over_m) - 1.0).abs() < 1e-12);
    assert_eq!(d["convention"], "compton");
}

#[test]
fn kerr_newman_literal_charge_flag() {
    // G Q^2 / c^4 ~ 8e30 cm^2 swamps (GM/c^2)^2 ~ 6e9 cm^2; G^2 Q^2 / c^8 ~ 7e-19 does not.
    let args = ["kerr-newman", "--mass", "1e33", "--charge", "1e40"];
    let std_ = json(&args);
    let lit = json(&[&args[..], &["--literal-charge"]].concat());
    assert_eq!(std_["results"]["charge_term"], "standard");
    assert_eq!(lit["results"]["charge_term"], "literal");
    assert_eq!(
        std_["results"]["classification"]["kind"],
        "naked_singularity"
    );
    assert_eq!(lit["results"]["classification"]["kind"], "black_hole");
}

#[test]
fn dirac_cgs_electron_scales() {
    let v = json(&["dirac", "--units", "cgs"]);
    let r = &v["results"];
    let half = r["half_compton_wavelength"].as_f64().unwrap();
    assert!((half / 1.93e-11 - 1.0).abs() < 0.01);
    let z = &r["zitter"];
    let freq = r["expected_zitter_frequency"].as_f64().unwrap();
    assert!(
        (z["dominant_frequency"].as_f64().unwrap() - freq).abs()
            <= z["frequency_resolution"].as_f64().unwrap()
    );
    assert!(z["oscillation_amplitude"].as_f64().unwrap() <= 1.1 * half);
}

#[test]
fn constants_round_trip_through_the_config_format() {
    let mut table = ConstantsTable::cgs();
    table.physical.hbar = 1.0545718176461565e-27;
    table.particles[0].mass = 0.1 + 0.2;
    let text = config::write_table(&table);
    assert_eq!(config::parse_table(&text).unwrap(), table);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.txt");
    std::fs::write(&path, &text).unwrap();
    assert_eq!(config::load_table(&path).unwrap(), table);

    let v = json(&["--constants", path.to_str().unwrap(), "constants"]);
    assert_eq!(
        v["results"]["physical"]["hbar"].as_f64().unwrap(),
        1.0545718176461565e-27
    );
}

#[test]
fn constants_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    std::fs::write(&path, "version = sens-1\nparticle.kaon.mass = 8.8e-25\n").unwrap();
    let out = binary()
        .env(CONSTANTS_ENV, &path)
        .arg("constants")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["version"], "sens-1");
    assert!(v["results"]["particles"]
        .as_array()
        .unwrap()
        .iter()
        .any(|p| p["name"] == "kaon"));

    let out = binary()
        .env(CONSTANTS_ENV, dir.path().join("missing"))
        .arg("constants")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(&path, "hbar = -1\n").unwrap();
    let out = binary()
        .env(CONSTANTS_ENV, &path)
        .arg("constants")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn binary_exit_codes() {
    let ok = binary()
        .args(["kerr-newman", "--particle", "electron"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = binary().args(["walk", "--dim", "7"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
}
