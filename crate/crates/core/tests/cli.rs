use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sul_core::io::{from_canonical_str, read_function, to_canonical_string};
use sul_core::reps::{FunctionRep, GaussianMixture};
use sul_core::weights::{HarmonicFactor, Weight};

fn sul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sul")).args(args).env_remove("SUL_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_single_reports() {
    let out = sul(&["bounds", "--s", "-1", "--d", "8", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert!((v["sharp"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);

    let out = sul(&["bounds", "--s", "-1", "--d", "4", "--gamma", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lower"].as_f64(), Some(0.0));
    assert_eq!(v["upper_analytic"].as_f64(), Some(0.0));
}

#[test]
fn bounds_sweep_csv() {
    let out = sul(&["bounds", "--sweep", "--d", "1..24", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["s", "d", "gamma", "ell", "lower", "lower_method", "upper_analytic", "upper_numeric", "sharp"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 24);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[1].parse::<usize>().unwrap(), i + 1);
        let lower: f64 = row[4].parse().unwrap();
        let upper: f64 = row[6].parse().unwrap();
        assert!(lower <= upper, "row {i}");
    }
}

#[test]
fn sweep_output_does_not_depend_on_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_sul"))
            .args(["bounds", "--s", "both", "--d", "1..12", "--gamma", "1"])
            .env("SUL_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn construct_radius_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f0 = dir.path().join("f0.json");
    let profile = dir.path().join("profile.csv");
    let a0 = (1.0 + 1.0 / 12f64.sqrt()).to_string();
    let out = sul(&["construct", "--kind", "f0", "--d", "12", "--a", &a0, "--function-out", path(&f0), "--profile", path(&profile)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["eigen"]["eigenvalue"], "1");

    let text = std::fs::read_to_string(&f0).unwrap();
    let f = read_function(&f0).unwrap();
    assert_eq!(to_canonical_string(&f).unwrap(), text);
    assert!(!dir.path().join("f0.json.tmp").exists());
    assert_eq!(std::fs::read_to_string(&profile).unwrap().lines().count(), 401);

    let out = sul(&["radius", "--function", path(&f0), "--assert-max", "1.57", "--assert-min", "1.4142135623"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["radius"]["r"].as_f64().unwrap();
    assert!(r > 2f64.sqrt() && r < 1.57);

    let out = sul(&["radius", "--function", path(&f0), "--assert-max", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    let failures: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(failures["failures"][0]["assertion"], "radius <= assert_max");
}

#[test]
fn radius_report_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let f: FunctionRep = GaussianMixture::new(2, HarmonicFactor::ONE, vec![(1.0, 1.0)]).unwrap().into();
    std::fs::write(&g, to_canonical_string(&f).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let out = sul(&["radius", "--function", path(&g), "--out", path(&report)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["radius"]["r"].as_f64(), Some(0.0));
    assert_eq!(v["radius"]["sign_at_infinity"], 1);
}

#[test]
fn weight_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let wpath = dir.path().join("w.json");
    let w = Weight::new(4, HarmonicFactor::coordinate_product(2), 0.5, false).unwrap();
    std::fs::write(&wpath, to_canonical_string(&w).unwrap()).unwrap();
    let back: Weight = from_canonical_str(&std::fs::read_to_string(&wpath).unwrap()).unwrap();
    assert_eq!(back, w);
    let out = sul(&["bounds", "--s", "+1", "--d", "4", "--weight", path(&wpath)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["ell"], 2);
}

#[test]
fn shift_lift_of_x1x2_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("h.json");
    let dst = dir.path().join("lifted.json");
    let f: FunctionRep = GaussianMixture::new(8, HarmonicFactor::coordinate_product(2), vec![(1.0, 0.5), (-2.0, 1.5)]).unwrap().into();
    std::fs::write(&src, to_canonical_string(&f).unwrap()).unwrap();
    let out = sul(&["shift", "--lift", "--ell", "2", "--d", "8", "--s", "+1", "--function", path(&src), "--function-out", path(&dst)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["record"]["target_dim"], 12);
    assert_eq!(v["record"]["sign_out"], -1);
    let lifted = read_function(&dst).unwrap();
    assert_eq!(lifted.d(), 12);
    assert!(lifted.harmonic().is_one());

    let out = sul(&["shift", "--lift", "--ell", "3", "--function", path(&src)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_and_demo_pass() {
    let out = sul(&["verify", "--suite", "bochner"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"][0]["passed"], true);
    let out = sul(&["demo-nazarov"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["increasing"], true);
}

#[test]
fn optimize_plus_one_in_twelve() {
    let dir = tempfile::tempdir().unwrap();
    let wit = dir.path().join("w.json");
    let out = sul(&["optimize", "--s", "+1", "--d", "12", "--N", "40", "--function-out", path(&wit)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let r = v["r_upper"].as_f64().unwrap();
    assert!(r >= 2f64.sqrt() - 1e-3);
    let again = sul(&["radius", "--function", path(&wit)]);
    assert_eq!(json(&again)["radius"]["r"].as_f64(), Some(r));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sul(&["bounds", "--d", "0"]).status.code(), Some(2));
    assert_eq!(sul(&["bounds", "--d", "3", "--gamma", "-5"]).status.code(), Some(2));
    assert_eq!(sul(&["optimize", "--s", "+2", "--d", "3"]).status.code(), Some(2));
    assert_eq!(sul(&["nonsense"]).status.code(), Some(2));
    assert_eq!(sul(&["--help"]).status.code(), Some(0));
}
