use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn nal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nal")).args(args).env("NAL_THREADS", "2").output().expect("nal runs")
}

fn report(args: &[&str]) -> Value {
    let out = nal(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn field(v: &Value, k: &str) -> f64 {
    v[k].as_f64().unwrap_or_else(|| panic!("missing {k} in {v}"))
}

#[test]
fn jacobian_command() {
    let v = report(&["jacobian", "--norm", "sup", "--area", "busemann"]);
    assert!((field(&v, "jacobian") - PI / 4.0).abs() < 1e-4);
    assert_eq!(v["resolution"], 256);
    assert!((field(&report(&["jacobian", "--norm", "euclid", "--area", "mass-star"]), "jacobian") - 1.0).abs() < 1e-4);
    assert!((field(&report(&["jacobian", "--norm", "ellipse:1,0,1", "--area", "inscribed"]), "jacobian") - 1.0).abs() < 1e-6);
}

#[test]
fn induced_command() {
    let v = report(&["induced", "--norm", "sup", "--energy", "reshetnyak"]);
    assert!((field(&v, "induced") - 1.0).abs() < 1e-4);
    let v = report(&["induced", "--norm", "euclid", "--energy", "dirichlet"]);
    assert!((field(&v, "induced") - 1.0).abs() < 1e-9);
    assert_eq!(field(&v, "lambda"), 0.5);
    let v = report(&["induced", "--norm", "sup", "--energy", "dirichlet"]);
    let jd = field(&v, "induced");
    assert!((jd - PI / 4.0).abs() > 1e-2 && (jd - 2.0 / PI).abs() > 1e-2);
    assert_eq!(v["minimizer"].as_array().unwrap().len(), 4);
    assert!(v["certified_bracket"].is_number());
}

#[test]
fn qmu_command() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let v = report(&["qmu", "--area", "busemann", "--family", "perturbed-square", "--csv", csv.to_str().unwrap()]);
    assert!((field(&v, "inf") - PI / 4.0).abs() < 1e-4);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("parameter,q_ratio,jacobian,inscribed\n"));
    assert_eq!(text.lines().count(), 1 + v["samples"].as_u64().unwrap() as usize);
    assert!((field(&report(&["qmu", "--area", "inscribed", "--family", "any"]), "inf") - 1.0).abs() < 1e-9);
    let v = report(&["qmu", "--area", "mass-star", "--family", "perturbed-hexagon"]);
    assert!((field(&v, "inf") - 3f64.sqrt() / 2.0).abs() < 1e-4);
}

#[test]
fn plateau_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("disc.svg");
    let v = report(&["plateau", "--target", "euclid", "--boundary", "circle", "--mesh-level", "4", "--svg", svg.to_str().unwrap()]);
    assert_eq!(v["converged"], true);
    for def in ["busemann", "ht", "mass-star", "inscribed", "induced"] {
        assert!((v["area_by_def"][def].as_f64().unwrap() - PI).abs() < 1e-2, "{def}: {v}");
    }
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn plateau_from_a_boundary_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.txt");
    std::fs::write(&path, "# unit square\n1 1\n-1 1\n-1 -1\n1 -1\n1 1\n").unwrap();
    let v = report(&["plateau", "--boundary", path.to_str().unwrap(), "--mesh-level", "3", "--energy", "dirichlet", "--seed", "4"]);
    assert_eq!(v["seed"], 4);
    assert!((v["area_by_def"]["induced"].as_f64().unwrap() - (0.5 * field(&v, "energy") - field(&v, "gap"))).abs() < 1e-9);
}

#[test]
fn plateau_flags_an_unresolved_boundary() {
    let out = nal(&["plateau", "--mesh-level", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["converged"], false);
    assert_eq!(v["boundary_resolved"], false);
}

#[test]
fn verify_command() {
    let out = nal(&["verify", "--only", "q"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("q-busemann-square") && !table.contains("lambda-dirichlet"));
    let v = report(&["verify", "--only", "jd", "--json"]);
    assert_eq!(v["pass"], true);
    let check = &v["checks"][0];
    assert!(check["details"]["value"].is_number() && check["details"]["bracket"].is_number());
    assert!(check.get("runtime_s").is_none());
    assert_eq!(nal(&["verify", "--only", "nothing"]).status.code(), Some(1));
}

#[test]
fn output_is_byte_identical() {
    let args = ["plateau", "--mesh-level", "2", "--seed", "9", "--energy", "dirichlet"];
    assert_eq!(nal(&args).stdout, nal(&args).stdout);
    let args = ["qmu", "--area", "ht", "--family", "random:6", "--budget", "60", "--seed", "3"];
    let a = nal(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_nal")).args(args).env("NAL_THREADS", "1").output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn figure_command() {
    let out = nal(&["figure", "--norm", "hexagon"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success() && svg.contains("id=\"loewner\"") && svg.contains("id=\"parallelogram\""));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["jacobian", "--norm", "blob", "--area", "ht"][..],
        &["frobnicate"],
        &["jacobian", "--norm", "sup"],
        &["plateau", "--boundary", "/no/such/file"],
    ] {
        let out = nal(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
