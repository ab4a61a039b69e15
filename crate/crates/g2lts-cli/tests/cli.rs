use std::path::PathBuf;
use std::process::{Command, Output};

use g2lts::lts::RealSubspace;
use g2lts::model::TangentVector;
use serde_json::Value;

fn g2lts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2lts")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2lts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn roots_reports_multiplicities() {
    let out = g2lts(&["roots", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let m: Vec<u64> = json(&out)["multiplicities"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(m, [4, 4, 4, 4, 3, 3]);
}

#[test]
fn construct_then_classify_sp2() {
    let out = g2lts(&["construct", "--type", "Sp2", "--n", "2", "--randomize", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let p = scratch("sp2.json", &out.stdout);
    let out = g2lts(&["classify", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["type"], "Sp2");
}

#[test]
fn construct_round_trip_is_lossless() {
    let out = g2lts(&["construct", "--type", "P12:H2", "--n", "5", "--randomize", "--seed", "9"]);
    let parsed: RealSubspace = serde_json::from_slice(&out.stdout).unwrap();
    let direct =
        g2lts::constructors::randomize(&g2lts::constructors::construct(&"P12:H2".parse().unwrap(), 5).unwrap(), 9)
            .unwrap();
    for (a, b) in parsed.basis().iter().zip(direct.basis()) {
        assert!(a.sub(b).max_abs() <= 1e-12);
    }
    let p = scratch("p12.json", &out.stdout);
    let out = g2lts(&["verify", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["is_lts"], true);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["rank"], "P12:H2".parse::<g2lts::constructors::LtsDescriptor>().unwrap().rank());
}

#[test]
fn verify_rejects_a_generic_plane() {
    let n = 3;
    let vec_from = |k: usize| {
        let r: Vec<f64> = (0..8 * n).map(|i| ((i * 7 + k * 13) as f64).sin()).collect();
        TangentVector::from_real(n, &r)
    };
    let s = RealSubspace::span(n, &[vec_from(1), vec_from(2)]).unwrap();
    let p = scratch("generic.json", serde_json::to_string(&s).unwrap().as_bytes());
    let out = g2lts(&["verify", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["is_lts"], false);
    assert!(v["residual"].as_f64().unwrap() > 1e-3);
    let out = g2lts(&["classify", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tables_are_byte_stable() {
    for n in ["2", "5"] {
        let a = g2lts(&["tables", "--n", n]);
        let b = g2lts(&["tables", "--n", n]);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = g2lts(&["construct", "--type", "Geo:t=0.3", "--n", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let floats: Vec<&str> = text.split(|c: char| ",[]{}:\n".contains(c)).filter(|t| t.contains('.')).collect();
    assert!(!floats.is_empty());
    for f in floats {
        let (mantissa, _exp) = f.split_once('e').unwrap_or_else(|| panic!("{f} has no exponent"));
        let digits = mantissa.trim_start_matches('-').replace('.', "");
        assert_eq!(digits.len(), 17, "{f}");
    }
    let v: Value = serde_json::from_str(&text).unwrap();
    let w = v["basis"][0]["cols"][0][0][0].as_f64().unwrap();
    assert_eq!(w, 0.3f64.cos());
}

#[test]
fn inclusions_and_complex_suites_succeed() {
    let out = g2lts(&["inclusions", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = g2lts(&["complex", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    let mismatched: Vec<&str> =
        rows.iter().filter(|r| r["matches_table"] == false).map(|r| r["type"].as_str().unwrap()).collect();
    assert_eq!(mismatched, ["P12:R2"]);
}

#[test]
fn geodesic_reports_intersection() {
    let t = std::f64::consts::PI * 2f64.sqrt();
    let out = g2lts(&["geodesic", "--type", "Geo:t=pi/4", "--t", &t.to_string()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["intersection_dim"], 2);
    let out = g2lts(&["geodesic", "--type", "Sp2", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(g2lts(&["construct", "--type", "P12:X", "--n", "3"]).status.code(), Some(2));
    assert_eq!(g2lts(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(g2lts(&["verify", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_g2lts"))
        .args(["roots", "--n", "3"])
        .env("G2LTS_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
