//! Report bytes frozen against files in `tests/golden`. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p hkrlab-cli --test golden` after an
//! intended schema change.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hkrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkrlab")).args(args).output().expect("binary runs")
}

fn golden(name: &str, args: &[&str]) {
    let out = hkrlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs from golden file:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn witt_law_p2_m2() {
    golden("witt_law_p2_m2.json", &["witt-law", "--p", "2", "--m", "2"]);
    golden("witt_law_p2_m2.csv", &["witt-law", "--p", "2", "--m", "2", "--format", "csv"]);
}

#[test]
fn hh_of_the_affine_line() {
    golden("hh_qx_d3.json", &["hh", "--algebra", "Q[x]", "--degree", "3", "--window", "4"]);
    golden("hh_qx_d3.csv", &["hh", "--algebra", "Q[x]", "--degree", "3", "--window", "4", "--format", "csv"]);
}

#[test]
fn hc_minus_both_models() {
    golden("hcminus_qxy_d2_bar.csv", &["hcminus", "--algebra", "Q[x,y]", "--degree", "2", "--u", "3", "--format", "csv"]);
    golden(
        "hcminus_qxy_d2_de_rham.csv",
        &["hcminus", "--algebra", "Q[x,y]", "--degree", "2", "--u", "3", "--model", "de-rham", "--format", "csv"],
    );
}

#[test]
fn cartier_p2_m2() {
    golden("cartier_p2_m2.json", &["cartier", "--p", "2", "--m", "2"]);
}

#[test]
fn fgl_multiplicative() {
    golden("fgl_l1_n4_p2.json", &["fgl", "--lambda", "1", "--n", "4", "--p", "2"]);
}

#[test]
fn circle_ext_p3() {
    golden("circle_ext_p3.csv", &["circle-ext", "--p", "3", "--m-max", "2", "--format", "csv"]);
}

#[test]
fn witt_kernel_over_f4() {
    golden("witt_enumerate_f4.csv", &["witt-enumerate", "--ring", "F_4", "--p", "2", "--m", "2", "--format", "csv"]);
}

#[test]
fn documented_examples() {
    let out = String::from_utf8(hkrlab(&["witt-law", "--p", "2", "--m", "2"]).stdout).unwrap();
    assert!(out.contains("\"x1 + y1 - x0*y0\""));
    let csv = String::from_utf8(hkrlab(&["hh", "--algebra", "Q[x]", "--degree", "3", "--window", "4", "--format", "csv"]).stdout).unwrap();
    let ranks: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(csv.lines().next(), Some("n,internal_degree,free_rank,torsion"));
    assert_eq!(ranks, ["1", "1", "0", "0", "0"]);
}

#[test]
fn usage_errors_name_the_field() {
    let out = hkrlab(&["cartier", "--p", "5", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));
    let out = hkrlab(&["hh", "--algebra", "Q[x", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--algebra"));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_file_and_timings() {
    let dir = std::env::temp_dir().join(format!("hkrlab-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = hkrlab(&["cartier", "--p", "2", "--m", "1", "--timings", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["timings"][0]["stage"], "cartier");
    assert!(v["timings"][0]["seconds"].is_string());
    std::fs::remove_dir_all(&dir).unwrap();
}
