//! End-to-end tests of the command-line surface: subcommands, problem
//! files, the JSON report schema, CSV output, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symcoh"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn bott_subcommand() {
    let out = bin().args(["bott", "--N", "3", "--m", "6", "--n", "-14"]).output().unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["command"], "bott");
    assert_eq!(v["h"]["3"], 11704);
    assert_eq!(v["query"]["twist"], -8);
}

#[test]
fn hi_on_plane_cubic_matches_oracle() {
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "2", "--n", "3", "--i", "1", "--method", "both"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["command"], "hi");
    assert_eq!(v["agreement"], true);
    assert_eq!(v["primes"], serde_json::json!([1000003, 2000003]));
    // schema fields are all present
    for key in ["h", "term_dims", "ranks", "flags", "elapsed_ms", "value", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn hi_exact_certification_on_small_instance() {
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "1", "--n", "2", "--i", "1", "--method", "complex1", "--exact"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert!(v["flags"].as_array().unwrap().iter().any(|f| f == "exact-certified"));
}

#[test]
fn h0_surface_on_quadric_pair() {
    let out = bin()
        .args(["h0-surface", "--problem"])
        .arg(fixture("quadric_pair_p4.json"))
        .args(["--m", "2", "--t", "0"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["value"], 2);
    assert_eq!(v["query"]["dual_n"], 3);
}

#[test]
fn phi0_and_psi_subcommands() {
    let out = bin()
        .args(["phi0", "--problem"])
        .arg(fixture("quadric_p5.json"))
        .args(["--m", "4", "--basis"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["value"], 1);
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);

    let out = bin().args(["psi", "--problem"]).arg(fixture("fermat4_p3.json")).output().unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["certifies_nonvanishing"], true);
    assert_eq!(v["m"], 3);
}

#[test]
fn table_csv_schema() {
    let out = bin()
        .args(["table", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m-range", "1:1", "--n-range", "2:3", "--i", "1,2", "--csv", "--prime", "1000003"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,i,h,method,prime"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("1,2,1,"));
    assert!(rows.iter().all(|r| r.ends_with(",complex1,1000003")));
}

#[test]
fn table_records_out_of_range_cells() {
    let out = bin()
        .args(["table", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m-range", "1:1", "--n-range", "1:2", "--i", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells[0]["error"].is_string(), "n=1 must carry an error");
    assert!(cells[1]["h"].is_u64());
}

#[test]
fn witness_subcommand_verifies() {
    // the unique section behind the surface of bitangent lines
    let out = bin()
        .args(["witness", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "6", "--n", "14", "--position", "0", "--prime", "1000003"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["kernel_dimension"], 1);
    let components = v["components"].as_array().unwrap();
    assert!(!components.is_empty());
    assert!(components[0]["polynomial"].as_str().unwrap().contains('X'));

    // a query with a trivial kernel is a validity error
    let out = bin()
        .args(["witness", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "1", "--n", "2", "--position", "0", "--prime", "1000003"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes_for_validity_errors() {
    // n below the valid range is a validity error: exit code 1
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "2", "--n", "1", "--i", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert!(v["error"].as_str().unwrap().contains("n >= 2"));

    // i out of range
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "2", "--n", "3", "--i", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // missing problem file
    let out = bin()
        .args(["hi", "--problem", "/nonexistent.json", "--m", "2", "--n", "3", "--i", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // a prime too small for the factorials in play is rejected
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "4", "--n", "3", "--i", "1", "--prime", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn exit_code_for_prime_disagreement() {
    // with family parameter 7, reduction mod 7 computes the degenerate
    // fiber and disagrees with the large prime: internal assertion, exit 2
    let dir = std::env::temp_dir().join("symcoh-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quintic_family_t7.json");
    std::fs::write(
        &path,
        r#"{"N": 4, "polys": ["X0^5+X1^5+X2^5+X3^5+X4^5",
            "-2X0^5-X1^5+7X0*X1*X2*X3*X4+X3^5+2X4^5"],
            "description": "degenerates mod 7"}"#,
    )
    .unwrap();
    let out = bin()
        .args(["hi", "--problem"])
        .arg(&path)
        .args(["--m", "2", "--n", "2", "--i", "0", "--method", "complex1", "--primes", "7,1000003"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert!(v["error"].as_str().unwrap().contains("disagree"));
}

#[test]
fn reports_are_deterministic_modulo_elapsed() {
    let run = || {
        let out = bin()
            .args(["hi", "--problem"])
            .arg(fixture("fermat4_p3.json"))
            .args(["--m", "2", "--n", "3", "--i", "1", "--method", "complex1"])
            .output()
            .unwrap();
        let mut v = json_of(&out);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_suite_passes() {
    let out = bin().args(["verify"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 6);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().filter(|l| l.starts_with("PASS")).count() >= 6);
}

#[test]
fn threads_flag_is_accepted() {
    let out = bin()
        .args(["hi", "--problem"])
        .arg(fixture("fermat4_p3.json"))
        .args(["--m", "2", "--n", "3", "--i", "1", "--threads", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
