use std::process::{Command, Output};

use serde_json::Value;
use spin7_core::invariant::build_bryant_salamon;
use spin7_core::serial::{read_chamber_form, read_kform};
use spin7_core::{cayley, KForm, Vector};

fn spin7(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin7"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let out = spin7(args);
    let report = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), report)
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = spin7(&["verify", "--suite", "foo"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("foo"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(spin7(&[]).status.code(), Some(2));
}

#[test]
fn bryant_salamon_suite_passes() {
    let (code, r) = json_report(&["verify", "--suite", "bryant-salamon", "--suite", "perturb"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], true);
    let names: Vec<&str> = r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["bryant-salamon", "perturb"]);
}

#[test]
fn suites_are_reported_in_canonical_order() {
    let (_, r) = json_report(&["verify", "--suite", "perturb", "--suite", "decomposition"]);
    let names: Vec<&str> = r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["decomposition", "perturb"]);
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        "--suite",
        "decomposition",
        "--suite",
        "perturb",
        "--seed",
        "7",
    ];
    let a = spin7(&args);
    let b = spin7(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn injected_fault_fails_with_witness() {
    let (code, r) = json_report(&[
        "verify",
        "--suite",
        "bryant-salamon",
        "--inject-fault",
        "0,1,2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["passed"], false);
    let suite = &r["suites"][0];
    let failed: Vec<&Value> = suite["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert!(!failed.is_empty());
    for c in &failed {
        assert!(c["witness"].is_object(), "{c}");
    }
    let frame = failed.iter().find(|c| c["name"] == "lie_frame").unwrap();
    assert_eq!(frame["witness"]["case"], "antisymmetry");
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = spin7(&[
        "verify",
        "--suite",
        "decomposition",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("projector_algebra"));
    assert!(text.contains("PASS"));
}

#[test]
fn export_omega_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("omega.json");
    let out = spin7(&["export", "--form", "omega", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(&read_kform(&path).unwrap(), cayley::omega());
}

#[test]
fn export_phi_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.json");
    let out = spin7(&["export", "--form", "phi", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let term = raw["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["generators"] == serde_json::json!(["ds", "A4", "A5", "A6"]))
        .unwrap();
    let c = &term["coefficient"]["terms"][0];
    assert_eq!(c["s_exp"], 3);
    assert_eq!(c["w_exp"], -4);
    assert_eq!(c["coeff"]["a"], "-16/1");
    assert_eq!(
        read_chamber_form(&path).unwrap(),
        build_bryant_salamon().phi
    );
}

#[test]
fn export_rank_one_adds_delta() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank_one.json");
    let out = spin7(&[
        "export",
        "--form",
        "rank-one",
        "--v",
        "0,0,0,0,0,0,1,0",
        "--w",
        "0,0,0,0,0,0,0,1",
        "--t",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let om = cayley::omega();
    // δ = e⁷ ∧ (e₈ ⌟ Ω), computed blade by blade.
    let contracted = om.contract(&Vector::basis(8)).unwrap();
    let delta = KForm::blade(&[7]).wedge(&contracted);
    assert_eq!(read_kform(&path).unwrap(), om.add(&delta));
}

#[test]
fn export_rank_one_rejects_non_orthogonal_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let out = spin7(&[
        "export",
        "--form",
        "rank-one",
        "--v",
        "1,0,0,0,0,0,0,0",
        "--w",
        "1/2,0,0,0,0,0,0,0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("α(v)=0"));
}

#[test]
fn export_rejects_short_vector() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let out = spin7(&[
        "export",
        "--form",
        "rank-one",
        "--v",
        "1,0",
        "--w",
        "0,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
