use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use irjoint::io::{Measurement, SpecDocument};
use irjoint::reduce::MeasuredCurve;
use irjoint::search::{self, DesignSolution};
use irjoint::{BendingDirection, JointSpec, SectionSpec};
use serde_json::Value;

fn demo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/demo.json")
}

fn irjoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irjoint")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn mmax_isotropic_from_spec_and_flags() {
    let spec = demo();
    let v = stdout_json(&irjoint(&[
        "mmax",
        "--spec",
        spec.to_str().unwrap(),
        "--section",
        "isotropic",
    ]));
    assert_eq!(format!("{:.4}", v["max_restoring_moment"].as_f64().unwrap()), "0.8138");
    let w = stdout_json(&irjoint(&[
        "mmax",
        "--radius",
        "33.5mm",
        "--thickness",
        "50um",
        "--pressure",
        "6.89kPa",
    ]));
    assert_eq!(v, w);
}

#[test]
fn mmax_joint_direction() {
    let spec = demo();
    let soft = stdout_json(&irjoint(&[
        "mmax",
        "--spec",
        spec.to_str().unwrap(),
        "--joint",
        "narrow",
    ]));
    let stiff = stdout_json(&irjoint(&[
        "mmax",
        "--spec",
        spec.to_str().unwrap(),
        "--joint",
        "narrow",
        "--direction",
        "90deg",
    ]));
    let ratio = soft["directional_max_moment"].as_f64().unwrap() / stiff["directional_max_moment"].as_f64().unwrap();
    assert!((ratio - soft["stiffness_ratio"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn sequence_orders_narrow_unit_first() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.csv");
    let spec = demo();
    let v = stdout_json(&irjoint(&[
        "sequence",
        "--spec",
        spec.to_str().unwrap(),
        "--max-tension",
        "100N",
        "--frames",
        frames.to_str().unwrap(),
        "--energy",
    ]));
    // unit 1 carries the 12.7 mm tape
    let order: Vec<u64> = v["events"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["unit"].as_u64().unwrap())
        .collect();
    assert_eq!(order, vec![1, 0]);
    assert!(v["energy"].as_f64().unwrap() > 0.0);
    let text = std::fs::read_to_string(frames).unwrap();
    assert!(text.starts_with("index,x,y,z,qw,qx,qy,qz\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn csv_outputs_are_bit_stable() {
    let spec = demo();
    let s = spec.to_str().unwrap();
    for args in [
        vec!["tendon", "--spec", s, "--joint", "wide", "--sweep"],
        vec!["moment-curve", "--spec", s, "--joint", "narrow", "--direction", "30deg"],
        vec!["shape", "--spec", s, "--angles", "0.2,10deg", "--directions", "0,45deg"],
    ] {
        let a = irjoint(&args);
        let b = irjoint(&args);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        assert!(!text.contains(';'));
    }
}

#[test]
fn sweep_has_header_and_grid() {
    let out = irjoint(&[
        "tendon",
        "--spec",
        demo().to_str().unwrap(),
        "--joint",
        "narrow",
        "--sweep",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().len(), 7);
    assert_eq!(rdr.records().count(), 100);
}

#[test]
fn search_output_round_trips() {
    let spec = demo();
    let out = irjoint(&["search", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: Vec<DesignSolution> = serde_json::from_slice(&out.stdout).unwrap();
    let doc = SpecDocument::parse(&std::fs::read_to_string(&spec).unwrap()).unwrap();
    let direct = search::enumerate_designs(&doc.problems["narrow_then_wide"]).unwrap();
    assert_eq!(parsed, direct);
    let again = serde_json::to_vec_pretty(&parsed).unwrap();
    assert_eq!(serde_json::from_slice::<Vec<DesignSolution>>(&again).unwrap(), parsed);
}

#[test]
fn emitted_documents_re_parse() {
    let doc = SpecDocument::parse(&std::fs::read_to_string(demo()).unwrap()).unwrap();
    assert_eq!(SpecDocument::parse(&doc.to_json()).unwrap(), doc);
}

fn fit_document() -> SpecDocument {
    let section = SectionSpec::symmetric(0.0335, 50e-6, 6890.0, std::f64::consts::FRAC_PI_4).unwrap();
    let joint = JointSpec::with_default_law(section, 0.06, 0.333, None).unwrap();
    let lever = 0.08;
    let set = [6890.0, 13800.0, 27600.0]
        .iter()
        .map(|&p| {
            let j = joint.with_pressure(p).unwrap();
            let samples = (0..120)
                .map(|i| {
                    let phi = j.rotation_limit() * i as f64 / 119.0;
                    let m = j.restoring_moment_curve(BendingDirection::SOFT, phi).unwrap();
                    [lever * phi.tan(), m / lever]
                })
                .collect();
            Measurement {
                pressure: Some(p),
                curve: MeasuredCurve::new(samples, lever).unwrap(),
            }
        })
        .collect();
    let mut doc = SpecDocument::default();
    doc.measurements.insert("soft".into(), set);
    doc
}

#[test]
fn fit_reports_pressure_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.json");
    std::fs::write(&path, fit_document().to_json()).unwrap();
    let out_path = dir.path().join("out.json");
    let out = irjoint(&[
        "fit",
        "--spec",
        path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    let slope = v["pressure_scaling"]["slope"].as_f64().unwrap();
    let model = std::f64::consts::PI * 0.0335f64.powi(3) * (std::f64::consts::FRAC_PI_8).sin();
    assert!((slope - model).abs() < 1e-6 * model);
    assert_eq!(v["window_fraction"].as_f64().unwrap(), 0.15);
    assert_eq!(v["curves"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = irjoint(&["bend"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn schema_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "sections": {"s": {"radius": "3 parsecs"}}}"#,
    )
    .unwrap();
    let out = irjoint(&["mmax", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stderr_json(&out);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["module"], "cli_io");

    std::fs::write(&path, r#"{"schema_version": 7}"#).unwrap();
    let out = irjoint(&["mmax", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_names_module() {
    let spec = demo();
    let out = irjoint(&["shape", "--spec", spec.to_str().unwrap(), "--angles", "2,0"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stderr_json(&out);
    assert_eq!(v["error"]["kind"], "limit_violation");
    assert_eq!(v["error"]["module"], "chain_sim");
}

#[test]
fn too_large_search_space_is_domain_error() {
    let mut doc = SpecDocument::parse(&std::fs::read_to_string(demo()).unwrap()).unwrap();
    doc.problems.get_mut("narrow_then_wide").unwrap().size_cap = Some(3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("capped.json");
    std::fs::write(&path, doc.to_json()).unwrap();
    let out = irjoint(&["search", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "space_too_large");
}
