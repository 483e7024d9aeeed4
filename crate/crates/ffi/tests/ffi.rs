use std::ffi::{CStr, CString};
use std::ptr;

use irjoint_ffi::*;

fn last_error() -> String {
    let p = irj_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { irj_string_free(p) };
    s
}

fn section() -> *mut IrjSection {
    let mut s = ptr::null_mut();
    let st = unsafe { irj_section_symmetric(0.0335, 50e-6, 6890.0, std::f64::consts::FRAC_PI_4, &mut s) };
    assert_eq!(st, IrjStatus::Ok);
    s
}

#[test]
fn factor_and_ratio() {
    let mut f = 0.0;
    assert_eq!(
        unsafe { irj_moment_scale_factor(0.0, std::f64::consts::PI, &mut f) },
        IrjStatus::Ok
    );
    assert_eq!(f, 0.5);
    assert_eq!(unsafe { irj_stiffness_ratio(-1.0, &mut f) }, IrjStatus::Domain);
    assert!(last_error().contains("section_mechanics"));
    assert_eq!(
        unsafe { irj_stiffness_ratio(1.0, ptr::null_mut()) },
        IrjStatus::NullPointer
    );
}

#[test]
fn section_lifecycle() {
    let s = section();
    let (mut max, mut onset) = (0.0, 0.0);
    unsafe {
        assert_eq!(irj_section_max_moment(s, &mut max), IrjStatus::Ok);
        assert_eq!(irj_section_onset_moment(s, &mut onset), IrjStatus::Ok);
    }
    assert!(onset < max);
    let (mut t0, mut sigma) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            irj_section_solve(s, 0.5 * (onset + max), &mut t0, &mut sigma),
            IrjStatus::Ok
        );
        assert!(sigma > 0.0);
        assert_eq!(
            irj_section_solve(s, 2.0 * max, &mut t0, &mut sigma),
            IrjStatus::MomentOutOfRange
        );
        irj_section_free(s);
        irj_section_free(ptr::null_mut());
    }
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { irj_section_new(-1.0, 1e-5, 1e3, 0.0, 3.0, &mut bad) },
        IrjStatus::Domain
    );
    assert!(bad.is_null());
}

#[test]
fn joint_and_threshold() {
    let s = section();
    let mut j = ptr::null_mut();
    unsafe {
        assert_eq!(irj_joint_new(s, 0.06, 0.333, 0.0, &mut j), IrjStatus::Ok);
        irj_section_free(s);
    }
    let (mut limit, mut soft, mut stiff, mut m) = (0.0, 0.0, 0.0, 0.0);
    let (mut reachable, mut tension, mut direction) = (false, 0.0, 0.0);
    unsafe {
        assert_eq!(irj_joint_rotation_limit(j, &mut limit), IrjStatus::Ok);
        assert_eq!(irj_joint_directional_max_moment(j, 0.0, &mut soft), IrjStatus::Ok);
        assert_eq!(
            irj_joint_directional_max_moment(j, std::f64::consts::FRAC_PI_2, &mut stiff),
            IrjStatus::Ok
        );
        assert_eq!(irj_joint_moment_curve(j, 0.0, limit, &mut m), IrjStatus::Ok);
        assert_eq!(irj_joint_moment_curve(j, 0.0, 2.0 * limit, &mut m), IrjStatus::Domain);
        assert_eq!(
            irj_buckle_threshold(j, 0.0, 0.02, 0.0, 0.02, &mut reachable, &mut tension, &mut direction),
            IrjStatus::Ok
        );
    }
    assert!((soft / stiff - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-12);
    assert!(reachable);
    assert!((tension - soft / 0.02).abs() < 1e-9 * tension);
    assert_eq!(direction, 0.0);
    unsafe {
        assert_eq!(
            irj_buckle_threshold(j, 0.0, 0.0, 0.0, 0.0, &mut reachable, &mut tension, &mut direction),
            IrjStatus::Ok
        );
        assert!(!reachable);
        assert_eq!(
            irj_buckle_threshold(j, 0.0, 0.5, 0.0, 0.0, &mut reachable, &mut tension, &mut direction),
            IrjStatus::InvalidInput
        );
        irj_joint_free(j);
    }
}

const CHAIN: &str = r#"{
    "units": [
        {"section": {"radius": "33.5mm", "thickness": "50um", "pressure": "6.89kPa", "tape_width": "38.1mm"},
         "length": "60mm", "wrinkle_strain": 0.333},
        {"section": {"radius": "33.5mm", "thickness": "50um", "pressure": "6.89kPa", "tape_width": "12.7mm"},
         "length": "60mm", "wrinkle_strain": 0.333}
    ],
    "routes": [
        {"top_anchor": [0, 0.02], "bottom_anchor": [0, 0.02]},
        {"top_anchor": [0, 0.02], "bottom_anchor": [0, 0.02]}
    ]
}"#;

#[test]
fn chain_simulation_json() {
    let json = CString::new(CHAIN).unwrap();
    let mut c = ptr::null_mut();
    let mut n = 0usize;
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(irj_chain_from_json(json.as_ptr(), &mut c), IrjStatus::Ok);
        assert_eq!(irj_chain_len(c, &mut n), IrjStatus::Ok);
        assert_eq!(irj_chain_simulate(c, 100.0, true, &mut out), IrjStatus::Ok);
    }
    assert_eq!(n, 2);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe {
        irj_string_free(out);
        irj_chain_free(c);
    }
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["events"][0]["unit"], 1);
    assert_eq!(v["mode"], "independent");

    let bad = CString::new("{\"units\": 3}").unwrap();
    assert_eq!(unsafe { irj_chain_from_json(bad.as_ptr(), &mut c) }, IrjStatus::Json);
    assert!(!last_error().is_empty());
}

#[test]
fn success_clears_last_error() {
    let mut f = 0.0;
    unsafe { irj_stiffness_ratio(-1.0, &mut f) };
    unsafe { irj_stiffness_ratio(1.0, &mut f) };
    assert!(irj_last_error().is_null());
}
