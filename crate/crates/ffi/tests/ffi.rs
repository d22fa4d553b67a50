use std::ffi::{CStr, CString};
use std::ptr;

use coldepth_ffi::*;

const SYMMETRIC: &str = r#"{"d":2,"colours":[
    [["1","0"],["0","1"],["-1","-1"]],
    [["1","0"],["0","1"],["-1","-1"]],
    [["1","0"],["0","1"],["-1","-1"]]]}"#;

fn parse(text: &str) -> (ColdepthStatus, *mut ColdepthConfig) {
    let json = CString::new(text).unwrap();
    let mut cfg = ptr::null_mut();
    let status = unsafe { coldepth_config_parse(json.as_ptr(), &mut cfg) };
    (status, cfg)
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { coldepth_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = coldepth_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn depth_of_symmetric_example() {
    let (status, cfg) = parse(SYMMETRIC);
    assert_eq!(status, ColdepthStatus::Ok);
    assert!(coldepth_last_error().is_null());
    unsafe {
        assert_eq!(coldepth_config_dim(cfg), 2);
        let mut depth = 0;
        assert_eq!(coldepth_depth(cfg, &mut depth), ColdepthStatus::Ok);
        assert_eq!(depth, 6);
        let mut out = ptr::null_mut();
        assert_eq!(coldepth_depth_json(cfg, &mut out), ColdepthStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["depth"], 6);
        coldepth_config_free(cfg);
    }
}

#[test]
fn witnesses_round_trip() {
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(coldepth_config_random(3, 11, &mut cfg), ColdepthStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(coldepth_witnesses_json(cfg, 0, &mut out), ColdepthStatus::Ok);
        let text = take_string(out);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc["simplices"].as_array().unwrap().len() >= coldepth_theorem_bound(3));

        let json = CString::new(text).unwrap();
        let mut ok = false;
        assert_eq!(coldepth_verify_witnesses(cfg, json.as_ptr(), &mut ok), ColdepthStatus::Ok);
        assert!(ok);

        let mut tampered = doc.clone();
        let first = tampered["simplices"][0].clone();
        tampered["simplices"].as_array_mut().unwrap().push(first);
        let json = CString::new(tampered.to_string()).unwrap();
        assert_eq!(coldepth_verify_witnesses(cfg, json.as_ptr(), &mut ok), ColdepthStatus::Ok);
        assert!(!ok);
        coldepth_config_free(cfg);
    }
}

#[test]
fn config_json_reparses() {
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(coldepth_config_random(2, 4, &mut cfg), ColdepthStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(coldepth_config_to_json(cfg, &mut out), ColdepthStatus::Ok);
        let text = take_string(out);
        let (status, again) = parse(&text);
        assert_eq!(status, ColdepthStatus::Ok);
        let (mut a, mut b) = (0, 0);
        coldepth_depth(cfg, &mut a);
        coldepth_depth(again, &mut b);
        assert_eq!(a, b);
        coldepth_config_free(cfg);
        coldepth_config_free(again);
    }
}

#[test]
fn errors_are_reported() {
    let (status, cfg) = parse("{not json");
    assert_eq!(status, ColdepthStatus::InvalidInput);
    assert!(cfg.is_null());
    assert!(!last_error().is_empty());

    let (status, _) = parse(r#"{"d":2,"colours":[[["1","0"]]]}"#);
    assert_eq!(status, ColdepthStatus::InvalidInput);
    assert!(last_error().contains("colours"));

    unsafe {
        assert_eq!(coldepth_config_parse(ptr::null(), &mut ptr::null_mut()), ColdepthStatus::NullPointer);
        let mut depth = 0;
        assert_eq!(coldepth_depth(ptr::null(), &mut depth), ColdepthStatus::NullPointer);
        let mut cfg = ptr::null_mut();
        assert_eq!(coldepth_config_random(0, 1, &mut cfg), ColdepthStatus::InvalidInput);
        coldepth_config_free(ptr::null_mut());
        coldepth_string_free(ptr::null_mut());
    }

    // origin outside a colour's hull: witness generation refuses
    let (status, cfg) = parse(r#"{"d":1,"colours":[[["1"],["2"]],[["-1"],["1"]]]}"#);
    assert_eq!(status, ColdepthStatus::Ok);
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(coldepth_witnesses_json(cfg, 0, &mut out), ColdepthStatus::Precondition);
        assert!(out.is_null());
        coldepth_config_free(cfg);
    }
}

#[test]
fn cross_check() {
    let json = CString::new(r#"{"d":2,"colours":[[["1","0"],["-1","0"]],[["0","1"],["0","-1"]]]}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { coldepth_cross_check_json(json.as_ptr(), &mut out) }, ColdepthStatus::Ok);
    let cert: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(cert["covered"], true);
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/coldepth.h")).unwrap();
    for name in [
        "coldepth_config_parse",
        "coldepth_config_free",
        "coldepth_depth",
        "coldepth_witnesses_json",
        "coldepth_last_error",
        "coldepth_string_free",
        "COLDEPTH_STATUS_OK",
        "typedef struct ColdepthConfig ColdepthConfig",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
