use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cabtorsion_ffi::*;

const QUARTIC_F3: &str = r#"{ "p": 3, "a": 3, "b": 4, "terms": [[0, 3, 1], [0, 1, -1], [4, 0, -1]] }"#;
const QUARTIC_Q: &str = r#"{ "p": 0, "a": 3, "b": 4, "terms": [[0, 3, 1], [0, 1, -1], [4, 0, -1]] }"#;

fn curve(json: &str) -> *mut CabCurve {
    let text = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cab_curve_from_json(text.as_ptr(), &mut h) }, CabStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let p = cab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cab_string_free(p) };
    s
}

/// Affine points of y^3 - y = x^4 over F_3 by direct enumeration.
fn brute_count_quartic_f3() -> u64 {
    let mut n = 1;
    for x in 0..3i64 {
        for y in 0..3i64 {
            if (y * y * y - y - x.pow(4)).rem_euclid(3) == 0 {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn genus_and_point_count() {
    let h = curve(QUARTIC_F3);
    let mut g = 0usize;
    assert_eq!(unsafe { cab_curve_genus(h, &mut g) }, CabStatus::Ok);
    assert_eq!(g, 3);
    let mut n = 0u64;
    assert_eq!(unsafe { cab_curve_count_points(h, 1, &mut n) }, CabStatus::Ok);
    assert_eq!(n, brute_count_quartic_f3());
    unsafe { cab_curve_free(h) };
}

#[test]
fn torsion_count_matches_the_characteristic_three_example() {
    let h = curve(QUARTIC_F3);
    let mut n = 0usize;
    assert_eq!(unsafe { cab_torsion_count(h, 4, &mut n) }, CabStatus::Ok);
    assert_eq!(n, 28);
    assert_eq!(unsafe { cab_torsion_count(h, 3, &mut n) }, CabStatus::Ok);
    assert_eq!(n, 1);
    unsafe { cab_curve_free(h) };
}

#[test]
fn tight_cap_is_reported() {
    let h = curve(QUARTIC_F3);
    assert_eq!(unsafe { cab_curve_set_caps(h, 1, 0) }, CabStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { cab_torsion_count(h, 4, &mut n) }, CabStatus::CapExceeded);
    assert!(last_error().contains("cap"));
    unsafe { cab_curve_free(h) };
}

#[test]
fn json_reports_parse() {
    let h = curve(QUARTIC_F3);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cab_analyze_json(h, &mut out) }, CabStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["results"]["genus"], "3");

    assert_eq!(unsafe { cab_torsion_json(h, 4, true, &mut out) }, CabStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["results"]["torsion"]["count"], "28");
    assert_eq!(v["results"]["violated_bounds"], serde_json::json!([]));

    assert_eq!(unsafe { cab_delta_json(h, 4, 5, -1, &mut out) }, CabStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["results"]["levels"].as_array().unwrap().len(), 2);
    unsafe { cab_curve_free(h) };
}

#[test]
fn profile_bounds() {
    let profile = CString::new(
        r#"{ "g": 2, "d": 2, "delta_gamma": [0, 5],
             "points": [ { "label": "infinity", "count": 1, "e": 2, "r": 2, "vz": [0, -5] },
                         { "label": "roots", "count": 5, "e": 2, "r": 2, "vz": [0, 1] } ] }"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cab_bounds_profile_json(profile.as_ptr(), 7, 5, 5, false, true, &mut out) }, CabStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let bounds = v["results"]["levels"][0]["bounds"].as_array().unwrap().clone();
    let old = bounds.iter().find(|b| b["formula"] == "old").unwrap();
    // g (N - 1)^2 with g = 2, N = 5.
    assert_eq!(old["integer_bound"], "32");
}

#[test]
fn errors_and_null_handling() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{ not json").unwrap();
    assert_eq!(unsafe { cab_curve_from_json(bad.as_ptr(), &mut h) }, CabStatus::InvalidInput);
    assert!(h.is_null());
    assert!(last_error().contains("curve spec"));

    assert_eq!(unsafe { cab_curve_from_json(ptr::null(), &mut h) }, CabStatus::NullPointer);
    let mut g = 0usize;
    assert_eq!(unsafe { cab_curve_genus(ptr::null(), &mut g) }, CabStatus::NullPointer);

    let q = curve(QUARTIC_Q);
    assert_eq!(unsafe { cab_curve_genus(q, ptr::null_mut()) }, CabStatus::NullPointer);
    let mut n = 0u64;
    assert_eq!(unsafe { cab_curve_count_points(q, 1, &mut n) }, CabStatus::Inapplicable);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cab_delta_json(q, 5, 4, -1, &mut out) }, CabStatus::InvalidInput);
    unsafe {
        cab_curve_free(q);
        cab_curve_free(ptr::null_mut());
        cab_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cabtorsion.h")).unwrap();
    for name in [
        "typedef struct CabCurve CabCurve",
        "CAB_STATUS_CAP_EXCEEDED = 3",
        "cab_last_error(void)",
        "cab_curve_from_json(",
        "cab_curve_free(",
        "cab_curve_set_caps(",
        "cab_curve_genus(",
        "cab_curve_count_points(",
        "cab_torsion_count(",
        "cab_analyze_json(",
        "cab_delta_json(",
        "cab_torsion_json(",
        "cab_bounds_profile_json(",
        "cab_string_free(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let src = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("cabtorsion_header_check.c");
    std::fs::write(&src, "#include \"cabtorsion.h\"\nint main(void) { return cab_last_error() == 0 ? 0 : 1; }\n")
        .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(format!("{dir}/include"))
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejects the header"),
            Err(_) => eprintln!("{compiler} not found; header syntax check skipped"),
        }
    }
}
