//! In-process exercise of the C ABI surface.

use bbp_ffi::*;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

fn take_string(ptr: *mut libc::c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }
        .to_string_lossy()
        .into_owned();
    unsafe { bbp_string_free(ptr) };
    s
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(bbp_version()) };
    assert!(!v.to_string_lossy().is_empty());
}

#[test]
fn catalog_enumeration() {
    assert_eq!(bbp_catalog_count(), 15);
    for i in 0..bbp_catalog_count() {
        let f = bbp_catalog_get(i);
        assert!(!f.is_null());
        let name = take_string(unsafe { bbp_formula_name(f) });
        assert!(!name.is_empty());
        unsafe { bbp_formula_free(f) };
    }
    assert!(bbp_catalog_get(99).is_null());
}

#[test]
fn lookup_eval_and_verify() {
    let name = CString::new("pi_sqrt3").unwrap();
    let f = unsafe { bbp_formula_by_name(name.as_ptr()) };
    assert!(!f.is_null());
    let dec = take_string(unsafe { bbp_eval_decimal(f, 128) });
    assert!(dec.starts_with("5.441398092702653"), "{dec}");
    let mut agreement = 0i64;
    let status = unsafe { bbp_verify(f, 256, &mut agreement) };
    assert_eq!(status, BbpStatus::Ok);
    assert!(agreement >= 240);
    unsafe { bbp_formula_free(f) };
}

#[test]
fn serialize_parse_round_trip() {
    let name = CString::new("catalan_g").unwrap();
    let f = unsafe { bbp_formula_by_name(name.as_ptr()) };
    let text = take_string(unsafe { bbp_formula_serialize(f) });
    let c_text = CString::new(text.clone()).unwrap();
    let mut back: *mut BbpFormula = ptr::null_mut();
    let status = unsafe { bbp_formula_parse(c_text.as_ptr(), &mut back) };
    assert_eq!(status, BbpStatus::Ok);
    assert!(!back.is_null());
    let text2 = take_string(unsafe { bbp_formula_serialize(back) });
    assert_eq!(text, text2);
    unsafe {
        bbp_formula_free(f);
        bbp_formula_free(back);
    }
}

#[test]
fn digits_and_zero_check() {
    let name = CString::new("log2").unwrap();
    let f = unsafe { bbp_formula_by_name(name.as_ptr()) };
    let hex = take_string(unsafe { bbp_extract_digits(f, 0, 12) });
    assert_eq!(hex, "B17217F7D1CF");
    unsafe { bbp_formula_free(f) };

    let z = CString::new("Z4").unwrap();
    let zf = unsafe { bbp_formula_by_name(z.as_ptr()) };
    let mut bound = 0i64;
    let status = unsafe { bbp_zero_check(zf, 128, &mut bound) };
    assert_eq!(status, BbpStatus::Ok);
    assert!(bound <= -112);
    unsafe { bbp_formula_free(zf) };
}

#[test]
fn generate_respects_parity() {
    let slug = CString::new("im-diff-b").unwrap();
    let mut f: *mut BbpFormula = ptr::null_mut();
    let status = unsafe { bbp_generate(slug.as_ptr(), 1, 3, &mut f) };
    assert_eq!(status, BbpStatus::Ok);
    assert!(!f.is_null());
    unsafe { bbp_formula_free(f) };

    let status = unsafe { bbp_generate(slug.as_ptr(), 1, 2, &mut f) };
    assert_eq!(status, BbpStatus::InvalidArgument);
    assert!(f.is_null());

    let bad = CString::new("not-a-family").unwrap();
    let status = unsafe { bbp_generate(bad.as_ptr(), 1, 1, &mut f) };
    assert_eq!(status, BbpStatus::NotFound);
}

#[test]
fn null_arguments_are_safe() {
    unsafe {
        assert!(bbp_formula_by_name(ptr::null()).is_null());
        assert!(bbp_formula_serialize(ptr::null()).is_null());
        assert_eq!(
            bbp_verify(ptr::null(), 64, ptr::null_mut()),
            BbpStatus::InvalidArgument
        );
        bbp_string_free(ptr::null_mut());
        bbp_formula_free(ptr::null_mut());
    }
}

#[test]
fn header_was_generated() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bbp_ffi.h");
    assert!(header.exists(), "cbindgen header missing at {header:?}");
    let text = std::fs::read_to_string(header).unwrap();
    assert!(text.contains("bbp_extract_digits"));
    assert!(text.contains("BbpStatus"));
}
