use std::ffi::{CStr, CString};
use std::ptr;

use qwitt_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    qwitt_string_free(s);
    out
}

unsafe fn vector(ring: *const QwittRing, m: u64, text: &str) -> *mut QwittVector {
    let mut v = ptr::null_mut();
    assert_eq!(qwitt_vector_parse(ring, m, cstr(text).as_ptr(), &mut v), QwittStatus::Ok);
    v
}

#[test]
fn witt_arithmetic_round_trip() {
    unsafe {
        let mut ring = ptr::null_mut();
        assert_eq!(qwitt_ring_parse(cstr("z").as_ptr(), &mut ring), QwittStatus::Ok);
        let x = vector(ring, 2, "(1,0)");
        let mut sum = ptr::null_mut();
        assert_eq!(qwitt_vector_add(x, x, &mut sum), QwittStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qwitt_vector_to_string(sum, &mut s), QwittStatus::Ok);
        assert_eq!(take(s), "(2, -1)");

        let y = vector(ring, 2, "(1,2)");
        assert_eq!(qwitt_vector_ghost(y, 2, &mut s), QwittStatus::Ok);
        assert_eq!(take(s), "5");

        // F_2 V_2 = 2 on W_1.
        let one = vector(ring, 1, "(3)");
        let (mut v, mut f) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qwitt_vector_verschiebung(one, 2, &mut v), QwittStatus::Ok);
        let mut level = 0;
        assert_eq!(qwitt_vector_level(v, &mut level), QwittStatus::Ok);
        assert_eq!(level, 2);
        assert_eq!(qwitt_vector_frobenius(v, 2, &mut f), QwittStatus::Ok);
        assert_eq!(qwitt_vector_to_string(f, &mut s), QwittStatus::Ok);
        assert_eq!(take(s), "(6)");

        for h in [x, sum, y, one, v, f] {
            qwitt_vector_free(h);
        }
        qwitt_ring_free(ring);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut ring = ptr::null_mut();
        assert_eq!(qwitt_ring_parse(cstr("nonsense").as_ptr(), &mut ring), QwittStatus::Invalid);
        assert!(!CStr::from_ptr(qwitt_last_error()).to_bytes().is_empty());
        assert_eq!(qwitt_ring_parse(ptr::null(), &mut ring), QwittStatus::NullPointer);

        assert_eq!(qwitt_ring_parse(cstr("zmod:4").as_ptr(), &mut ring), QwittStatus::Ok);
        let x = vector(ring, 3, "(1,1)");
        let mut out = ptr::null_mut();
        assert_eq!(qwitt_vector_frobenius(x, 2, &mut out), QwittStatus::Math);
        assert!(out.is_null());

        let mut other = ptr::null_mut();
        assert_eq!(qwitt_ring_parse(cstr("f3").as_ptr(), &mut other), QwittStatus::Ok);
        let y = vector(other, 3, "(1,1)");
        assert_eq!(qwitt_vector_add(x, y, &mut out), QwittStatus::Invalid);
        qwitt_vector_free(x);
        qwitt_vector_free(y);
        qwitt_ring_free(ring);
        qwitt_ring_free(other);
        qwitt_string_free(ptr::null_mut());
    }
}

#[test]
fn verification_report() {
    unsafe {
        let cfg = cstr(r#"{"suites": ["ghost-hom"], "ms": [2, 4], "rings": ["f2"], "trials": 2}"#);
        let mut report = ptr::null_mut();
        assert_eq!(qwitt_verify(cfg.as_ptr(), &mut report), QwittStatus::Ok);
        let (mut pass, mut fail) = (0, 0);
        assert_eq!(qwitt_report_counts(report, &mut pass, &mut fail, ptr::null_mut()), QwittStatus::Ok);
        assert_eq!((pass, fail), (2, 0));
        let mut json = ptr::null_mut();
        assert_eq!(qwitt_report_json(report, &mut json), QwittStatus::Ok);
        assert!(take(json).contains("\"tool\""));
        qwitt_report_free(report);

        let bad = cstr(r#"{"suites": ["nope"]}"#);
        assert_eq!(qwitt_verify(bad.as_ptr(), &mut report), QwittStatus::Invalid);
    }
}
