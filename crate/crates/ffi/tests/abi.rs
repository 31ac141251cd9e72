use std::ffi::{CStr, CString};
use std::ptr;

use msw_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(msw_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn construct_and_query() {
    unsafe {
        let name = CString::new("wedge").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(msw_space_construct(name.as_ptr(), 3, 3, 0, &mut s), MswStatus::Ok);
        let mut dim = 0;
        assert_eq!(msw_space_dim(s, &mut dim), MswStatus::Ok);
        assert_eq!(dim, 3);
        let mut urk = 0;
        assert_eq!(msw_space_upper_rank(s, 1 << 20, &mut urk), MswStatus::Ok);
        assert_eq!(urk, 2);
        let mut c = MswClassification::default();
        assert_eq!(msw_space_classify(s, 1 << 20, &mut c), MswStatus::Ok);
        assert!(c.primitive && c.semi_primitive && c.reduced);
        msw_space_free(s);
    }
}

#[test]
fn flat_array_constructor() {
    unsafe {
        // strictly upper-triangular 2x2 over GF(5)
        let data = [0u32, 1, 0, 0];
        let mut s = ptr::null_mut();
        assert_eq!(msw_space_new(5, 2, 2, 1, data.as_ptr(), &mut s), MswStatus::Ok);
        let mut ts = false;
        assert_eq!(msw_space_is_trivial_spectrum(s, 1000, &mut ts), MswStatus::Ok);
        assert!(ts);
        let (mut r, mut c) = (0, 0);
        assert_eq!(msw_space_shape(s, &mut r, &mut c), MswStatus::Ok);
        assert_eq!((r, c), (2, 2));
        msw_space_free(s);

        let bad = [7u32];
        let mut s = ptr::null_mut();
        assert_eq!(msw_space_new(5, 1, 1, 1, bad.as_ptr(), &mut s), MswStatus::EntryOutOfRange);
        assert!(s.is_null());
        assert!(last_error().contains('7'));
        assert_eq!(msw_space_new(4, 1, 1, 0, ptr::null(), &mut s), MswStatus::NotPrime);
        assert_eq!(msw_space_new(5, 1, 1, 1, ptr::null(), &mut s), MswStatus::NullPointer);
    }
}

#[test]
fn json_round_trip_and_reports() {
    unsafe {
        let name = CString::new("strict-ut").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(msw_space_construct(name.as_ptr(), 3, 5, 0, &mut s), MswStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(msw_space_to_json(s, &mut text), MswStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(msw_space_from_json(text, &mut back), MswStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(msw_space_to_json(back, &mut again), MswStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(again));
        msw_string_free(text);
        msw_string_free(again);

        let mut report = ptr::null_mut();
        assert_eq!(
            msw_theorem_report_json(s, MswTheorem::Gerstenhaber, 1 << 20, 0, 0, &mut report),
            MswStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        assert_eq!(v["verdict"], "verified");
        msw_string_free(report);

        // Atkinson needs a semi-primitive space
        assert_eq!(
            msw_theorem_report_json(s, MswTheorem::Atkinson, 1 << 20, 10, 0, &mut report),
            MswStatus::PreconditionViolated
        );
        msw_space_free(s);
        msw_space_free(back);
    }
}

#[test]
fn errors() {
    unsafe {
        let bad = CString::new(r#"{"version":"msw-1","p":3,"rows":1,"cols":1,"basis":[[[3]]]}"#).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(msw_space_from_json(bad.as_ptr(), &mut s), MswStatus::Malformed);
        assert!(last_error().contains("line 1"));
        let name = CString::new("nope").unwrap();
        assert_eq!(msw_space_construct(name.as_ptr(), 3, 3, 0, &mut s), MswStatus::InvalidArgument);
        let mut dim = 0;
        assert_eq!(msw_space_dim(ptr::null(), &mut dim), MswStatus::NullPointer);
        let wedge = CString::new("wedge").unwrap();
        assert_eq!(msw_space_construct(wedge.as_ptr(), 4, 3, 0, &mut s), MswStatus::Ok);
        let mut urk = 0;
        assert_eq!(msw_space_upper_rank(s, 2, &mut urk), MswStatus::TooLarge);
        assert_eq!(msw_space_dim(s, &mut dim), MswStatus::Ok);
        assert_eq!(last_error(), "");
        msw_space_free(s);
        msw_space_free(ptr::null_mut());
        msw_string_free(ptr::null_mut());
    }
}
