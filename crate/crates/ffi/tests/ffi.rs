use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use mckay_ffi::*;

fn datum(label: &str) -> *mut MckayDatum {
    let c = CString::new(label).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { mckay_datum_new(c.as_ptr(), &mut d) }, MckayStatus::Ok);
    d
}

#[test]
fn borel_counts() {
    let d = datum("C2");
    unsafe {
        assert_eq!(mckay_datum_rank(d), 2);
        let mut total = 0;
        assert_eq!(mckay_borel_total(d, 3, 1, &mut total), MckayStatus::Ok);
        assert_eq!(total, 18);
        let mut z = 0;
        assert_eq!(mckay_center_order(d, 3, 1, &mut z), MckayStatus::Ok);
        assert_eq!(z, 2);
        let nu = [1u64];
        let mut c = 0;
        assert_eq!(mckay_borel_per_nu(d, 3, 1, nu.as_ptr(), 1, &mut c), MckayStatus::Ok);
        assert_eq!(c, 9);
        mckay_datum_free(d);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("Q7").unwrap();
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(mckay_datum_new(bad.as_ptr(), &mut d), MckayStatus::Unsupported);
        assert!(d.is_null());
        assert!(!CStr::from_ptr(mckay_last_error()).to_bytes().is_empty());
        assert_eq!(mckay_datum_new(ptr::null(), &mut d), MckayStatus::NullPointer);
        let g2 = datum("G2");
        let mut total = 0;
        assert_eq!(mckay_borel_total(g2, 2, 1, &mut total), MckayStatus::Unsupported);
        mckay_datum_free(g2);
        let c2 = datum("C2");
        let mut r = ptr::null_mut();
        assert_eq!(mckay_check(c2, 2, 1, 0, &mut r), MckayStatus::Hypothesis);
        let c3 = datum("C3");
        assert_eq!(mckay_check(c3, 3, 1, 0, &mut r), MckayStatus::BoundExceeded);
        assert!(r.is_null());
        mckay_datum_free(c2);
        mckay_datum_free(c3);
        assert_eq!(mckay_datum_rank(ptr::null()), 0);
        assert!(mckay_report_json(ptr::null()).is_null());
    }
}

#[test]
fn check_report() {
    let d = datum("A1");
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(mckay_check(d, 5, 1, 0, &mut r), MckayStatus::Ok);
        assert_eq!(mckay_report_passed(r), 1);
        let json = CStr::from_ptr(mckay_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["per_nu"]["(1)"]["G"], 4);
        mckay_report_free(r);
        mckay_datum_free(d);
        assert!(!CStr::from_ptr(mckay_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include").join("mckay.h");
    assert!(header.exists());
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"mckay.h\"\nint main(void) { MckayDatum *d = 0; return mckay_datum_new(\"A1\", &d) == MckayStatus_Ok ? 0 : 1; }\n",
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
