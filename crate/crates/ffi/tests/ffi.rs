use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use kl_ffi::*;

fn perm(s: &str) -> *mut KlPerm {
    let c = CString::new(s).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { kl_perm_parse(c.as_ptr(), &mut p) }, KlStatus::Ok);
    p
}

fn poly(s: &str) -> *mut KlPoly {
    let c = CString::new(s).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { kl_poly_parse(c.as_ptr(), &mut p) }, KlStatus::Ok);
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(kl_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn permutations_and_errors() {
    let p = perm("31524");
    unsafe {
        assert_eq!(kl_perm_size(p), 5);
        assert_eq!(kl_perm_length(p), 4);
        let s = kl_perm_to_string(p);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "31524");
        kl_string_free(s);
        let bad = CString::new("3x").unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(kl_perm_parse(bad.as_ptr(), &mut q), KlStatus::Parse);
        assert!(q.is_null());
        assert!(last_error().contains("parse"));
        assert_eq!(kl_perm_parse(ptr::null(), &mut q), KlStatus::NullPointer);
        let mut out = false;
        assert_eq!(kl_bruhat_leq(p, ptr::null(), &mut out), KlStatus::NullPointer);
        let small = perm("21");
        assert_eq!(kl_bruhat_leq(p, small, &mut out), KlStatus::SizeMismatch);
        assert_eq!(kl_perm_size(ptr::null()), 0);
        kl_perm_free(small);
        kl_perm_free(p);
        kl_perm_free(ptr::null_mut());
        assert!(!CStr::from_ptr(kl_version()).to_bytes().is_empty());
    }
}

#[test]
fn multiplicity_and_vmax() {
    let (v, w) = (perm("743198652"), perm("975286431"));
    unsafe {
        let mut m = 0u64;
        assert_eq!(kl_multiplicity(v, w, &mut m), KlStatus::Ok);
        assert_eq!(m, 5);
        assert_eq!(last_error(), "");
        assert_eq!(kl_multiplicity(w, v, &mut m), KlStatus::NotBelow);
        let (a, b) = (perm("316298475"), perm("896354721"));
        let mut vm = ptr::null_mut();
        assert_eq!(kl_v_max(a, b, &mut vm), KlStatus::Ok);
        let s = kl_perm_to_string(vm);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "362198754");
        kl_string_free(s);
        for p in [v, w, a, b, vm] {
            kl_perm_free(p);
        }
    }
}

#[test]
fn ideals_and_pipes() {
    unsafe {
        let (v, w) = (perm("31524"), perm("43512"));
        let mut h = true;
        assert_eq!(kl_is_homogeneous(v, w, &mut h), KlStatus::Ok);
        assert!(!h);
        let mut gb = false;
        assert_eq!(kl_groebner_verify(v, w, 1000, &mut gb), KlStatus::Ok);
        assert!(gb);
        let (x, y) = (perm("12345"), perm("35142"));
        assert_eq!(kl_groebner_verify(x, y, 0, &mut gb), KlStatus::BudgetExceeded);
        let t = perm("13254");
        let mut count = 0usize;
        assert_eq!(kl_pipe_count(v, t, true, &mut count), KlStatus::Ok);
        assert_eq!(count, 4);
        assert_eq!(kl_pipe_count(v, t, false, &mut count), KlStatus::Ok);
        assert_eq!(count, 9);
        for p in [v, w, x, y, t] {
            kl_perm_free(p);
        }
    }
}

#[test]
fn polynomials() {
    unsafe {
        let w = perm("2143");
        let mut s = ptr::null_mut();
        assert_eq!(kl_double_schubert(w, &mut s), KlStatus::Ok);
        let expected = poly("(x1-y1)(x1+x2+x3-y1-y2-y3)");
        assert!(kl_poly_equal(s, expected));
        assert_eq!(kl_poly_num_terms(s), kl_poly_num_terms(expected));
        let mut g = ptr::null_mut();
        assert_eq!(kl_double_grothendieck(w, &mut g), KlStatus::Ok);
        assert!(!kl_poly_equal(s, g));
        let (v, w2) = (perm("31452"), perm("53142"));
        let mut k = ptr::null_mut();
        let mut u = ptr::null_mut();
        assert_eq!(kl_kostant_kumar(v, w2, &mut k), KlStatus::Ok);
        assert_eq!(kl_unspecialized_grothendieck(v, w2, &mut u), KlStatus::Ok);
        let text = kl_poly_to_string(k);
        assert!(!CStr::from_ptr(text).to_bytes().is_empty());
        kl_string_free(text);
        for p in [s, expected, g, k, u] {
            kl_poly_free(p);
        }
        for p in [w, v, w2] {
            kl_perm_free(p);
        }
    }
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kl.h")).unwrap();
    for name in [
        "typedef struct KlPerm KlPerm;",
        "typedef struct KlPoly KlPoly;",
        "KL_STATUS_NOT_BELOW = 4",
        "kl_perm_parse(const char *text, struct KlPerm **out)",
        "kl_multiplicity(",
        "kl_double_schubert(",
        "kl_last_error(void)",
        "kl_string_free(char *s)",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir: PathBuf = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libkl_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = env!("CARGO_MANIFEST_DIR");
    let out = std::env::temp_dir().join(format!("kl_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("run the C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("x1"), "{stdout}");
}
