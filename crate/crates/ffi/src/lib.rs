//! C ABI over `kl-core`.
//!
//! Objects cross the boundary as opaque handles (`KlPerm`, `KlPoly`) that the
//! caller releases with the matching `*_free`. Strings returned by the library
//! are released with `kl_string_free`. Every fallible call returns a
//! `KlStatus`; on failure `kl_last_error` describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kl_core::ktheory;
use kl_core::mult;
use kl_core::perm::{self, Permutation};
use kl_core::pipedreams::enumerate_pipes;
use kl_core::poly::Polynomial;
use kl_core::KlError;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    SizeMismatch = 3,
    NotBelow = 4,
    BudgetExceeded = 5,
    Invariant = 6,
    Unresolved = 7,
    Internal = 8,
    Panic = 9,
}

/// A permutation.
pub struct KlPerm(Permutation);

/// A Laurent polynomial with rational coefficients.
pub struct KlPoly(Polynomial);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &KlError) -> KlStatus {
    match e {
        KlError::Parse(_) => KlStatus::Parse,
        KlError::SizeMismatch { .. } => KlStatus::SizeMismatch,
        KlError::NotBelow { .. } => KlStatus::NotBelow,
        KlError::BudgetExceeded(_) => KlStatus::BudgetExceeded,
        KlError::Invariant(_) => KlStatus::Invariant,
        _ => KlStatus::Internal,
    }
}

struct Fail(KlStatus, String);

impl From<KlError> for Fail {
    fn from(e: KlError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KlStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside kl");
            KlStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(KlStatus::NullPointer, "null pointer argument".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(KlStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn pair_below(v: &Permutation, w: &Permutation) -> Result<(), Fail> {
    if !perm::bruhat_leq(v, w)? {
        return Err(KlError::NotBelow { v: *v, w: *w }.into());
    }
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn kl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn kl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn kl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one-line notation such as `"31524"` or `"3,1,5,2,4"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_perm_parse(text: *const c_char, out: *mut *mut KlPerm) -> KlStatus {
    guard(|| {
        if text.is_null() {
            return Err(Fail(KlStatus::NullPointer, "null string".into()));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(KlStatus::Parse, "permutation is not UTF-8".into()))?;
        let p: Permutation = s.parse()?;
        put(out, Box::into_raw(Box::new(KlPerm(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn kl_perm_free(p: *mut KlPerm) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Size `n`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_perm_size(p: *const KlPerm) -> usize {
    p.as_ref().map_or(0, |p| p.0.n())
}

/// Coxeter length, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_perm_length(p: *const KlPerm) -> usize {
    p.as_ref().map_or(0, |p| p.0.length())
}

/// One-line notation; free with `kl_string_free`. Null for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_perm_to_string(p: *const KlPerm) -> *mut c_char {
    match p.as_ref() {
        Some(p) => into_c_string(p.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_bruhat_leq(v: *const KlPerm, w: *const KlPerm, out: *mut bool) -> KlStatus {
    guard(|| {
        let r = perm::bruhat_leq(&deref(v)?.0, &deref(w)?.0)?;
        put(out, r)
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_v_max(v: *const KlPerm, w: *const KlPerm, out: *mut *mut KlPerm) -> KlStatus {
    guard(|| {
        let (v, w) = (&deref(v)?.0, &deref(w)?.0);
        pair_below(v, w)?;
        let m = perm::v_max(v, w)?;
        put(out, Box::into_raw(Box::new(KlPerm(m))))
    })
}

/// Multiplicity of `X_w` at `e_v`; `Unresolved` when no route applies.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_multiplicity(v: *const KlPerm, w: *const KlPerm, out: *mut u64) -> KlStatus {
    guard(|| {
        let m = mult::multiplicity(&deref(v)?.0, &deref(w)?.0)?;
        match m.value {
            Some(x) => put(out, x),
            None => Err(Fail(KlStatus::Unresolved, format!("no route resolves ({}, {})", m.v, m.w))),
        }
    })
}

/// Whether `I_{v,w}` is homogeneous in the standard grading.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_is_homogeneous(v: *const KlPerm, w: *const KlPerm, out: *mut bool) -> KlStatus {
    guard(|| {
        let (v, w) = (&deref(v)?.0, &deref(w)?.0);
        pair_below(v, w)?;
        put(out, mult::homogeneous(v, w)?)
    })
}

/// Buchberger's criterion for the essential minors of `I_{v,w}`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_groebner_verify(v: *const KlPerm, w: *const KlPerm, budget: u64, out: *mut bool) -> KlStatus {
    guard(|| {
        let (v, w) = (&deref(v)?.0, &deref(w)?.0);
        pair_below(v, w)?;
        let r = kl_core::ideal::essential_minors(v, w)?.buchberger_verify(budget)?;
        put(out, r.is_groebner)
    })
}

/// Number of pipe dreams on `D(v)` with Demazure product `target`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_pipe_count(
    v: *const KlPerm,
    target: *const KlPerm,
    reduced_only: bool,
    out: *mut usize,
) -> KlStatus {
    guard(|| {
        let n = enumerate_pipes(&deref(v)?.0, &deref(target)?.0, reduced_only)?.len();
        put(out, n)
    })
}

unsafe fn poly_out(out: *mut *mut KlPoly, p: Polynomial) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(KlPoly(p))))
}

/// # Safety
/// `w` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_double_schubert(w: *const KlPerm, out: *mut *mut KlPoly) -> KlStatus {
    guard(|| poly_out(out, ktheory::double_schubert(&deref(w)?.0)?))
}

/// # Safety
/// `w` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_double_grothendieck(w: *const KlPerm, out: *mut *mut KlPoly) -> KlStatus {
    guard(|| poly_out(out, ktheory::double_grothendieck(&deref(w)?.0)?))
}

/// Kostant–Kumar K-polynomial of the pair.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_kostant_kumar(v: *const KlPerm, w: *const KlPerm, out: *mut *mut KlPoly) -> KlStatus {
    guard(|| {
        let (v, w) = (&deref(v)?.0, &deref(w)?.0);
        pair_below(v, w)?;
        poly_out(out, ktheory::kostant_kumar(v, w)?)
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_unspecialized_grothendieck(
    v: *const KlPerm,
    w: *const KlPerm,
    out: *mut *mut KlPoly,
) -> KlStatus {
    guard(|| {
        let (v, w) = (&deref(v)?.0, &deref(w)?.0);
        pair_below(v, w)?;
        poly_out(out, ktheory::unspecialized_grothendieck(v, w)?)
    })
}

/// Parses a polynomial such as `"(x1-y2)(x2-y1) + 3*z11"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_poly_parse(text: *const c_char, out: *mut *mut KlPoly) -> KlStatus {
    guard(|| {
        if text.is_null() {
            return Err(Fail(KlStatus::NullPointer, "null string".into()));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(KlStatus::Parse, "polynomial is not UTF-8".into()))?;
        poly_out(out, Polynomial::parse(s)?)
    })
}

/// # Safety
/// `p` must be null or a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn kl_poly_free(p: *mut KlPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Expanded form; free with `kl_string_free`. Null for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_poly_to_string(p: *const KlPoly) -> *mut c_char {
    match p.as_ref() {
        Some(p) => into_c_string(p.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Number of terms, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_poly_num_terms(p: *const KlPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Exact equality; false if either handle is null.
///
/// # Safety
/// Handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn kl_poly_equal(a: *const KlPoly, b: *const KlPoly) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}
