//! C interface to `qwitt`: coefficient rings, Witt vector arithmetic and verification runs.
//!
//! Every function returns a [`QwittStatus`]. Results come back through out-pointers; on
//! failure [`qwitt_last_error`] holds a message for the calling thread. Handles and strings
//! returned here are owned by the caller and must be released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qwitt::cli::{run_suites, CliError, RunOptions, SuiteConfig};
use qwitt::report::Report;
use qwitt::ringkit::CoeffRing;
use qwitt::wittcore::{self, WittError, WittVector};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwittStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed ring spec, vector text or configuration.
    Invalid = 3,
    /// Arithmetic precondition failed, e.g. an index not dividing the level.
    Math = 4,
    /// An exact division left a remainder.
    Inexact = 5,
    Panic = 6,
}

/// A coefficient ring such as `z`, `zmod:4` or `poly:z:T`.
pub struct QwittRing(CoeffRing);

/// An element of `W_m(R)`, tied to the ring it was created over.
pub struct QwittVector {
    ring: CoeffRing,
    value: WittVector,
}

/// The outcome of a verification run.
pub struct QwittReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QwittStatus, String);

impl From<WittError> for Failure {
    fn from(e: WittError) -> Self {
        let status = match e {
            WittError::InexactDivision(_) => QwittStatus::Inexact,
            WittError::Parse(_) => QwittStatus::Invalid,
            _ => QwittStatus::Math,
        };
        Failure(status, e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Usage(_) => QwittStatus::Invalid,
            CliError::Inexact(_) => QwittStatus::Inexact,
            CliError::Io(_) | CliError::Failed(_) => QwittStatus::Math,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QwittStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwittStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QwittStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(QwittStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(QwittStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(QwittStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(QwittStatus::NullPointer, "null out-pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(QwittStatus::NullPointer, "null out-pointer".into()));
    }
    let c = CString::new(s).map_err(|e| Failure(QwittStatus::Invalid, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn same_ring(a: &QwittVector, b: &QwittVector) -> Result<(), Failure> {
    if a.ring != b.ring {
        return Err(Failure(QwittStatus::Invalid, "vectors live over different rings".into()));
    }
    Ok(())
}

/// The message for the last failed call on this thread. Valid until the next failure.
#[no_mangle]
pub extern "C" fn qwitt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qwitt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwitt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a ring spec.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_ring_parse(spec: *const c_char, out: *mut *mut QwittRing) -> QwittStatus {
    guard(|| {
        let ring: CoeffRing = text(spec)?.parse().map_err(|e| Failure(QwittStatus::Invalid, format!("{e}")))?;
        put(out, QwittRing(ring))
    })
}

/// # Safety
/// `ring` must be NULL or a handle from [`qwitt_ring_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwitt_ring_free(ring: *mut QwittRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Parses `(c_1, .., c_m)` as an element of `W_m(ring)`.
///
/// # Safety
/// `ring` must be a live handle, `coords` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_parse(
    ring: *const QwittRing,
    m: u64,
    coords: *const c_char,
    out: *mut *mut QwittVector,
) -> QwittStatus {
    guard(|| {
        let ring = &handle(ring)?.0;
        if m == 0 {
            return Err(Failure(QwittStatus::Invalid, "level must be positive".into()));
        }
        let value = WittVector::parse(text(coords)?, ring, m)?;
        put(out, QwittVector { ring: ring.clone(), value })
    })
}

/// # Safety
/// `v` must be NULL or a vector handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_free(v: *mut QwittVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Truncation level of a vector.
///
/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_level(v: *const QwittVector, out: *mut u64) -> QwittStatus {
    guard(|| {
        let v = handle(v)?;
        if out.is_null() {
            return Err(Failure(QwittStatus::NullPointer, "null out-pointer".into()));
        }
        *out = v.value.m();
        Ok(())
    })
}

/// Text form `(c_1, .., c_m)`; free with [`qwitt_string_free`].
///
/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_to_string(v: *const QwittVector, out: *mut *mut c_char) -> QwittStatus {
    guard(|| {
        let v = handle(v)?;
        put_string(out, v.value.to_text(&v.ring))
    })
}

/// Witt sum.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_add(
    a: *const QwittVector,
    b: *const QwittVector,
    out: *mut *mut QwittVector,
) -> QwittStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        same_ring(a, b)?;
        let value = wittcore::witt_add(&a.ring, &a.value, &b.value)?;
        put(out, QwittVector { ring: a.ring.clone(), value })
    })
}

/// Witt product.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_mul(
    a: *const QwittVector,
    b: *const QwittVector,
    out: *mut *mut QwittVector,
) -> QwittStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        same_ring(a, b)?;
        let value = wittcore::witt_mul(&a.ring, &a.value, &b.value)?;
        put(out, QwittVector { ring: a.ring.clone(), value })
    })
}

/// `F_k : W_m -> W_{m/k}`.
///
/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_frobenius(
    v: *const QwittVector,
    k: u64,
    out: *mut *mut QwittVector,
) -> QwittStatus {
    guard(|| {
        let v = handle(v)?;
        let value = wittcore::frobenius(&v.ring, &v.value, k)?;
        put(out, QwittVector { ring: v.ring.clone(), value })
    })
}

/// `V_k : W_m -> W_{km}`.
///
/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_verschiebung(
    v: *const QwittVector,
    k: u64,
    out: *mut *mut QwittVector,
) -> QwittStatus {
    guard(|| {
        let v = handle(v)?;
        let value = wittcore::verschiebung(&v.ring, &v.value, k)?;
        put(out, QwittVector { ring: v.ring.clone(), value })
    })
}

/// Ghost component `gh_n` for `n | m`, as text; free with [`qwitt_string_free`].
///
/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_vector_ghost(v: *const QwittVector, n: u64, out: *mut *mut c_char) -> QwittStatus {
    guard(|| {
        let v = handle(v)?;
        put_string(out, wittcore::ghost(&v.ring, &v.value, n)?.to_string())
    })
}

/// Runs verification suites described by a JSON configuration (same keys as the CLI's
/// `--config` file).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_verify(config_json: *const c_char, out: *mut *mut QwittReport) -> QwittStatus {
    guard(|| {
        let cfg: SuiteConfig =
            serde_json::from_str(text(config_json)?).map_err(|e| Failure(QwittStatus::Invalid, e.to_string()))?;
        let report = run_suites(&cfg, RunOptions::default())?;
        put(out, QwittReport(report))
    })
}

/// # Safety
/// `r` must be NULL or a report handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwitt_report_free(r: *mut QwittReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Counts of passed, failed and inconclusive checks. Any out-pointer may be NULL.
///
/// # Safety
/// `r` must be a live handle; non-NULL out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qwitt_report_counts(
    r: *const QwittReport,
    pass: *mut usize,
    fail: *mut usize,
    inconclusive: *mut usize,
) -> QwittStatus {
    guard(|| {
        let s = &handle(r)?.0.summary;
        for (p, v) in [(pass, s.pass), (fail, s.fail), (inconclusive, s.inconclusive)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// The report as JSON; free with [`qwitt_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwitt_report_json(r: *const QwittReport, out: *mut *mut c_char) -> QwittStatus {
    guard(|| put_string(out, handle(r)?.0.to_json()))
}
