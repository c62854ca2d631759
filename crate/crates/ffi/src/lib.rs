//! C ABI for the Smith-equivalence toolkit.
//!
//! Conventions:
//! - Handles (`QwlMatrix`, `QwlDecision`) are opaque; free them with the
//!   matching `*_free` function.
//! - Functions return a `QwlStatus`; outputs are written through out
//!   pointers only on `QWL_STATUS_OK`.
//! - Strings returned through out pointers are NUL-terminated UTF-8 owned by
//!   the library; release them with `qwl_string_free`.
//! - On failure, `qwl_last_error_message` returns a thread-local description
//!   valid until the next failing call on the same thread.
//!
//! The header `include/qwlsmith.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qwlsmith::io;
use qwlsmith::monomial::MonomialOrder;
use qwlsmith::report::{digest, RunReport};
use qwlsmith::smith::{self, FactorizationWitness, SmithDecision};
use qwlsmith::{groebner, PolyMatrix, Verdict};

/// Status codes. Parse and internal codes match the CLI exit-code contract.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwlStatus {
    QwlStatusOk = 0,
    QwlStatusNullArgument = 1,
    QwlStatusParseError = 2,
    QwlStatusInternalError = 3,
    QwlStatusInvalidInput = 4,
}

/// Decision verdicts, numbered like the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwlVerdict {
    QwlVerdictEquivalent = 0,
    QwlVerdictNotEquivalent = 1,
    QwlVerdictOutOfScope = 4,
}

/// Opaque matrix handle.
pub struct QwlMatrix {
    matrix: PolyMatrix,
    source_digest: String,
}

/// Opaque decision handle.
pub struct QwlDecision {
    decision: SmithDecision,
    source_digest: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(msg).unwrap_or_default();
    });
}

/// Message for the most recent failure on this thread. Never NULL; the
/// buffer is only valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qwl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn guard<F: FnOnce() -> QwlStatus>(f: F) -> QwlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic across the FFI boundary");
            QwlStatus::QwlStatusInternalError
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QwlStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(QwlStatus::QwlStatusNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("argument is not UTF-8: {e}"));
        QwlStatus::QwlStatusParseError
    })
}

fn write_string(out: *mut *mut c_char, s: String) -> QwlStatus {
    let cstring = match CString::new(s) {
        Ok(c) => c,
        Err(e) => {
            set_error(format!("interior NUL in output: {e}"));
            return QwlStatus::QwlStatusInternalError;
        }
    };
    unsafe { *out = cstring.into_raw() };
    QwlStatus::QwlStatusOk
}

/// Parses a matrix document (the JSON schema with `variables` and `rows`)
/// into a fresh handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_parse(
    json: *const c_char,
    out: *mut *mut QwlMatrix,
) -> QwlStatus {
    guard(|| {
        if out.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match io::read_matrix(text.as_bytes()) {
            Ok(matrix) => {
                let handle = Box::new(QwlMatrix {
                    matrix,
                    source_digest: digest(text.as_bytes()),
                });
                *out = Box::into_raw(handle);
                QwlStatus::QwlStatusOk
            }
            Err(e) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusParseError
            }
        }
    })
}

/// # Safety
/// `m` must come from `qwl_matrix_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_free(m: *mut QwlMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_rows(m: *const QwlMatrix) -> usize {
    m.as_ref().map(|h| h.matrix.rows()).unwrap_or(0)
}

/// # Safety
/// `m` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_cols(m: *const QwlMatrix) -> usize {
    m.as_ref().map(|h| h.matrix.cols()).unwrap_or(0)
}

/// # Safety
/// `m` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_normal_rank(m: *const QwlMatrix) -> usize {
    match m.as_ref() {
        Some(h) => h.matrix.normal_rank(),
        None => 0,
    }
}

/// Canonical serialization of the matrix document.
///
/// # Safety
/// `m` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_matrix_write(
    m: *const QwlMatrix,
    out: *mut *mut c_char,
) -> QwlStatus {
    guard(|| {
        let Some(handle) = m.as_ref() else {
            set_error("NULL matrix handle");
            return QwlStatus::QwlStatusNullArgument;
        };
        if out.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        let bytes = io::write_matrix(&handle.matrix);
        write_string(out, String::from_utf8(bytes).expect("canonical output is UTF-8"))
    })
}

/// Runs the equivalence decision.
///
/// # Safety
/// `m` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_decide(m: *const QwlMatrix, out: *mut *mut QwlDecision) -> QwlStatus {
    guard(|| {
        let Some(handle) = m.as_ref() else {
            set_error("NULL matrix handle");
            return QwlStatus::QwlStatusNullArgument;
        };
        if out.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        match smith::decide(&handle.matrix) {
            Ok(decision) => {
                *out = Box::into_raw(Box::new(QwlDecision {
                    decision,
                    source_digest: handle.source_digest.clone(),
                }));
                QwlStatus::QwlStatusOk
            }
            Err(e @ smith::SmithError::ZeroMatrix) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInvalidInput
            }
            Err(e) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInternalError
            }
        }
    })
}

/// # Safety
/// `d` must come from `qwl_decide` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qwl_decision_free(d: *mut QwlDecision) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qwl_decision_verdict(d: *const QwlDecision) -> QwlVerdict {
    match d.as_ref().map(|h| h.decision.verdict) {
        Some(Verdict::Equivalent) => QwlVerdict::QwlVerdictEquivalent,
        Some(Verdict::NotEquivalent) => QwlVerdict::QwlVerdictNotEquivalent,
        _ => QwlVerdict::QwlVerdictOutOfScope,
    }
}

/// # Safety
/// `d` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qwl_decision_rank(d: *const QwlDecision) -> usize {
    d.as_ref().map(|h| h.decision.rank).unwrap_or(0)
}

/// Full decision report as JSON (rank, d_k chain, J_k verdicts, shape,
/// verdict, Smith diagonal).
///
/// # Safety
/// `d` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_decision_to_json(
    d: *const QwlDecision,
    out: *mut *mut c_char,
) -> QwlStatus {
    guard(|| {
        let Some(handle) = d.as_ref() else {
            set_error("NULL decision handle");
            return QwlStatus::QwlStatusNullArgument;
        };
        if out.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        let mut report = RunReport::new("decide", &[], MonomialOrder::Lex);
        report.input_digest = handle.source_digest.clone();
        report.set_decision(&handle.decision, MonomialOrder::Lex);
        write_string(out, report.to_json())
    })
}

/// Checks the witness `F = U * D * V`. Writes 1 (accepted) or 0 into
/// `out_accepted`.
///
/// # Safety
/// All handles must be valid and `out_accepted` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_verify(
    f: *const QwlMatrix,
    u: *const QwlMatrix,
    d: *const QwlMatrix,
    v: *const QwlMatrix,
    out_accepted: *mut i32,
) -> QwlStatus {
    guard(|| {
        let (Some(fh), Some(uh), Some(dh), Some(vh)) =
            (f.as_ref(), u.as_ref(), d.as_ref(), v.as_ref())
        else {
            set_error("NULL matrix handle");
            return QwlStatus::QwlStatusNullArgument;
        };
        if out_accepted.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        let witness = FactorizationWitness {
            u: uh.matrix.clone(),
            d: dh.matrix.clone(),
            v: vh.matrix.clone(),
        };
        match smith::verify_witness(&fh.matrix, &witness) {
            Ok(ok) => {
                *out_accepted = i32::from(ok);
                QwlStatus::QwlStatusOk
            }
            Err(e @ smith::SmithError::Dimension(_)) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInvalidInput
            }
            Err(e) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInternalError
            }
        }
    })
}

/// Monic gcd of two expressions; the variable context is inferred from the
/// identifiers, first variable first.
///
/// # Safety
/// `p1`/`p2` must be valid NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwl_gcd(
    p1: *const c_char,
    p2: *const c_char,
    out: *mut *mut c_char,
) -> QwlStatus {
    guard(|| {
        if out.is_null() {
            set_error("NULL out pointer");
            return QwlStatus::QwlStatusNullArgument;
        }
        let (a_src, b_src) = match (read_str(p1), read_str(p2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let ctx = match io::infer_context(&[a_src, b_src]) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return QwlStatus::QwlStatusParseError;
            }
        };
        let parse = |src: &str| {
            io::parse_poly(src, &ctx).map_err(|e| {
                set_error(e.to_string());
                QwlStatus::QwlStatusParseError
            })
        };
        let (a, b) = match (parse(a_src), parse(b_src)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match groebner::gcd(&a, &b) {
            Ok(g) => write_string(out, io::print_poly(&g, MonomialOrder::Lex)),
            Err(e @ groebner::GbError::ZeroGcd) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInvalidInput
            }
            Err(e) => {
                set_error(e.to_string());
                QwlStatus::QwlStatusInternalError
            }
        }
    })
}

/// Frees a string produced by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qwl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
