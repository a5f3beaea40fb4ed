//! C ABI over `ptlab`.
//!
//! Objects cross the boundary as opaque handles created by a `*_parse` or
//! `*_new` function and released by the matching `*_free`. Every fallible
//! function returns a [`PtlabStatus`]; on failure the message is available
//! from [`ptlab_last_error_message`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`ptlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ptlab::cert::{certify_adaptive, certify_nonadaptive};
use ptlab::formats::{parse_code, parse_rational, parse_tester, parse_wordset, print_code};
use ptlab::gf2::{LinearCode, Word, WordSet};
use ptlab::tester::{to_f64, Tester};
use ptlab::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Panic = 6,
}

/// A linear code over GF(2).
pub struct PtlabCode(LinearCode);

/// A sorted set of distinct words of one length.
pub struct PtlabWordSet(WordSet);

/// A randomized tester.
pub struct PtlabTester(Tester);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

struct Fail(PtlabStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::Parse { .. } => PtlabStatus::Parse,
            Error::BudgetExceeded { .. } => PtlabStatus::BudgetExceeded,
            _ => PtlabStatus::InvalidArgument,
        };
        Fail(status, err.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PtlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PtlabStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PtlabStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PtlabStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PtlabStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PtlabStatus::NullPointer, format!("null {what} handle")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(PtlabStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(PtlabStatus::InvalidArgument, "output contains a NUL byte".into()))
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ptlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ptlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a code file (`n k` then the generator rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_parse(text_: *const c_char, out: *mut *mut PtlabCode) -> PtlabStatus {
    guard(|| {
        let code = parse_code(text(text_)?)?;
        put(out, Box::into_raw(Box::new(PtlabCode(code))))
    })
}

/// Seeded random code of length `n` and dimension `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_random(n: usize, k: usize, seed: u64, out: *mut *mut PtlabCode) -> PtlabStatus {
    guard(|| {
        let code = LinearCode::random(n, k, seed)?;
        put(out, Box::into_raw(Box::new(PtlabCode(code))))
    })
}

/// # Safety
/// `code` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_free(code: *mut PtlabCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Word length, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_n(code: *const PtlabCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_k(code: *const PtlabCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.k())
}

/// Minimum weight of a nonzero dual codeword; `n + 1` for the full space.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_dual_distance(code: *const PtlabCode, out: *mut usize) -> PtlabStatus {
    guard(|| {
        let d = handle(code, "code")?.0.dual_distance()?;
        put(out, d)
    })
}

/// Whether the 0/1 string `word` is a codeword.
///
/// # Safety
/// `code` must be a live handle; `word` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_contains(code: *const PtlabCode, word: *const c_char, out: *mut bool) -> PtlabStatus {
    guard(|| {
        let code = &handle(code, "code")?.0;
        let w: Word = text(word)?.parse()?;
        if w.len() != code.n() {
            return Err(Error::LengthMismatch { expected: code.n(), found: w.len() }.into());
        }
        put(out, code.contains(&w))
    })
}

/// The code file text, canonical generator.
///
/// # Safety
/// `code` must be a live handle; `out` writable. Free the result with
/// [`ptlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_to_string(code: *const PtlabCode, out: *mut *mut c_char) -> PtlabStatus {
    guard(|| {
        let s = owned_string(print_code(&handle(code, "code")?.0))?;
        put(out, s)
    })
}

/// All codewords as a word set.
///
/// # Safety
/// `code` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_code_enumerate(code: *const PtlabCode, out: *mut *mut PtlabWordSet) -> PtlabStatus {
    guard(|| {
        let words = handle(code, "code")?.0.enumerate()?;
        put(out, Box::into_raw(Box::new(PtlabWordSet(words))))
    })
}

/// Parses a word-set file. `n` fixes the word length; 0 takes it from the
/// first line.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_wordset_parse(text_: *const c_char, n: usize, out: *mut *mut PtlabWordSet) -> PtlabStatus {
    guard(|| {
        let s = parse_wordset(text(text_)?, (n > 0).then_some(n))?;
        put(out, Box::into_raw(Box::new(PtlabWordSet(s))))
    })
}

/// Number of words, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptlab_wordset_len(set: *const PtlabWordSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptlab_wordset_free(set: *mut PtlabWordSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Parses a tester file.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_tester_parse(text_: *const c_char, out: *mut *mut PtlabTester) -> PtlabStatus {
    guard(|| {
        let t = parse_tester(text(text_)?)?;
        put(out, Box::into_raw(Box::new(PtlabTester(t))))
    })
}

/// # Safety
/// `tester` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptlab_tester_free(tester: *mut PtlabTester) {
    if !tester.is_null() {
        drop(Box::from_raw(tester));
    }
}

/// Acceptance probability of the 0/1 string `word`, exact value rounded to
/// a double.
///
/// # Safety
/// `tester` must be a live handle; `word` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ptlab_tester_accept(tester: *const PtlabTester, word: *const c_char, out: *mut f64) -> PtlabStatus {
    guard(|| {
        let t = &handle(tester, "tester")?.0;
        let w: Word = text(word)?.parse()?;
        let p = t.accept_word(&w)?;
        put(out, to_f64(&p))
    })
}

unsafe fn certify(
    code: *const PtlabCode,
    subset: *const PtlabWordSet,
    tester: *const PtlabTester,
    tau: *const c_char,
    adaptive: bool,
    out_report: *mut *mut c_char,
    out_pass: *mut bool,
) -> PtlabStatus {
    guard(|| {
        let code = &handle(code, "code")?.0;
        let cp = &handle(subset, "word set")?.0;
        let t = &handle(tester, "tester")?.0;
        let tau = parse_rational(text(tau)?)?;
        let report = if adaptive {
            certify_adaptive(code, cp, t, &tau)?.to_report()
        } else {
            certify_nonadaptive(code, cp, t, &tau)?.to_report()
        };
        if out_report.is_null() || out_pass.is_null() {
            return Err(Fail(PtlabStatus::NullPointer, "null output pointer".into()));
        }
        put(out_pass, report.pass())?;
        put(out_report, owned_string(report.render())?)
    })
}

/// Builds the adaptive certificate for `subset` inside `code` against
/// `tester`, with discerning threshold `tau` (`"p/q"`). Writes the rendered
/// report and its verdict.
///
/// # Safety
/// Handles must be live; `tau` a NUL-terminated string; outputs writable.
/// Free the report with [`ptlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ptlab_certify_adaptive(
    code: *const PtlabCode,
    subset: *const PtlabWordSet,
    tester: *const PtlabTester,
    tau: *const c_char,
    out_report: *mut *mut c_char,
    out_pass: *mut bool,
) -> PtlabStatus {
    certify(code, subset, tester, tau, true, out_report, out_pass)
}

/// Non-adaptive counterpart of [`ptlab_certify_adaptive`]; the tester must
/// be non-adaptive.
///
/// # Safety
/// As for [`ptlab_certify_adaptive`].
#[no_mangle]
pub unsafe extern "C" fn ptlab_certify_nonadaptive(
    code: *const PtlabCode,
    subset: *const PtlabWordSet,
    tester: *const PtlabTester,
    tau: *const c_char,
    out_report: *mut *mut c_char,
    out_pass: *mut bool,
) -> PtlabStatus {
    certify(code, subset, tester, tau, false, out_report, out_pass)
}
