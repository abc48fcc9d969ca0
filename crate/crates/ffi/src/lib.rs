//! C ABI over `evoalg`.
//!
//! Algebras cross the boundary as opaque `EvoAlgebra*` handles. Every
//! fallible call returns an `EvoStatus`; on failure a message is kept per
//! thread and can be read with `evoalg_last_error_message`. Strings returned
//! through `char**` out-parameters are owned by the caller and must be
//! released with `evoalg_string_free`. Panics never unwind into C: they are
//! caught and reported as `EVO_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use evoalg::report::{self, AnalysisReport, Settings};
use evoalg::{baric, nilpotent, AlgebraDocument, Error, EvolutionAlgebra, Permutation, Rational};

/// Opaque algebra handle.
pub struct EvoAlgebra {
    inner: EvolutionAlgebra,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    PreconditionFailed = 4,
    Panic = 5,
}

/// Which report `evoalg_analyze_json` produces (passed as its integer value).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvoAnalysis {
    All = 0,
    Baric = 1,
    Nilpotent = 2,
    Idempotent = 3,
    Decompose = 4,
    Canonical = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> EvoStatus {
    match err {
        Error::Document(_) | Error::InvalidRational(_) => EvoStatus::ParseError,
        Error::InvalidPermutation(_)
        | Error::DegreeMismatch { .. }
        | Error::DimensionMismatch { .. }
        | Error::EqualPermutations => EvoStatus::InvalidArgument,
        _ => EvoStatus::PreconditionFailed,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (EvoStatus, String)>) -> EvoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EvoStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            EvoStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (EvoStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EvoStatus, String) {
    (EvoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(h: *const EvoAlgebra) -> Result<&'a EvolutionAlgebra, (EvoStatus, String)> {
    h.as_ref().map(|a| &a.inner).ok_or_else(|| null("algebra handle"))
}

/// Parses a JSON algebra document (fields `n`, `pi`, `tau`, `a_pi`,
/// `a_tau`) into a new handle written to `*out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_algebra_from_json(json: *const c_char, out: *mut *mut EvoAlgebra) -> EvoStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (EvoStatus::ParseError, "json is not valid UTF-8".to_string()))?;
        let doc = AlgebraDocument::parse(text).map_err(lib_err)?;
        let inner = doc.algebra().map_err(lib_err)?.clone();
        *out = Box::into_raw(Box::new(EvoAlgebra { inner }));
        Ok(())
    })
}

unsafe fn rationals(n: usize, num: *const i64, den: *const i64, name: &str) -> Result<Vec<Rational>, (EvoStatus, String)> {
    if num.is_null() || den.is_null() {
        return Err(null(name));
    }
    let (num, den) = (slice::from_raw_parts(num, n), slice::from_raw_parts(den, n));
    num.iter()
        .zip(den)
        .enumerate()
        .map(|(i, (&p, &q))| {
            if q == 0 {
                Err((EvoStatus::InvalidArgument, format!("{name}[{}] has a zero denominator", i + 1)))
            } else {
                Ok(evoalg::rational::ratio(p, q))
            }
        })
        .collect()
}

/// Builds an algebra from 1-based permutation images and coefficient
/// numerator/denominator arrays, all of length `n`.
///
/// # Safety
/// Every array pointer must reference `n` readable elements; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_algebra_new(
    n: usize,
    pi: *const usize,
    tau: *const usize,
    a_pi_num: *const i64,
    a_pi_den: *const i64,
    a_tau_num: *const i64,
    a_tau_den: *const i64,
    out: *mut *mut EvoAlgebra,
) -> EvoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if pi.is_null() || tau.is_null() {
            return Err(null("permutation array"));
        }
        let pi = Permutation::new(slice::from_raw_parts(pi, n).to_vec()).map_err(lib_err)?;
        let tau = Permutation::new(slice::from_raw_parts(tau, n).to_vec()).map_err(lib_err)?;
        let a_pi = rationals(n, a_pi_num, a_pi_den, "a_pi")?;
        let a_tau = rationals(n, a_tau_num, a_tau_den, "a_tau")?;
        let inner = EvolutionAlgebra::new(pi, tau, a_pi, a_tau).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EvoAlgebra { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn evoalg_algebra_free(h: *mut EvoAlgebra) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_algebra_dim(h: *const EvoAlgebra, out: *mut usize) -> EvoStatus {
    guard(|| {
        let e = handle(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = e.n();
        Ok(())
    })
}

/// Number of coordinate weight functions.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_weight_function_count(h: *const EvoAlgebra, out: *mut usize) -> EvoStatus {
    guard(|| {
        let e = handle(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = baric::weight_functions(e).len();
        Ok(())
    })
}

/// Free parameters of the absolute nilpotent family; zero means the
/// trivial element is the only one.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_nilpotent_free_params(h: *const EvoAlgebra, out: *mut usize) -> EvoStatus {
    guard(|| {
        let e = handle(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = nilpotent::absolute_nilpotents(e).total_free_params;
        Ok(())
    })
}

/// Writes the JSON report for `which` (an `EvoAnalysis` value) to `*out`;
/// free it with `evoalg_string_free`. `seed` drives the randomized
/// character checks.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoalg_analyze_json(
    h: *const EvoAlgebra,
    which: i32,
    seed: u64,
    out: *mut *mut c_char,
) -> EvoStatus {
    guard(|| {
        let e = handle(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let which = match which {
            0 => EvoAnalysis::All,
            1 => EvoAnalysis::Baric,
            2 => EvoAnalysis::Nilpotent,
            3 => EvoAnalysis::Idempotent,
            4 => EvoAnalysis::Decompose,
            5 => EvoAnalysis::Canonical,
            other => return Err((EvoStatus::InvalidArgument, format!("unknown analysis {other}"))),
        };
        let settings = Settings { seed, ..Settings::default() };
        let base = |cmd: &str| AnalysisReport::for_algebra(cmd, e);
        let r = match which {
            EvoAnalysis::All => report::analyze(e, &settings),
            EvoAnalysis::Baric => Ok(AnalysisReport { baric: Some(report::baric_section(e, &settings)), ..base("baric") }),
            EvoAnalysis::Nilpotent => {
                Ok(AnalysisReport { nilpotent: Some(report::nilpotent_section(e)), ..base("nilpotent") })
            }
            EvoAnalysis::Idempotent => report::idempotent_section(e, &settings)
                .map(|s| AnalysisReport { idempotent: Some(s), ..base("idempotent") }),
            EvoAnalysis::Decompose => report::decomposition_section(e)
                .map(|s| AnalysisReport { decomposition: Some(s), ..base("decompose") }),
            EvoAnalysis::Canonical => report::canonical_section(e)
                .map(|s| AnalysisReport { canonical: Some(s), ..base("canonical") }),
        }
        .map_err(lib_err)?;
        let s = CString::new(r.to_json()).expect("JSON has no interior NUL");
        *out = s.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn evoalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn evoalg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
