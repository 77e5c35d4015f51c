//! C ABI over `foliation-kit`.
//!
//! Every function returns an [`FkStatus`]. On failure a message is kept per
//! thread and read with [`fk_last_error`]. Strings handed out by the library
//! must be released with [`fk_string_free`], handles with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use foliation_kit::brieskorn::relative_module;
use foliation_kit::cli::{exit_code, run, RunOptions};
use foliation_kit::foliation::{check_conditions, milnor_f, RationalFirstIntegral};
use foliation_kit::poly::Vars;
use foliation_kit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FkStatus {
    Ok = 0,
    /// An asserted identity failed.
    Verification = 1,
    /// Malformed or non-generic input.
    Input = 2,
    /// A search cap or numeric breakdown.
    Cap = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Opaque first integral `P^q / Q^p`.
pub struct FkFirstIntegral {
    inner: RationalFirstIntegral,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_error(e: Error) -> FkStatus {
    let status = match exit_code(&e) {
        1 => FkStatus::Verification,
        3 => FkStatus::Cap,
        _ => FkStatus::Input,
    };
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> FkStatus) -> FkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("panic inside foliation-kit".into());
        FkStatus::Panic
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, FkStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(FkStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8".into());
        FkStatus::InvalidUtf8
    })
}

fn hand_out(s: String, out: *mut *mut c_char) -> FkStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            FkStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte".into());
            FkStatus::Input
        }
    }
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn fk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn fk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Global Milnor number `(m + n − 1)² − mn` for degrees `(m, n)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_milnor_f(m: u32, n: u32, out: *mut u64) -> FkStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        match milnor_f(m, n) {
            Ok(v) => {
                *out = v;
                FkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds `P^q / Q^p` from homogeneous `P, Q` in `x, y, z`. `p = q = 0` derives the
/// exponents from the degrees.
///
/// # Safety
/// `p_text`, `q_text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_first_integral_new(
    p_text: *const c_char,
    q_text: *const c_char,
    p: u32,
    q: u32,
    out: *mut *mut FkFirstIntegral,
) -> FkStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        let (pt, qt) = (try_ffi!(text(p_text)), try_ffi!(text(q_text)));
        let vars = Vars::generic(3);
        let built = vars.parse(pt).and_then(|pp| {
            let qq = vars.parse(qt)?;
            let (dp, dq) = foliation_kit::foliation::exponents_for(pp.degree().unwrap_or(0), qq.degree().unwrap_or(0));
            let (p, q) = if p == 0 && q == 0 { (dp, dq) } else { (p, q) };
            RationalFirstIntegral::new(pp, qq, p, q)
        });
        match built {
            Ok(f) => {
                *out = Box::into_raw(Box::new(FkFirstIntegral { inner: f }));
                FkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `f` must come from [`fk_first_integral_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fk_first_integral_free(f: *mut FkFirstIntegral) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Degrees `m = deg P`, `n = deg Q`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_first_integral_degrees(f: *const FkFirstIntegral, m: *mut u32, n: *mut u32) -> FkStatus {
    guard(|| {
        let Some(f) = f.as_ref() else {
            set_error("null handle".into());
            return FkStatus::NullPointer;
        };
        if m.is_null() || n.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        *m = f.inner.m();
        *n = f.inner.n();
        FkStatus::Ok
    })
}

/// Dimension of the relative module, from a Gröbner basis.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_module_dimension(f: *const FkFirstIntegral, out: *mut u64) -> FkStatus {
    guard(|| {
        let Some(f) = f.as_ref() else {
            set_error("null handle".into());
            return FkStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        match relative_module(&f.inner) {
            Ok(module) => {
                *out = module.dimension as u64;
                FkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Genericity report as JSON. Free the result with [`fk_string_free`].
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_check_conditions_json(f: *const FkFirstIntegral, out: *mut *mut c_char) -> FkStatus {
    guard(|| {
        let Some(f) = f.as_ref() else {
            set_error("null handle".into());
            return FkStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        let report = check_conditions(&f.inner);
        match serde_json::to_string(&report) {
            Ok(s) => hand_out(s, out),
            Err(e) => from_error(e.into()),
        }
    })
}

/// Runs a problem file given as JSON text and returns the report. `seed < 0`
/// keeps the file's seed. The return value is the report's exit code as a
/// status; the report is produced whenever the input parses.
///
/// # Safety
/// `problem` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_run_json(problem: *const c_char, seed: i64, out: *mut *mut c_char) -> FkStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FkStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let input = try_ffi!(text(problem));
        let opts = RunOptions { seed: (seed >= 0).then_some(seed as u64), ..Default::default() };
        match run(input, &opts) {
            Ok(report) => {
                let status = match report.exit_code {
                    0 => FkStatus::Ok,
                    1 => FkStatus::Verification,
                    2 => FkStatus::Input,
                    _ => FkStatus::Cap,
                };
                if status != FkStatus::Ok {
                    set_error(format!("report exit code {}", report.exit_code));
                }
                match hand_out(report.to_json(), out) {
                    FkStatus::Ok => status,
                    s => s,
                }
            }
            Err(e) => from_error(e),
        }
    })
}
