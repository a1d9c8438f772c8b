//! C ABI over `btquot`.
//!
//! Curves are opaque handles created with `btq_curve_new` and released with
//! `btq_curve_free`. Every fallible call returns a `BtqStatus`; on failure
//! `btq_last_error` describes the problem. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with `btq_string_free`.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use btquot::cli::{cmd_classify, cmd_domain, cmd_homology, exit_code, EXIT_BUDGET, EXIT_INVALID, EXIT_VERIFY};
use btquot::curve::WeierstrassCurve;
use btquot::domain::{build_domain_with, DomainContext};
use btquot::field::FiniteField;
use btquot::homology::{h1_pgl2, main_theorem_report};
use btquot::laurent::DEFAULT_PRECISION;
use btquot::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    VerificationFailed = 4,
    Internal = 5,
}

/// A Weierstrass cubic over a finite field with its Laurent embedding.
pub struct BtqCurve {
    ctx: DomainContext,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BtqStatus {
    match exit_code(e) {
        EXIT_INVALID => BtqStatus::InvalidInput,
        EXIT_BUDGET => BtqStatus::BudgetExceeded,
        EXIT_VERIFY => BtqStatus::VerificationFailed,
        _ => BtqStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), BtqStatus>) -> BtqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BtqStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            BtqStatus::Internal
        }
    }
}

fn fail(e: Error) -> BtqStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BtqStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(BtqStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        BtqStatus::InvalidInput
    })
}

unsafe fn handle<'a>(c: *const BtqCurve) -> Result<&'a BtqCurve, BtqStatus> {
    unsafe { c.as_ref() }.ok_or_else(|| {
        set_error("null curve handle");
        BtqStatus::NullPointer
    })
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), BtqStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(BtqStatus::NullPointer);
    }
    let c = CString::new(s).map_err(|_| BtqStatus::Internal)?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn to_json(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("json")
}

/// Message for the most recent failure on this thread. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn btq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn btq_status_message(status: BtqStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BtqStatus::Ok => c"ok",
        BtqStatus::NullPointer => c"null pointer",
        BtqStatus::InvalidInput => c"invalid input",
        BtqStatus::BudgetExceeded => c"budget exceeded",
        BtqStatus::VerificationFailed => c"verification failed",
        BtqStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Creates a curve from a field spec (`"5"`, `"2^2"`) and coefficients
/// `"a1,a2,a3,a4,a6"`.
///
/// # Safety
/// `field` and `coeffs` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn btq_curve_new(field: *const c_char, coeffs: *const c_char, out: *mut *mut BtqCurve) -> BtqStatus {
    guard(|| {
        let (field, coeffs) = unsafe { (read_str(field)?, read_str(coeffs)?) };
        if out.is_null() {
            set_error("null output pointer");
            return Err(BtqStatus::NullPointer);
        }
        let k = FiniteField::parse(field).map_err(fail)?;
        let curve = WeierstrassCurve::parse(&k, coeffs).map_err(fail)?;
        let ctx = DomainContext::new(&curve, DEFAULT_PRECISION).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(BtqCurve { ctx })) };
        Ok(())
    })
}

/// # Safety
/// `curve` must come from `btq_curve_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn btq_curve_free(curve: *mut BtqCurve) {
    if !curve.is_null() {
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Number of rational points, including the point at infinity.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_curve_point_count(curve: *const BtqCurve, out: *mut u64) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        if out.is_null() {
            return Err(BtqStatus::NullPointer);
        }
        unsafe { *out = c.ctx.curve().points().len() as u64 };
        Ok(())
    })
}

/// Whether the curve has no rational singular point.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_curve_is_smooth(curve: *const BtqCurve, out: *mut bool) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        if out.is_null() {
            return Err(BtqStatus::NullPointer);
        }
        unsafe { *out = c.ctx.curve().is_smooth() };
        Ok(())
    })
}

/// Fiber case table as JSON.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_classify_json(curve: *const BtqCurve, out: *mut *mut c_char) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        unsafe { put_string(out, to_json(&cmd_classify(c.ctx.curve()))) }
    })
}

/// The fundamental domain truncated at `depth`, as JSON.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_domain_json(curve: *const BtqCurve, depth: u32, out: *mut *mut c_char) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        let v = cmd_domain(&c.ctx, depth).map_err(fail)?;
        unsafe { put_string(out, to_json(&v)) }
    })
}

/// The fundamental domain truncated at `depth`, in Graphviz DOT.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_domain_dot(curve: *const BtqCurve, depth: u32, out: *mut *mut c_char) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        let d = build_domain_with(&c.ctx, depth).map_err(fail)?;
        unsafe { put_string(out, d.to_dot()) }
    })
}

/// Degree-one homology summands as JSON.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_homology_json(curve: *const BtqCurve, out: *mut *mut c_char) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        let v = cmd_homology(&c.ctx).map_err(fail)?;
        unsafe { put_string(out, to_json(&v)) }
    })
}

/// Certificate ledger as JSON. Returns `BTQ_STATUS_VERIFICATION_FAILED`
/// (with the ledger still written to `out`) when some entry fails.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_certify_json(curve: *const BtqCurve, budget: u64, out: *mut *mut c_char) -> BtqStatus {
    guard(|| {
        let c = unsafe { handle(curve)? };
        let report = main_theorem_report(&c.ctx, budget as u128).map_err(fail)?;
        unsafe { put_string(out, to_json(&report.to_json(&c.ctx)))? };
        if report.pass() {
            Ok(())
        } else {
            set_error("certificate ledger has failing entries");
            Err(BtqStatus::VerificationFailed)
        }
    })
}

/// Order of the abelianization of `PGL2(F_q)`; needs `q >= 4`.
///
/// # Safety
/// `field` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn btq_h1_pgl2(field: *const c_char, out: *mut u64) -> BtqStatus {
    guard(|| {
        let field = unsafe { read_str(field)? };
        if out.is_null() {
            return Err(BtqStatus::NullPointer);
        }
        let k = FiniteField::parse(field).map_err(fail)?;
        let n = h1_pgl2(&k).map_err(fail)?;
        unsafe { *out = n };
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn btq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
