//! C ABI over `cabtorsion`.
//!
//! Curves are opaque `CabCurve` handles built from the JSON curve spec. Every
//! fallible call returns a `CabStatus`; the message of the last failure on the
//! calling thread is available from `cab_last_error`. Strings handed out by the
//! library are owned by the caller and released with `cab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cabtorsion::cli::{self, BoundFlags, BoundSource, Caps, Emit, Report};
use cabtorsion::curve::{AnyCurve, CurveSpec};
use cabtorsion::local::{ramification_locus, RamificationProfile};
use cabtorsion::torsion::torsion_points_with;
use cabtorsion::Error;

/// Result of every fallible call. The nonzero library codes match the CLI
/// exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CabStatus {
    Ok = 0,
    InvalidInput = 1,
    Inapplicable = 2,
    CapExceeded = 3,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

impl From<&Error> for CabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Invalid(_) => CabStatus::InvalidInput,
            Error::Inapplicable(_) => CabStatus::Inapplicable,
            Error::CapExceeded(_) => CabStatus::CapExceeded,
        }
    }
}

/// Opaque curve handle.
pub struct CabCurve {
    spec: CurveSpec,
    curve: AnyCurve,
    caps: Caps,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CabStatus, msg: impl Into<String>) -> CabStatus {
    set_error(msg.into());
    status
}

/// Runs `body`, turning library errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), CabStatus>) -> CabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CabStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(CabStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lib<T>(r: cabtorsion::Result<T>) -> Result<T, CabStatus> {
    r.map_err(|e| fail(CabStatus::from(&e), e.to_string()))
}

/// # Safety
/// `s` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CabStatus> {
    if s.is_null() {
        return Err(fail(CabStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(CabStatus::InvalidUtf8, "argument is not UTF-8"))
}

/// # Safety
/// `h` is null or a live handle from `cab_curve_from_json`.
unsafe fn handle<'a>(h: *const CabCurve) -> Result<&'a CabCurve, CabStatus> {
    h.as_ref().ok_or_else(|| fail(CabStatus::NullPointer, "null curve handle"))
}

fn write<T>(out: *mut T, value: T) -> Result<(), CabStatus> {
    if out.is_null() {
        return Err(fail(CabStatus::NullPointer, "null output pointer"));
    }
    // SAFETY: checked non-null; the caller provides writable storage.
    unsafe { out.write(value) };
    Ok(())
}

fn write_report(out: *mut *mut c_char, report: Report) -> Result<(), CabStatus> {
    let text = report.render(Emit::Machine);
    let c = CString::new(text).map_err(|_| fail(CabStatus::Panic, "report contains NUL"))?;
    write(out, c.into_raw())
}

fn finite(h: &CabCurve) -> Result<&cabtorsion::curve::Curve<cabtorsion::exact_arith::Fq>, CabStatus> {
    match &h.curve {
        AnyCurve::Finite(c) => Ok(c),
        AnyCurve::Rational(_) => Err(fail(CabStatus::Inapplicable, "needs a curve over a finite field")),
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a JSON curve spec and builds the curve.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_curve_from_json(json: *const c_char, out: *mut *mut CabCurve) -> CabStatus {
    guard(|| {
        let spec = lib(CurveSpec::from_json(read_str(json)?))?;
        let curve = lib(spec.build())?;
        let caps = lib(Caps::resolve(None, None, Some(&spec)))?;
        write(out, Box::into_raw(Box::new(CabCurve { spec, curve, caps })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` is null or a handle from `cab_curve_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cab_curve_free(h: *mut CabCurve) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Overrides the extension-degree and series-precision caps; zero keeps the
/// current value.
///
/// # Safety
/// `h` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn cab_curve_set_caps(h: *mut CabCurve, ext_cap: usize, series_cap: usize) -> CabStatus {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| fail(CabStatus::NullPointer, "null curve handle"))?;
        if ext_cap > 0 {
            h.caps.ext_cap = ext_cap;
        }
        if series_cap > 0 {
            h.caps.series_cap = series_cap;
        }
        Ok(())
    })
}

/// Genus (a-1)(b-1)/2.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_curve_genus(h: *const CabCurve, out: *mut usize) -> CabStatus {
    guard(|| write(out, handle(h)?.curve.genus()))
}

/// Number of points over the degree-m extension of the base field.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_curve_count_points(h: *const CabCurve, m: usize, out: *mut u64) -> CabStatus {
    guard(|| {
        let c = finite(handle(h)?)?;
        write(out, lib(c.count_points(m))?)
    })
}

/// |X[N]|, the number of points of the curve that are N-torsion in the
/// Jacobian. Fails with `CapExceeded` if some closed point lies beyond the
/// extension cap.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_torsion_count(h: *const CabCurve, n: usize, out: *mut usize) -> CabStatus {
    guard(|| {
        let h = handle(h)?;
        let c = finite(h)?;
        let ram = lib(ramification_locus(c, h.caps.ext_cap, h.caps.series_cap))?;
        let rep = lib(torsion_points_with(c, &ram, n, h.caps.ext_cap, h.caps.series_cap))?;
        if !rep.is_complete() {
            return Err(fail(
                CabStatus::CapExceeded,
                format!("closed points of degrees {:?} exceed the extension cap", rep.skipped_degrees),
            ));
        }
        write(out, rep.count())
    })
}

/// JSON report of genus, gaps and ramification.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_analyze_json(h: *const CabCurve, out: *mut *mut c_char) -> CabStatus {
    guard(|| {
        let h = handle(h)?;
        write_report(out, lib(cli::cmd_analyze(&h.spec, h.caps))?)
    })
}

/// JSON report of Δ_N and its minors for N in [n_lo, n_hi]; `r` < 0 means
/// every truncation level.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_delta_json(
    h: *const CabCurve,
    n_lo: usize,
    n_hi: usize,
    r: i64,
    out: *mut *mut c_char,
) -> CabStatus {
    guard(|| {
        let h = handle(h)?;
        if n_lo > n_hi {
            return Err(fail(CabStatus::InvalidInput, "empty level range"));
        }
        let r = usize::try_from(r).ok();
        write_report(out, lib(cli::cmd_delta(&h.spec, n_lo..=n_hi, r, h.caps))?)
    })
}

/// JSON report of X[N] with orbits and the bound check.
///
/// # Safety
/// `h` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_torsion_json(
    h: *const CabCurve,
    n: usize,
    purely_inseparable: bool,
    out: *mut *mut c_char,
) -> CabStatus {
    guard(|| {
        let h = handle(h)?;
        write_report(out, lib(cli::cmd_torsion(&h.spec, n, purely_inseparable, h.caps))?)
    })
}

/// JSON report of every bound for N in [n_lo, n_hi] from a manual
/// ramification profile in characteristic `p`.
///
/// # Safety
/// `profile_json` is a NUL-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cab_bounds_profile_json(
    profile_json: *const c_char,
    p: u64,
    n_lo: usize,
    n_hi: usize,
    purely_inseparable: bool,
    delta_nonzero: bool,
    out: *mut *mut c_char,
) -> CabStatus {
    guard(|| {
        let profile = lib(RamificationProfile::from_json(read_str(profile_json)?))?;
        if n_lo > n_hi {
            return Err(fail(CabStatus::InvalidInput, "empty level range"));
        }
        let flags = BoundFlags { purely_inseparable, p: Some(p), delta_nonzero };
        let caps = lib(Caps::resolve(None, None, None))?;
        write_report(out, lib(cli::cmd_bounds(&BoundSource::Profile(profile), n_lo..=n_hi, flags, caps))?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
