//! C ABI over `gf-core`.
//!
//! Every function returns a [`GfStatus`]; results go through out-pointers.
//! Objects are opaque handles released with their `_free` function, and
//! strings returned to the caller are released with [`gf_string_free`].
//! After a failure, [`gf_last_error`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gf_core::ce_engine::{betti, invariants_dim, BettiReport, Ladder, Status};
use gf_core::cli_runner::{run, JobSpec};
use gf_core::cocycle_lab::{make_named_cocycle, verify_cocycle};
use gf_core::{AlgebraKind, GfError, ModuleSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfStatus {
    Ok = 0,
    NonStabilized = 1,
    Invalid = 2,
    Unsupported = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfAlgebra {
    W1 = 0,
    L0 = 1,
    L1 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfDegreeStatus {
    Exact = 0,
    Stabilized = 1,
    Nonstabilized = 2,
}

/// Parsed coefficient module.
pub struct GfModule(ModuleSpec);

/// Result of [`gf_betti`].
pub struct GfBettiReport(BettiReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(err: &GfError) -> GfStatus {
    set_error(err.to_string());
    match err {
        GfError::UnboundedWeightSpace { .. } => GfStatus::Unsupported,
        _ => GfStatus::Invalid,
    }
}

fn guard(f: impl FnOnce() -> GfStatus) -> GfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error (panic)");
            GfStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GfStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(GfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        GfStatus::Invalid
    })
}

fn to_c_string(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return GfStatus::NullPointer;
        }
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

impl From<GfAlgebra> for AlgebraKind {
    fn from(a: GfAlgebra) -> Self {
        match a {
            GfAlgebra::W1 => AlgebraKind::W1,
            GfAlgebra::L0 => AlgebraKind::L0,
            GfAlgebra::L1 => AlgebraKind::L1,
        }
    }
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_module_parse(text: *const c_char, out: *mut *mut GfModule) -> GfStatus {
    guard(|| {
        non_null!(out);
        let text = tri!(read_str(text));
        match text.parse::<ModuleSpec>() {
            Ok(m) => {
                *out = Box::into_raw(Box::new(GfModule(m)));
                GfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from [`gf_module_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_module_free(m: *mut GfModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Canonical text form; release with [`gf_string_free`].
///
/// # Safety
/// `m` must be a live module handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_module_canonical(m: *const GfModule, out: *mut *mut c_char) -> GfStatus {
    guard(|| {
        non_null!(m, out);
        *out = to_c_string(&(*m).0.to_string());
        GfStatus::Ok
    })
}

/// Betti numbers in degrees `0..=qmax`. A `window` of 0 selects the default
/// ladder 8:2:3. The report is produced also when some degree did not
/// stabilize; the status is then [`GfStatus::NonStabilized`].
///
/// # Safety
/// `m` must be a live module handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_betti(
    algebra: GfAlgebra,
    m: *const GfModule,
    qmax: usize,
    ladder_start: i64,
    ladder_step: i64,
    window: usize,
    out: *mut *mut GfBettiReport,
) -> GfStatus {
    guard(|| {
        non_null!(m, out);
        let ladder = if window == 0 { Ladder::default() } else { Ladder::new(ladder_start, ladder_step, window) };
        match betti(algebra.into(), &(*m).0, qmax, &ladder) {
            Ok(r) => {
                let settled = r.all_settled();
                *out = Box::into_raw(Box::new(GfBettiReport(r)));
                if settled {
                    GfStatus::Ok
                } else {
                    set_error("some degrees did not stabilize");
                    GfStatus::NonStabilized
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gf_betti_report_free(r: *mut GfBettiReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of degrees in the report (`qmax + 1`), or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gf_betti_report_degree_count(r: *const GfBettiReport) -> usize {
    if r.is_null() {
        0
    } else {
        (&(*r).0.q).len()
    }
}

/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_betti_report_betti(r: *const GfBettiReport, q: usize, out: *mut usize) -> GfStatus {
    guard(|| {
        non_null!(r, out);
        match (&(*r).0.q).get(q) {
            Some(d) => {
                *out = d.betti;
                GfStatus::Ok
            }
            None => {
                set_error(format!("degree {q} is not in the report"));
                GfStatus::Invalid
            }
        }
    })
}

/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_betti_report_status(r: *const GfBettiReport, q: usize, out: *mut GfDegreeStatus) -> GfStatus {
    guard(|| {
        non_null!(r, out);
        match (&(*r).0.q).get(q) {
            Some(d) => {
                *out = match d.status {
                    Status::Exact => GfDegreeStatus::Exact,
                    Status::Stabilized => GfDegreeStatus::Stabilized,
                    Status::Nonstabilized => GfDegreeStatus::Nonstabilized,
                };
                GfStatus::Ok
            }
            None => {
                set_error(format!("degree {q} is not in the report"));
                GfStatus::Invalid
            }
        }
    })
}

/// Canonical JSON of the report; release with [`gf_string_free`].
///
/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_betti_report_json(r: *const GfBettiReport, out: *mut *mut c_char) -> GfStatus {
    guard(|| {
        non_null!(r, out);
        *out = to_c_string(&(*r).0.to_canonical_json());
        GfStatus::Ok
    })
}

/// Checks the named cocycle on all tuples with indices `<= k`.
/// `marked_points` of 0 uses the largest index in the name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_verify_cocycle(name: *const c_char, marked_points: usize, k: i64, pass: *mut bool) -> GfStatus {
    guard(|| {
        non_null!(pass);
        let name = tri!(read_str(name));
        let n = (marked_points > 0).then_some(marked_points);
        match make_named_cocycle(name, n) {
            Ok(c) => {
                *pass = verify_cocycle(&c, k).pass;
                GfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Dimension of the L1-invariants of weight `w`.
///
/// # Safety
/// `m` must be a live module handle; `dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_invariants_h0(m: *const GfModule, w: i64, dim: *mut usize) -> GfStatus {
    guard(|| {
        non_null!(m, dim);
        match invariants_dim(&(*m).0, w) {
            Ok(d) => {
                *dim = d;
                GfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs a JSON job as the `gf run` command does, without caching or
/// writing files. `exit_code` receives the CLI exit code and `report` the
/// JSON report (release with [`gf_string_free`]).
///
/// # Safety
/// `job_json` must be a NUL-terminated string; `exit_code` and `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_run_job(job_json: *const c_char, exit_code: *mut i32, report: *mut *mut c_char) -> GfStatus {
    guard(|| {
        non_null!(exit_code, report);
        let text = tri!(read_str(job_json));
        let job = match JobSpec::from_json(text) {
            Ok(j) => j,
            Err(e) => return fail(&e),
        };
        let o = run(&job, None);
        *exit_code = o.exit.code();
        *report = to_c_string(&o.json);
        GfStatus::Ok
    })
}
