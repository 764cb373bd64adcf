//! C ABI over `horn-dmod`.
//!
//! A system is parsed once into an opaque [`HdmSystem`] handle and then
//! queried. Every query writes a JSON document (owned by the caller, release it
//! with [`hdm_string_free`]) and returns an [`HdmStatus`] whose first four
//! values match the exit codes of the `horn-dmod` binary. On failure the
//! message is available from [`hdm_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use horn_dmod::cli::{self, evaluate, Action, Outcome, SystemKind};
use horn_dmod::groebner::DEFAULT_BUDGET;
use horn_dmod::systems::HornData;
use horn_dmod::Error;

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdmStatus {
    /// The check passed or the value was computed.
    Ok = 0,
    /// The check ran and came out negative.
    Negative = 1,
    /// A resource limit was hit or the check does not apply.
    Inconclusive = 2,
    /// The input was rejected.
    InputError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Analyses available through [`hdm_run`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdmAction {
    Validate = 0,
    Construct = 1,
    Rank = 2,
    Holonomic = 3,
    Regular = 4,
    BfunctionCert = 5,
    BfunctionCertDeep = 6,
    Restrict = 7,
    VerifyRestriction = 8,
    CheckHolonomicityTransfer = 9,
    CheckCorrespondence = 10,
    Report = 11,
}

/// Which system `Rank` and `Holonomic` look at.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdmSystemKind {
    /// Use the `"system"` key of the input, or the lattice system if absent.
    Default = 0,
    Lattice = 1,
    Horn = 2,
    Nhorn = 3,
}

/// Opaque handle to a validated `(B, kappa)` pair.
pub struct HdmSystem {
    data: HornData,
    kind: Option<SystemKind>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(code: u8) -> HdmStatus {
    match code {
        0 => HdmStatus::Ok,
        1 => HdmStatus::Negative,
        2 => HdmStatus::Inconclusive,
        _ => HdmStatus::InputError,
    }
}

fn guard(f: impl FnOnce() -> HdmStatus) -> HdmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            HdmStatus::Panic
        }
    }
}

fn write_string(out: *mut *mut c_char, s: String) {
    // interior NULs cannot occur in serde_json output
    let c = CString::new(s).unwrap_or_default();
    unsafe { *out = c.into_raw() };
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HdmStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(HdmStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        HdmStatus::InvalidUtf8
    })
}

fn input_error(e: &Error) -> HdmStatus {
    set_error(e.to_string());
    status_of(cli::exit_code_for(e))
}

/// Parses and validates a JSON input document of the form
/// `{"B": [[...], ...], "kappa": ["p/q", ...], "system": "horn"}`.
///
/// On success `*out` receives a handle to release with [`hdm_system_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hdm_system_from_json(json: *const c_char, out: *mut *mut HdmSystem) -> HdmStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return HdmStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let src = match read_str(json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let spec = match cli::parse_input(src) {
            Ok(s) => s,
            Err(e) => return input_error(&e),
        };
        match HornData::validate(spec.b, spec.kappa) {
            Ok(data) => {
                *out = Box::into_raw(Box::new(HdmSystem { data, kind: spec.system }));
                HdmStatus::Ok
            }
            Err(e) => input_error(&e),
        }
    })
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `sys` must come from [`hdm_system_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hdm_system_free(sys: *mut HdmSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of rows of `B` (the number of lattice variables), or 0 for null.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hdm_system_rows(sys: *const HdmSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.data.n())
}

/// Number of columns of `B` (the number of Horn variables), or 0 for null.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hdm_system_cols(sys: *const HdmSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.data.m())
}

/// Runs one analysis. `budget == 0` selects the default Gröbner budget and
/// `trunc == 0` the default series truncation.
///
/// The JSON result is written to `*out_json` for every status except
/// `NullPointer` and `Panic`; for errors it has the form
/// `{"error": kind, "message": text}`.
///
/// # Safety
/// `sys` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hdm_run(
    sys: *const HdmSystem,
    action: HdmAction,
    kind: HdmSystemKind,
    budget: usize,
    trunc: u32,
    out_json: *mut *mut c_char,
) -> HdmStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return HdmStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let Some(sys) = sys.as_ref() else {
            set_error("null system handle");
            return HdmStatus::NullPointer;
        };
        let action = match action {
            HdmAction::Validate => Action::Validate,
            HdmAction::Construct => Action::Construct,
            HdmAction::Rank => Action::Rank,
            HdmAction::Holonomic => Action::Holonomic,
            HdmAction::Regular => Action::Regular,
            HdmAction::BfunctionCert => Action::BfunctionCert { deep: false },
            HdmAction::BfunctionCertDeep => Action::BfunctionCert { deep: true },
            HdmAction::Restrict => Action::Restrict,
            HdmAction::VerifyRestriction => Action::VerifyRestriction,
            HdmAction::CheckHolonomicityTransfer => Action::CheckHolonomicityTransfer,
            HdmAction::CheckCorrespondence => Action::CheckCorrespondence,
            HdmAction::Report => Action::Report,
        };
        let kind = match kind {
            HdmSystemKind::Default => sys.kind.unwrap_or(SystemKind::Lattice),
            HdmSystemKind::Lattice => SystemKind::Lattice,
            HdmSystemKind::Horn => SystemKind::Horn,
            HdmSystemKind::Nhorn => SystemKind::Nhorn,
        };
        let budget = if budget == 0 { DEFAULT_BUDGET } else { budget };
        let trunc = if trunc == 0 { cli::DEFAULT_TRUNC } else { trunc };
        let Outcome { code, json, .. } = evaluate(&sys.data, action, kind, budget, trunc);
        if code >= 2 {
            if let Some(msg) = json.get("message").and_then(|m| m.as_str()) {
                set_error(msg);
            }
        }
        write_string(out_json, json.to_string());
        status_of(code)
    })
}

/// Holonomicity of the selected system with default settings.
///
/// # Safety
/// As for [`hdm_run`].
#[no_mangle]
pub unsafe extern "C" fn hdm_holonomic(
    sys: *const HdmSystem,
    kind: HdmSystemKind,
    out_json: *mut *mut c_char,
) -> HdmStatus {
    hdm_run(sys, HdmAction::Holonomic, kind, 0, 0, out_json)
}

/// Holonomic rank of the selected system with default settings.
///
/// # Safety
/// As for [`hdm_run`].
#[no_mangle]
pub unsafe extern "C" fn hdm_rank(sys: *const HdmSystem, kind: HdmSystemKind, out_json: *mut *mut c_char) -> HdmStatus {
    hdm_run(sys, HdmAction::Rank, kind, 0, 0, out_json)
}

/// Row-sum regularity check.
///
/// # Safety
/// As for [`hdm_run`].
#[no_mangle]
pub unsafe extern "C" fn hdm_regular(sys: *const HdmSystem, out_json: *mut *mut c_char) -> HdmStatus {
    hdm_run(sys, HdmAction::Regular, HdmSystemKind::Default, 0, 0, out_json)
}

/// Compares the restriction of the lattice module with the normalized Horn module.
///
/// # Safety
/// As for [`hdm_run`].
#[no_mangle]
pub unsafe extern "C" fn hdm_verify_restriction(
    sys: *const HdmSystem,
    budget: usize,
    out_json: *mut *mut c_char,
) -> HdmStatus {
    hdm_run(sys, HdmAction::VerifyRestriction, HdmSystemKind::Default, budget, 0, out_json)
}

/// Full report. Always `Ok` unless an argument is invalid; individual
/// sections carry their own errors.
///
/// # Safety
/// As for [`hdm_run`].
#[no_mangle]
pub unsafe extern "C" fn hdm_report(sys: *const HdmSystem, budget: usize, out_json: *mut *mut c_char) -> HdmStatus {
    hdm_run(sys, HdmAction::Report, HdmSystemKind::Default, budget, 0, out_json)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hdm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hdm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
