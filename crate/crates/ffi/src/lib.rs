//! C ABI for the confray engine.
//!
//! Conventions:
//! - every fallible call returns a [`ConfrayStatus`]; `Ok` is zero;
//! - results come back through out-pointers: opaque handles
//!   (`ConfrayField`, `ConfrayState`) or NUL-terminated UTF-8 strings;
//! - strings returned by the library are freed with
//!   [`confray_string_free`], handles with their `_free` function;
//! - after any non-`Ok` status, [`confray_last_error_message`] returns a
//!   human-readable description (also a library-owned string).
//!
//! JSON payloads use the same wire formats as the `confray` CLI and the
//! schemas shipped with the core crate.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use confray::event::EventState;
use confray::minkowski::FourVector;
use confray::parser::{parse_vector_field, render_vector_field};
use confray::phase::ShiftReport;
use confray::scalar::Scalar;
use confray::suites::{
    emit_report, run_suite, EngineMode, ReportFormat, SuiteConfig, SuiteError, SuiteName,
};
use confray::vecfield::{
    conformal_factor, decompose_in_basis, lie_commutator, standard_generator, GeneratorKind,
    VectorField,
};

/// Status of a C-API call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfrayStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The field expression did not parse; see the last error message.
    ParseError = 3,
    /// The field is not conformal; the message carries the residual.
    NotConformal = 4,
    /// The field lies outside the 15-generator span.
    NotInSpan = 5,
    /// A JSON payload was malformed or violated an invariant.
    InvalidData = 6,
    /// The state or momentum is massless where a mass is required.
    Massless = 7,
    /// The suite or generator name is not recognised.
    UnknownName = 8,
    /// The suite configuration was rejected.
    BadConfig = 9,
    /// The suite ran to completion and reported failing cases.
    SuiteFailures = 10,
    /// Symbolic evaluation failed (mass cap or null momentum).
    EvaluationError = 11,
    /// The library caught a panic; state may be stale.
    Internal = 12,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn fail(status: ConfrayStatus, message: impl Into<String>) -> ConfrayStatus {
    set_error(message);
    status
}

/// Opaque handle around a polynomial vector field.
pub struct ConfrayField(VectorField);

/// Opaque handle around a multi-ray event state.
pub struct ConfrayState(EventState);

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ConfrayStatus> {
    if ptr.is_null() {
        return Err(fail(ConfrayStatus::NullArgument, "string argument is NULL"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ConfrayStatus::InvalidUtf8, "string argument is not UTF-8"))
}

fn write_string(out: *mut *mut c_char, text: String) -> ConfrayStatus {
    if out.is_null() {
        return fail(ConfrayStatus::NullArgument, "output pointer is NULL");
    }
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            ConfrayStatus::Ok
        }
        Err(_) => fail(ConfrayStatus::Internal, "result contained a NUL byte"),
    }
}

fn guarded(body: impl FnOnce() -> ConfrayStatus) -> ConfrayStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(ConfrayStatus::Internal, "internal panic"),
    }
}

/// Returns the library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn confray_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns a copy of the most recent error message on this thread (empty if
/// none). Free with `confray_string_free`.
#[no_mangle]
pub extern "C" fn confray_last_error_message() -> *mut c_char {
    let message = LAST_ERROR.with(|slot| slot.borrow().clone());
    CString::new(message)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Frees a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a confray function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn confray_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a field expression (or generator keyword) into a handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_parse(
    text: *const c_char,
    out: *mut *mut ConfrayField,
) -> ConfrayStatus {
    guarded(|| {
        let text = match read_str(text) {
            Ok(text) => text,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(ConfrayStatus::NullArgument, "output pointer is NULL");
        }
        match parse_vector_field(text) {
            Ok(parsed) => {
                *out = Box::into_raw(Box::new(ConfrayField(parsed.field)));
                ConfrayStatus::Ok
            }
            Err(err) => fail(ConfrayStatus::ParseError, err.to_string()),
        }
    })
}

/// Builds one of the 15 standard generators by name ("P0".."C3", "D").
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_standard(
    name: *const c_char,
    out: *mut *mut ConfrayField,
) -> ConfrayStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(name) => name,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(ConfrayStatus::NullArgument, "output pointer is NULL");
        }
        match GeneratorKind::from_name(name) {
            Some(kind) => {
                *out = Box::into_raw(Box::new(ConfrayField(standard_generator(kind))));
                ConfrayStatus::Ok
            }
            None => fail(
                ConfrayStatus::UnknownName,
                format!("unknown generator {name:?}"),
            ),
        }
    })
}

/// Frees a field handle. NULL is a no-op.
///
/// # Safety
/// `field` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn confray_field_free(field: *mut ConfrayField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Renders the canonical expression form of a field.
///
/// # Safety
/// `field` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_render(
    field: *const ConfrayField,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let Some(field) = field.as_ref() else {
            return fail(ConfrayStatus::NullArgument, "field handle is NULL");
        };
        write_string(out, render_vector_field(&field.0))
    })
}

/// Computes the conformal factor λ(x) of a field, rendered as a polynomial
/// expression. Fails with `NotConformal` when the symmetrised derivative is
/// not proportional to the metric.
///
/// # Safety
/// `field` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_conformal_factor(
    field: *const ConfrayField,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let Some(field) = field.as_ref() else {
            return fail(ConfrayStatus::NullArgument, "field handle is NULL");
        };
        match conformal_factor(&field.0) {
            Ok(lambda) => write_string(out, lambda.to_string()),
            Err(err) => fail(ConfrayStatus::NotConformal, err.to_string()),
        }
    })
}

/// Lie commutator of two fields as a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_commutator(
    a: *const ConfrayField,
    b: *const ConfrayField,
    out: *mut *mut ConfrayField,
) -> ConfrayStatus {
    guarded(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return fail(ConfrayStatus::NullArgument, "field handle is NULL");
        };
        if out.is_null() {
            return fail(ConfrayStatus::NullArgument, "output pointer is NULL");
        }
        *out = Box::into_raw(Box::new(ConfrayField(lie_commutator(&a.0, &b.0))));
        ConfrayStatus::Ok
    })
}

/// Decomposes a field over the 15-generator basis. Writes a JSON object
/// mapping generator names to rational coefficients (zeros omitted); fails
/// with `NotInSpan` when a residual remains.
///
/// # Safety
/// `field` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_field_decompose(
    field: *const ConfrayField,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let Some(field) = field.as_ref() else {
            return fail(ConfrayStatus::NullArgument, "field handle is NULL");
        };
        match decompose_in_basis(&field.0) {
            Ok(coefficients) => {
                let mut map = serde_json::Map::new();
                for (k, coeff) in coefficients.iter().enumerate() {
                    if !coeff.is_zero() {
                        map.insert(
                            GeneratorKind::ALL[k].name().to_owned(),
                            serde_json::to_value(coeff).expect("scalars serialise"),
                        );
                    }
                }
                write_string(out, serde_json::Value::Object(map).to_string())
            }
            Err(err) => fail(ConfrayStatus::NotInSpan, err.to_string()),
        }
    })
}

/// Loads an event state from its JSON wire form
/// `{"alpha": "p/q", "rays": [...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_state_from_json(
    json: *const c_char,
    out: *mut *mut ConfrayState,
) -> ConfrayStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(ConfrayStatus::NullArgument, "output pointer is NULL");
        }
        match serde_json::from_str::<EventState>(text) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(ConfrayState(state)));
                ConfrayStatus::Ok
            }
            Err(err) => {
                let message = err.to_string();
                let status = if message.contains("massless") {
                    ConfrayStatus::Massless
                } else {
                    ConfrayStatus::InvalidData
                };
                fail(status, message)
            }
        }
    })
}

/// Frees a state handle. NULL is a no-op.
///
/// # Safety
/// `state` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn confray_state_free(state: *mut ConfrayState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Writes the observable report of a state (totals, mass, extracted
/// position, intersection residual, quantum correction) as JSON.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_state_report_json(
    state: *const ConfrayState,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let Some(state) = state.as_ref() else {
            return fail(ConfrayStatus::NullArgument, "state handle is NULL");
        };
        let report = state.0.report();
        write_string(
            out,
            serde_json::to_string(&report).expect("reports serialise"),
        )
    })
}

/// Builds the shift report of one generator at the given Casimir parameter,
/// optionally evaluated at a phase-space point supplied as two JSON arrays
/// (upper-index position, lower-index momentum). Pass NULL for both to skip
/// evaluation.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL as documented; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_shift_report_json(
    kind: *const c_char,
    alpha: *const c_char,
    position_json: *const c_char,
    momentum_json: *const c_char,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let kind_name = match read_str(kind) {
            Ok(name) => name,
            Err(status) => return status,
        };
        let Some(kind) = GeneratorKind::from_name(kind_name) else {
            return fail(
                ConfrayStatus::UnknownName,
                format!("unknown generator {kind_name:?}"),
            );
        };
        let alpha_text = match read_str(alpha) {
            Ok(text) => text,
            Err(status) => return status,
        };
        let alpha: Scalar = match alpha_text.parse() {
            Ok(alpha) => alpha,
            Err(err) => return fail(ConfrayStatus::BadConfig, err.to_string()),
        };
        let mut report = match ShiftReport::new(kind, &alpha) {
            Ok(report) => report,
            Err(err) => return fail(ConfrayStatus::EvaluationError, err.to_string()),
        };
        if !position_json.is_null() || !momentum_json.is_null() {
            let position = match read_str(position_json) {
                Ok(text) => text,
                Err(status) => return status,
            };
            let momentum = match read_str(momentum_json) {
                Ok(text) => text,
                Err(status) => return status,
            };
            let position: FourVector = match serde_json::from_str(position) {
                Ok(v) => v,
                Err(err) => return fail(ConfrayStatus::InvalidData, err.to_string()),
            };
            let momentum: FourVector = match serde_json::from_str::<FourVector>(momentum)
                .map(|v| v.into_components())
                .map(FourVector::lower)
            {
                Ok(v) => v,
                Err(err) => return fail(ConfrayStatus::InvalidData, err.to_string()),
            };
            if let Err(err) = report.evaluate_at(&position, &momentum) {
                return fail(ConfrayStatus::EvaluationError, err.to_string());
            }
        }
        write_string(
            out,
            serde_json::to_string(&report).expect("reports serialise"),
        )
    })
}

/// Runs a verification suite and writes the JSON report. Returns `Ok` when
/// every case passed and `SuiteFailures` when the suite completed with
/// failing cases (the report is written either way).
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn confray_run_suite(
    suite: *const c_char,
    seed: u64,
    count: u64,
    alpha: *const c_char,
    mode: *const c_char,
    out: *mut *mut c_char,
) -> ConfrayStatus {
    guarded(|| {
        let suite_name = match read_str(suite) {
            Ok(name) => name,
            Err(status) => return status,
        };
        let suite: SuiteName = match suite_name.parse() {
            Ok(suite) => suite,
            Err(err) => return fail(ConfrayStatus::UnknownName, err.to_string()),
        };
        let alpha_text = match read_str(alpha) {
            Ok(text) => text,
            Err(status) => return status,
        };
        let alpha: Scalar = match alpha_text.parse() {
            Ok(alpha) => alpha,
            Err(err) => return fail(ConfrayStatus::BadConfig, err.to_string()),
        };
        let mode_text = match read_str(mode) {
            Ok(text) => text,
            Err(status) => return status,
        };
        let mode: EngineMode = match mode_text.parse() {
            Ok(mode) => mode,
            Err(err) => return fail(ConfrayStatus::BadConfig, err.to_string()),
        };
        let config = SuiteConfig {
            seed,
            count: count as usize,
            alpha,
            mode,
            ..SuiteConfig::default()
        };
        let result = match run_suite(suite, &config) {
            Ok(result) => result,
            Err(err @ SuiteError::UnknownSuite { .. }) => {
                return fail(ConfrayStatus::UnknownName, err.to_string())
            }
            Err(err) => return fail(ConfrayStatus::BadConfig, err.to_string()),
        };
        let passed = result.passed();
        let status = write_string(out, emit_report(&result, ReportFormat::Json));
        if status != ConfrayStatus::Ok {
            return status;
        }
        if passed {
            ConfrayStatus::Ok
        } else {
            fail(
                ConfrayStatus::SuiteFailures,
                format!("{} case(s) failed", result.failures.len()),
            )
        }
    })
}
