//! C ABI over the stratscope pipeline.
//!
//! Handles are opaque pointers created by `*_load`/`*_analyze` and released
//! with the matching `*_free`. Every fallible call returns a
//! [`StratscopeStatus`]; on failure [`stratscope_last_error`] describes the
//! most recent error on the calling thread. Strings returned through out
//! parameters are owned by the caller and released with
//! [`stratscope_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use stratscope::ingest::{load_bundle, LoadError};
use stratscope::report::{to_json, write_report, ReportData};
use stratscope::{analyze, normalize_code, Analysis, DatasetBundle};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratscopeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    MissingFile = 3,
    Io = 4,
    InvalidData = 5,
    InvalidConfig = 6,
    AnalysisFailed = 7,
    MalformedCode = 8,
    Panic = 9,
}

/// A loaded, validated dataset.
pub struct StratscopeBundle {
    bundle: DatasetBundle,
}

/// Results of every stage over one bundle.
pub struct StratscopeAnalysis {
    bundle: DatasetBundle,
    analysis: Analysis,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn guard(f: impl FnOnce() -> Result<(), (StratscopeStatus, String)>) -> StratscopeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            StratscopeStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            StratscopeStatus::Panic
        }
    }
}

type Failure = (StratscopeStatus, String);

fn null(name: &str) -> Failure {
    (StratscopeStatus::NullArgument, format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (StratscopeStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn load_failure(e: LoadError) -> Failure {
    let status = match &e {
        LoadError::MissingFile(_) => StratscopeStatus::MissingFile,
        LoadError::Io { .. } => StratscopeStatus::Io,
        LoadError::Config { .. } => StratscopeStatus::InvalidConfig,
        LoadError::Invalid(_) => StratscopeStatus::InvalidData,
    };
    let msg = match e {
        LoadError::Invalid(diags) => diags
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    };
    (status, msg)
}

/// Loads and validates the dataset in `data_dir`.
///
/// # Safety
/// `data_dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stratscope_bundle_load(
    data_dir: *const c_char,
    out: *mut *mut StratscopeBundle,
) -> StratscopeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let dir = str_arg(data_dir, "data_dir")?;
        let bundle = load_bundle(Path::new(dir)).map_err(load_failure)?;
        *out = Box::into_raw(Box::new(StratscopeBundle { bundle }));
        Ok(())
    })
}

/// # Safety
/// `bundle` must come from [`stratscope_bundle_load`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn stratscope_bundle_free(bundle: *mut StratscopeBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

/// Number of problems found in `data_dir`: 0 for a valid dataset. Missing
/// files and unreadable configuration are errors, not problems.
///
/// # Safety
/// `data_dir` must be a NUL-terminated string and `problems` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stratscope_validate(
    data_dir: *const c_char,
    problems: *mut usize,
) -> StratscopeStatus {
    guard(|| {
        if problems.is_null() {
            return Err(null("problems"));
        }
        let dir = str_arg(data_dir, "data_dir")?;
        *problems = match load_bundle(Path::new(dir)) {
            Ok(_) => 0,
            Err(LoadError::Invalid(diags)) => diags.len(),
            Err(e) => return Err(load_failure(e)),
        };
        Ok(())
    })
}

/// Runs every stage with the bundle's own configuration.
///
/// # Safety
/// `bundle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stratscope_analyze(
    bundle: *const StratscopeBundle,
    out: *mut *mut StratscopeAnalysis,
) -> StratscopeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let b = bundle.as_ref().ok_or_else(|| null("bundle"))?;
        let analysis = analyze(&b.bundle, &b.bundle.config)
            .map_err(|e| (StratscopeStatus::AnalysisFailed, e.to_string()))?;
        *out = Box::into_raw(Box::new(StratscopeAnalysis {
            bundle: b.bundle.clone(),
            analysis,
        }));
        Ok(())
    })
}

/// # Safety
/// `analysis` must come from [`stratscope_analyze`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn stratscope_analysis_free(analysis: *mut StratscopeAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// The full results as JSON (the `report.json` document).
///
/// # Safety
/// `analysis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stratscope_analysis_json(
    analysis: *const StratscopeAnalysis,
    out: *mut *mut c_char,
) -> StratscopeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        *out = owned_string(to_json(&ReportData::new(&a.bundle, &a.analysis)));
        Ok(())
    })
}

/// Overflow-column entries against all other entries.
///
/// # Safety
/// `analysis` must be a live handle; `outside` and `inside` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn stratscope_vertical_overflow(
    analysis: *const StratscopeAnalysis,
    outside: *mut usize,
    inside: *mut usize,
) -> StratscopeStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        if outside.is_null() || inside.is_null() {
            return Err(null("outside/inside"));
        }
        let pair = a.analysis.patterns.vertical_overflow;
        *outside = pair.outside;
        *inside = pair.inside;
        Ok(())
    })
}

/// Overflow-row entries (corner excluded) against interior entries.
///
/// # Safety
/// `analysis` must be a live handle; `outside` and `inside` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn stratscope_transversal_overflow(
    analysis: *const StratscopeAnalysis,
    outside: *mut usize,
    inside: *mut usize,
) -> StratscopeStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        if outside.is_null() || inside.is_null() {
            return Err(null("outside/inside"));
        }
        let pair = a.analysis.patterns.transversal_overflow;
        *outside = pair.outside;
        *inside = pair.inside;
        Ok(())
    })
}

/// Blind-spot codes as a comma-separated string, and their share of the
/// consolidated set.
///
/// # Safety
/// `analysis` must be a live handle; `codes` and `share` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn stratscope_blind_spot(
    analysis: *const StratscopeAnalysis,
    codes: *mut *mut c_char,
    share: *mut f64,
) -> StratscopeStatus {
    guard(|| {
        if codes.is_null() || share.is_null() {
            return Err(null("codes/share"));
        }
        *codes = ptr::null_mut();
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        let p = &a.analysis.patterns;
        let joined = p
            .blind_spot
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        *codes = owned_string(joined);
        *share = p.blind_spot_share;
        Ok(())
    })
}

/// Writes the report files and manifest into `out_dir`.
///
/// # Safety
/// `analysis` must be a live handle and `out_dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn stratscope_report_write(
    analysis: *const StratscopeAnalysis,
    out_dir: *const c_char,
) -> StratscopeStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        let dir = str_arg(out_dir, "out_dir")?;
        write_report(&a.bundle, &a.analysis, Path::new(dir))
            .map(|_| ())
            .map_err(|e| (StratscopeStatus::Io, e.to_string()))
    })
}

/// Canonical form of an indicator code, written with its NUL terminator
/// into `out`, which must hold at least 4 bytes.
///
/// # Safety
/// `raw` must be a NUL-terminated string and `out` point to 4 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn stratscope_normalize_code(
    raw: *const c_char,
    out: *mut c_char,
) -> StratscopeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let raw = str_arg(raw, "raw")?;
        let code = normalize_code(raw)
            .map_err(|e| (StratscopeStatus::MalformedCode, e.to_string()))?
            .to_string();
        for (i, b) in code.bytes().chain(std::iter::once(0)).enumerate() {
            *out.add(i) = b as c_char;
        }
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn stratscope_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn stratscope_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
