//! C ABI over `fuzzyquad`.
//!
//! Every fallible call returns an [`FqStatus`] and writes its result through an
//! out pointer. On failure the message is kept per thread and can be read with
//! [`fq_last_error`]. Handles are opaque and must be released with the
//! matching `*_free` function; passing null to a `*_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::OnceLock;

use fuzzyquad::error::Error;
use fuzzyquad::fuzzy::FuzzyNorm;
use fuzzyquad::scenario::{self, report_csv, RunResult, Scenario};
use fuzzyquad::space::{ClassicalNorm, NormKind, Vector};
use fuzzyquad::verify::{self, StabilityConstant};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    Overflow = 5,
    NotConverged = 6,
    Degenerate = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqNormKind {
    L1 = 0,
    L2 = 1,
    Linf = 2,
}

/// A fuzzy norm on ℝᵈ.
pub struct FqFuzzyNorm(FuzzyNorm);

/// A validated scenario, ready to run.
pub struct FqScenario(Scenario);

/// The outcome of running a scenario.
pub struct FqRunResult(RunResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> FqStatus {
    match e {
        Error::DimensionMismatch { .. } => FqStatus::DimensionMismatch,
        Error::NonFinite(_) => FqStatus::NonFinite,
        Error::InvalidParameter(_) | Error::EmptySequence => FqStatus::InvalidArgument,
        Error::Overflow { .. } => FqStatus::Overflow,
        Error::NotConverged { .. } => FqStatus::NotConverged,
        Error::Degenerate(_) => FqStatus::Degenerate,
        Error::Config(_) => FqStatus::Config,
        Error::Io { .. } => FqStatus::Io,
    }
}

fn fail(e: Error) -> FqStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> FqStatus {
    set_error(format!("{what} is null"));
    FqStatus::NullPointer
}

/// Runs `f`, turning panics into [`FqStatus::Panic`].
fn guard(f: impl FnOnce() -> FqStatus) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            FqStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, FqStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        FqStatus::InvalidArgument
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FqStatus {
    if out.is_null() {
        return null("out");
    }
    out.write(value);
    FqStatus::Ok
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> FqStatus {
    write_out(out, Box::into_raw(Box::new(value)))
}

/// The last error message on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn fq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fq_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Fuzzy norms

fn base(dim: usize, kind: FqNormKind) -> Result<ClassicalNorm, Error> {
    let kind = match kind {
        FqNormKind::L1 => NormKind::L1,
        FqNormKind::L2 => NormKind::L2,
        FqNormKind::Linf => NormKind::LInf,
    };
    ClassicalNorm::new(dim, kind)
}

/// `t / (t + k‖x‖)` for `t > 0`, else 0.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn fq_fuzzy_norm_new_nk(
    k: f64,
    dim: usize,
    kind: FqNormKind,
    out: *mut *mut FqFuzzyNorm,
) -> FqStatus {
    guard(|| match base(dim, kind).and_then(|b| FuzzyNorm::nk(k, b)) {
        Ok(n) => write_handle(out, FqFuzzyNorm(n)),
        Err(e) => fail(e),
    })
}

/// 1 when `t > ‖x‖`, else 0.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn fq_fuzzy_norm_new_crisp(dim: usize, kind: FqNormKind, out: *mut *mut FqFuzzyNorm) -> FqStatus {
    guard(|| match base(dim, kind) {
        Ok(b) => write_handle(out, FqFuzzyNorm(FuzzyNorm::crisp(b))),
        Err(e) => fail(e),
    })
}

/// Membership of the `len`-vector `x` at level `t`.
///
/// # Safety
/// `norm` must be a live handle, `x` must point to `len` doubles and `out`
/// must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_fuzzy_norm_eval(
    norm: *const FqFuzzyNorm,
    x: *const f64,
    len: usize,
    t: f64,
    out: *mut f64,
) -> FqStatus {
    guard(|| {
        let Some(norm) = norm.as_ref() else {
            return null("norm");
        };
        if x.is_null() && len > 0 {
            return null("x");
        }
        let coords = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(x, len).to_vec() };
        match Vector::new(coords).and_then(|v| norm.0.eval(&v, t)) {
            Ok(m) => write_out(out, m.value()),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `norm` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fq_fuzzy_norm_free(norm: *mut FqFuzzyNorm) {
    if !norm.is_null() {
        drop(Box::from_raw(norm));
    }
}

// ---------------------------------------------------------------------------
// Stability constants

unsafe fn constant(r: Result<StabilityConstant, Error>, out: *mut f64) -> FqStatus {
    match r {
        Ok(c) => write_out(out, c.value),
        Err(e) => fail(e),
    }
}

unsafe fn constant_pair(
    r: Result<(StabilityConstant, StabilityConstant), Error>,
    c1: *mut f64,
    c2: *mut f64,
) -> FqStatus {
    if c1.is_null() || c2.is_null() {
        return null("out");
    }
    match r {
        Ok((a, b)) => {
            c1.write(a.value);
            c2.write(b.value);
            FqStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// `((2^{2-1/q} - 1) / 4)^q` for `q > 1/2`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_quadratic_bound_constant(q: f64, out: *mut f64) -> FqStatus {
    guard(|| constant(verify::quadratic_bound_constant(q), out))
}

/// `((2^{2-1/q} - 1) / 2)^q` for `q > 1/2`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_sharp_quadratic_bound_constant(q: f64, out: *mut f64) -> FqStatus {
    guard(|| constant(verify::sharp_quadratic_bound_constant(q), out))
}

/// Odd Pexider constants for `0 < |alpha| < 2`.
///
/// # Safety
/// `c1` and `c2` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_odd_pexider_constants(alpha: f64, c1: *mut f64, c2: *mut f64) -> FqStatus {
    guard(|| constant_pair(verify::odd_pexider_constants(alpha), c1, c2))
}

/// Even Pexider constants for `0 < |alpha| < 4`.
///
/// # Safety
/// `c1` and `c2` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_even_pexider_constants(alpha: f64, c1: *mut f64, c2: *mut f64) -> FqStatus {
    guard(|| constant_pair(verify::even_pexider_constants(alpha), c1, c2))
}

/// Decomposition constant for `0 < |alpha| < 2`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_decomposition_constant(alpha: f64, out: *mut f64) -> FqStatus {
    guard(|| constant(verify::decomposition_constant(alpha), out))
}

/// `4 / (2^{2-p} - 1)` for `0 <= p < 2`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_classical_constant(p: f64, out: *mut f64) -> FqStatus {
    guard(|| constant(verify::classical_constant(p), out))
}

// ---------------------------------------------------------------------------
// Scenarios

fn builtin_names() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        scenario::list_builtins()
            .into_iter()
            .map(|(name, _)| CString::new(name).expect("builtin names have no NUL"))
            .collect()
    })
}

#[no_mangle]
pub extern "C" fn fq_builtin_count() -> usize {
    builtin_names().len()
}

/// Name of builtin `index`, or null when out of range. The string is static.
#[no_mangle]
pub extern "C" fn fq_builtin_name(index: usize) -> *const c_char {
    builtin_names().get(index).map_or(ptr::null(), |s| s.as_ptr())
}

unsafe fn load(r: Result<Scenario, Error>, out: *mut *mut FqScenario) -> FqStatus {
    match r {
        Ok(s) => write_handle(out, FqScenario(s)),
        Err(e) => fail(e),
    }
}

/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_load_builtin(name: *const c_char, out: *mut *mut FqScenario) -> FqStatus {
    guard(|| match text(name, "name") {
        Ok(name) => load(scenario::load_builtin(name), out),
        Err(status) => status,
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_load_file(path: *const c_char, out: *mut *mut FqScenario) -> FqStatus {
    guard(|| match text(path, "path") {
        Ok(path) => load(Scenario::from_path(Path::new(path)), out),
        Err(status) => status,
    })
}

/// Parses a scenario from TOML source.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_from_toml(toml: *const c_char, out: *mut *mut FqScenario) -> FqStatus {
    guard(|| match text(toml, "toml") {
        Ok(src) => load(Scenario::from_toml_str(src), out),
        Err(status) => status,
    })
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_set_seed(s: *mut FqScenario, seed: u64) -> FqStatus {
    guard(|| {
        let Some(s) = s.as_mut() else {
            return null("scenario");
        };
        s.0.config.seed = seed;
        FqStatus::Ok
    })
}

/// Runs the scenario on `jobs` threads; 0 uses the global pool.
///
/// # Safety
/// `s` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_run(s: *const FqScenario, jobs: usize, out: *mut *mut FqRunResult) -> FqStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return null("scenario");
        };
        let jobs = (jobs > 0).then_some(jobs);
        match scenario::run_with_jobs(&s.0, jobs) {
            Ok(r) => write_handle(out, FqRunResult(r)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fq_scenario_free(s: *mut FqScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Results

/// 0 success, 1 inequality failure, 2 convergence failure; -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fq_run_result_exit_code(r: *const FqRunResult) -> i32 {
    r.as_ref().map_or(-1, |r| i32::from(r.0.status().code()))
}

/// Smallest margin over all rows; NaN when there are no rows.
///
/// # Safety
/// `r` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_run_result_min_margin(r: *const FqRunResult, out: *mut f64) -> FqStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_out(out, r.0.min_margin().unwrap_or(f64::NAN)),
        None => null("result"),
    })
}

/// The report CSV as a new string; free it with [`fq_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fq_run_result_csv(r: *const FqRunResult, out: *mut *mut c_char) -> FqStatus {
    guard(|| match r.as_ref() {
        Some(r) => {
            let csv = CString::new(report_csv(&r.0)).expect("CSV has no NUL");
            write_out(out, csv.into_raw())
        }
        None => null("result"),
    })
}

/// Writes `report.csv`, `report.json` and trace files into `dir`.
///
/// # Safety
/// `r` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fq_run_result_write(r: *const FqRunResult, dir: *const c_char) -> FqStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return null("result");
        };
        let dir = match text(dir, "dir") {
            Ok(d) => d,
            Err(status) => return status,
        };
        match scenario::emit_report(&r.0, Path::new(dir)) {
            Ok(_) => FqStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fq_run_result_free(r: *mut FqRunResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
