//! C interface to `coldepth`.
//!
//! Configurations live behind an opaque handle. Every call returns a
//! [`ColdepthStatus`]; on failure a message is available from
//! [`coldepth_last_error`] until the next call on the same thread. Strings
//! handed out by the library are JSON and must be released with
//! [`coldepth_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coldepth::arrangement::CoverageCertificate;
use coldepth::cross::parse_pairs;
use coldepth::witness::{generate_witnesses, theorem_bound, verify_witness_set, WitnessSet};
use coldepth::{colourful_depth, parse_configuration, Configuration, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColdepthStatus {
    Ok = 0,
    /// An invariant or bound check failed.
    Violation = 1,
    /// Malformed JSON, wrong shape or out-of-range argument.
    InvalidInput = 2,
    /// Well-formed input that the operation cannot accept.
    Precondition = 3,
    NullPointer = 4,
    /// A bug: the library panicked. The handle arguments stay valid.
    Panic = 5,
}

/// Opaque configuration handle.
pub struct ColdepthConfig {
    inner: Configuration,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ColdepthStatus {
    match e {
        Error::Violation(_) => ColdepthStatus::Violation,
        Error::Precondition(_) => ColdepthStatus::Precondition,
        _ => ColdepthStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and turning panics into a status.
fn guard<F>(f: F) -> ColdepthStatus
where
    F: FnOnce() -> Result<(), (ColdepthStatus, String)>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ColdepthStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {message}"));
            ColdepthStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ColdepthStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ColdepthStatus, String) {
    (ColdepthStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (ColdepthStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (ColdepthStatus::InvalidInput, format!("{what} is not UTF-8")))
}

/// # Safety
/// `cfg` must be null or a live handle.
unsafe fn config_ref<'a>(cfg: *const ColdepthConfig) -> Result<&'a Configuration, (ColdepthStatus, String)> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

fn write_json(out: *mut *mut c_char, text: String) -> Result<(), (ColdepthStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(text).map_err(|_| (ColdepthStatus::Panic, "NUL in output".to_string()))?;
    // SAFETY: checked non-null above; the caller owns the slot.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn coldepth_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coldepth_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `⌊(d+2)²/4⌋`.
#[no_mangle]
pub extern "C" fn coldepth_theorem_bound(d: usize) -> usize {
    theorem_bound(d)
}

/// Parses a configuration document into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_config_parse(json: *const c_char, out: *mut *mut ColdepthConfig) -> ColdepthStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = read_str(json, "json")?;
        let inner = parse_configuration(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(ColdepthConfig { inner }));
        Ok(())
    })
}

/// A seeded random configuration in general position.
///
/// # Safety
/// `out` must be a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_config_random(d: usize, seed: u64, out: *mut *mut ColdepthConfig) -> ColdepthStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let inner = coldepth::search::random_configuration(d, seed).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(ColdepthConfig { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coldepth_config_free(cfg: *mut ColdepthConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coldepth_config_dim(cfg: *const ColdepthConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.dim())
}

/// The configuration as a JSON document.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_config_to_json(cfg: *const ColdepthConfig, out: *mut *mut c_char) -> ColdepthStatus {
    guard(|| write_json(out, config_ref(cfg)?.to_json()))
}

/// Number of colourful simplices containing the origin.
///
/// # Safety
/// `cfg` must be a live handle; `depth` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_depth(cfg: *const ColdepthConfig, depth: *mut usize) -> ColdepthStatus {
    guard(|| {
        let config = config_ref(cfg)?;
        if depth.is_null() {
            return Err(null("output pointer"));
        }
        *depth = coldepth::depth::colourful_depth_count(config);
        Ok(())
    })
}

/// Depth report with one witness per containing simplex, as JSON.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_depth_json(cfg: *const ColdepthConfig, out: *mut *mut c_char) -> ColdepthStatus {
    guard(|| {
        let report = colourful_depth(config_ref(cfg)?);
        write_json(out, serde_json::to_string(&report).expect("serializable"))
    })
}

/// Staged witness simplices with their stage log, as JSON.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_witnesses_json(
    cfg: *const ColdepthConfig,
    seed: u64,
    out: *mut *mut c_char,
) -> ColdepthStatus {
    guard(|| {
        let ws = generate_witnesses(config_ref(cfg)?, seed).map_err(lib_err)?;
        write_json(out, serde_json::to_string(&ws).expect("serializable"))
    })
}

/// Re-checks a witness set document against the configuration.
///
/// # Safety
/// `cfg` must be a live handle, `json` a NUL-terminated string and `ok` a
/// writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_verify_witnesses(
    cfg: *const ColdepthConfig,
    json: *const c_char,
    ok: *mut bool,
) -> ColdepthStatus {
    guard(|| {
        let config = config_ref(cfg)?;
        let text = read_str(json, "json")?;
        if ok.is_null() {
            return Err(null("output pointer"));
        }
        let ws: WitnessSet = serde_json::from_str(text)
            .map_err(|e| (ColdepthStatus::InvalidInput, format!("witness set: {e}")))?;
        *ok = verify_witness_set(config, &ws);
        Ok(())
    })
}

/// Coverage certificate for a pairs document, as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn coldepth_cross_check_json(json: *const c_char, out: *mut *mut c_char) -> ColdepthStatus {
    guard(|| {
        let family = parse_pairs(read_str(json, "json")?).map_err(lib_err)?;
        let cert: CoverageCertificate =
            coldepth::cross::is_deformed_cross_position(&family.pairs).map_err(lib_err)?;
        write_json(out, serde_json::to_string(&cert).expect("serializable"))
    })
}
