//! C ABI for the peaktally engine.
//!
//! Handles are opaque and owned by the caller: every `*_new` pairs with a
//! `*_free`. Strings returned through `char **` out-parameters are heap
//! allocated and must be released with `pt_string_free`. Every function
//! returns a [`PtStatus`]; on failure `pt_last_error` describes the cause.
//!
//! Peak sets cross the boundary as text in the canonical form (`"2,5"`, with
//! `""` for the empty set). Variants are passed as `uint32_t` values of
//! `PtVariant`. Counts cross as decimal strings, or as `u64`
//! through the `_u64` variants when they fit.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use peaktally::analysis::{verify_with, VerifyOptions};
use peaktally::formulas::{closed_form, Engine, FormulaError};
use peaktally::oracle::{enumerate_tally, OracleConfig, OracleError, TallyTable};
use peaktally::peakcore::{PeakSet, Variant};
use peaktally::store;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSet = 3,
    ResourceLimit = 4,
    Discrepancy = 5,
    NoClosedForm = 6,
    Overflow = 7,
    Io = 8,
    VerificationFailed = 9,
    Panic = 10,
}

/// Counting regime.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtVariant {
    Sym = 0,
    SymHat = 1,
    Hyp = 2,
    HypHat = 3,
}

/// Variants travel as plain integers so an out-of-range value from C is an
/// error rather than undefined behaviour.
fn read_variant(code: u32) -> Result<Variant, Fail> {
    Ok(match code {
        c if c == PtVariant::Sym as u32 => Variant::P,
        c if c == PtVariant::SymHat as u32 => Variant::P_HAT,
        c if c == PtVariant::Hyp as u32 => Variant::PB,
        c if c == PtVariant::HypHat as u32 => Variant::PB_HAT,
        _ => {
            return Err(Fail(
                PtStatus::InvalidArgument,
                format!("unknown variant code {code}"),
            ))
        }
    })
}

/// Memoising counting engine. Safe to share between threads.
pub struct PtEngine {
    inner: Engine,
}

/// Exhaustive oracle tally for one variant and length.
pub struct PtTally {
    inner: TallyTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(PtStatus, String);

impl From<FormulaError> for Fail {
    fn from(e: FormulaError) -> Self {
        let status = match e {
            FormulaError::Discrepancy(_)
            | FormulaError::InexactDivision { .. }
            | FormulaError::NegativeCount { .. } => PtStatus::Discrepancy,
            FormulaError::Peak(_) => PtStatus::InvalidSet,
            _ => PtStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

impl From<OracleError> for Fail {
    fn from(e: OracleError) -> Self {
        let status = match e {
            OracleError::ResourceLimit { .. } => PtStatus::ResourceLimit,
            _ => PtStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

impl From<store::StoreError> for Fail {
    fn from(e: store::StoreError) -> Self {
        let status = match e {
            store::StoreError::Io { .. } => PtStatus::Io,
            _ => PtStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> PtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            PtStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(PtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_set(p: *const c_char) -> Result<PeakSet, Fail> {
    read_str(p, "set")?
        .parse()
        .map_err(|e| Fail(PtStatus::InvalidSet, format!("{e}")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn engine_ref<'a>(engine: *const PtEngine) -> Result<&'a Engine, Fail> {
    engine
        .as_ref()
        .map(|e| &e.inner)
        .ok_or_else(|| null("engine"))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn pt_engine_new() -> *mut PtEngine {
    Box::into_raw(Box::new(PtEngine {
        inner: Engine::new(),
    }))
}

/// Releases an engine. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pt_engine_free(engine: *mut PtEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Count of words of length `n` with peak set `set`, as a decimal string.
#[no_mangle]
pub unsafe extern "C" fn pt_count(
    engine: *const PtEngine,
    variant: u32,
    set: *const c_char,
    n: u32,
    out: *mut *mut c_char,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let set = read_set(set)?;
        let value = engine.count(read_variant(variant)?, set, n)?;
        write_string(out, value.to_string())
    })
}

/// As `pt_count`, failing with `PT_STATUS_OVERFLOW` above `UINT64_MAX`.
#[no_mangle]
pub unsafe extern "C" fn pt_count_u64(
    engine: *const PtEngine,
    variant: u32,
    set: *const c_char,
    n: u32,
    out: *mut u64,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let set = read_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let value = engine.count(read_variant(variant)?, set, n)?;
        *out = value.to_u64().ok_or_else(|| {
            Fail(
                PtStatus::Overflow,
                format!("{value} does not fit in 64 bits"),
            )
        })?;
        Ok(())
    })
}

/// Closed-form value, with every registered route cross-checked.
#[no_mangle]
pub unsafe extern "C" fn pt_closed_form(
    engine: *const PtEngine,
    variant: u32,
    set: *const c_char,
    n: u32,
    out: *mut *mut c_char,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let set = read_set(set)?;
        let variant = read_variant(variant)?;
        match closed_form(engine, variant, set, n)? {
            Some(v) => write_string(out, v.to_string()),
            None => Err(Fail(
                PtStatus::NoClosedForm,
                format!("no closed form for {variant} with S={{{set}}}"),
            )),
        }
    })
}

/// Binomial-basis polynomial of `set` as text, e.g. `"-2 + 1*C(n,1)"`.
#[no_mangle]
pub unsafe extern "C" fn pt_poly(
    engine: *const PtEngine,
    set: *const c_char,
    out: *mut *mut c_char,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let set = read_set(set)?;
        write_string(out, engine.poly(set).to_string())
    })
}

/// Seeds the engine from a cache file. A missing file loads nothing.
#[no_mangle]
pub unsafe extern "C" fn pt_engine_load_cache(
    engine: *const PtEngine,
    path: *const c_char,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let path = read_str(path, "path")?;
        store::load_into(Path::new(path), engine)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pt_engine_save_cache(
    engine: *const PtEngine,
    path: *const c_char,
) -> PtStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let path = read_str(path, "path")?;
        store::save_cache(Path::new(path), engine)?;
        Ok(())
    })
}

/// Enumerates every word of the group. `threads == 0` uses the available
/// parallelism. Lengths above the default oracle caps fail with
/// `PT_STATUS_RESOURCE_LIMIT`.
#[no_mangle]
pub unsafe extern "C" fn pt_tally_new(
    variant: u32,
    n: u32,
    threads: u32,
    out: *mut *mut PtTally,
) -> PtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = OracleConfig {
            threads: (threads > 0).then_some(threads as usize),
            ..OracleConfig::default()
        };
        let inner = enumerate_tally(read_variant(variant)?, n, &config)?;
        *out = Box::into_raw(Box::new(PtTally { inner }));
        Ok(())
    })
}

/// Releases a tally. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pt_tally_free(tally: *mut PtTally) {
    if !tally.is_null() {
        drop(Box::from_raw(tally));
    }
}

/// Number of words in the tally with peak set `set`.
#[no_mangle]
pub unsafe extern "C" fn pt_tally_get(
    tally: *const PtTally,
    set: *const c_char,
    out: *mut u64,
) -> PtStatus {
    guard(|| {
        let tally = tally.as_ref().ok_or_else(|| null("tally"))?;
        let set = read_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = tally.inner.get_u64(set);
        Ok(())
    })
}

/// Number of peak sets with a nonzero count.
#[no_mangle]
pub unsafe extern "C" fn pt_tally_support(tally: *const PtTally, out: *mut usize) -> PtStatus {
    guard(|| {
        let tally = tally.as_ref().ok_or_else(|| null("tally"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = tally.inner.nonzero().count();
        Ok(())
    })
}

/// Runs the verification battery. Returns `PT_STATUS_VERIFICATION_FAILED`
/// if any check fails; `report_json` (may be NULL) receives the full report.
#[no_mangle]
pub unsafe extern "C" fn pt_verify(
    n_max_sym: u32,
    n_max_hyp: u32,
    report_json: *mut *mut c_char,
) -> PtStatus {
    guard(|| {
        let options = VerifyOptions {
            n_max_sym,
            n_max_hyp,
            ..VerifyOptions::default()
        };
        let report = verify_with(&Engine::new(), &options)
            .map_err(|e| Fail(PtStatus::InvalidArgument, e.to_string()))?;
        if !report_json.is_null() {
            write_string(report_json, report.to_json().to_string())?;
        }
        if report.passed() {
            Ok(())
        } else {
            Err(Fail(
                PtStatus::VerificationFailed,
                format!("{} checks failed", report.failures().count()),
            ))
        }
    })
}
