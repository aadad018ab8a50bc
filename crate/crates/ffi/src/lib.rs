//! C ABI for permsplit.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`PermsplitStatus`]; the message of the most recent failure on the
//! calling thread is available from [`permsplit_last_error`]. Strings handed
//! out by the library are released with [`permsplit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use permsplit::centralizer::{compute_orbitals, compute_structure_constants, CentralizerConfig};
use permsplit::cli::exit_code;
use permsplit::perm::{parse_generators, GeneratorSet};
use permsplit::report::{decomposition_to_json, decomposition_to_text, AnalyzeReport};
use permsplit::splitter::{split, SplitConfig, SplitOutcome};
use permsplit::verify::verify_family_algebraic;
use permsplit::Error;

/// Result codes; the nonzero library codes match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermsplitStatus {
    Ok = 0,
    Parse = 1,
    Intransitive = 2,
    ResourceLimit = 3,
    Invariant = 4,
    CheckFailed = 5,
    NullPointer = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Parsed generator set.
pub struct PermsplitGroup {
    gens: GeneratorSet,
}

/// Result of a split: the verified projector family plus its basis.
pub struct PermsplitDecomposition {
    outcome: SplitOutcome,
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

fn status_of(e: &Error) -> PermsplitStatus {
    match exit_code(e) {
        1 => PermsplitStatus::Parse,
        2 => PermsplitStatus::Intransitive,
        3 => PermsplitStatus::ResourceLimit,
        _ => PermsplitStatus::Invariant,
    }
}

fn fail(status: PermsplitStatus, msg: impl Into<String>) -> PermsplitStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (PermsplitStatus, String)>) -> PermsplitStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PermsplitStatus::Ok,
        Ok(Err((s, m))) => fail(s, m),
        Err(_) => fail(PermsplitStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> (PermsplitStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PermsplitStatus, String) {
    (PermsplitStatus::NullPointer, format!("{what} is null"))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (PermsplitStatus, String)> {
    let c = CString::new(s).map_err(|_| (PermsplitStatus::Invariant, "report contains a NUL byte".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn permsplit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn permsplit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn permsplit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a generator file (`degree N` / `gen ...` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permsplit_group_parse(text: *const c_char, out: *mut *mut PermsplitGroup) -> PermsplitStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (PermsplitStatus::Parse, "input is not UTF-8".to_string()))?;
        let gens = parse_generators(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PermsplitGroup { gens }));
        Ok(())
    })
}

/// # Safety
/// `group` must come from [`permsplit_group_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn permsplit_group_free(group: *mut PermsplitGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Number of points acted on, or 0 for a null handle.
///
/// # Safety
/// `group` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn permsplit_group_degree(group: *const PermsplitGroup) -> usize {
    group.as_ref().map_or(0, |g| g.gens.degree())
}

/// JSON analysis report: rank, suborbit lengths, transpose pairing and,
/// when `with_tensor` is nonzero, the structure constants.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable. The string is
/// released with [`permsplit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn permsplit_analyze_json(
    group: *const PermsplitGroup,
    with_tensor: i32,
    out: *mut *mut c_char,
) -> PermsplitStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(|| null("group"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let basis = compute_orbitals(&g.gens, &CentralizerConfig::default()).map_err(lib_err)?;
        let constants = if with_tensor != 0 {
            Some(compute_structure_constants(&basis).map_err(lib_err)?)
        } else {
            None
        };
        out_string(AnalyzeReport::new(&basis, constants.as_ref()).to_json(), out)
    })
}

/// Computes and verifies the full decomposition. `seed` drives the slicing.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permsplit_split(
    group: *const PermsplitGroup,
    seed: u64,
    out: *mut *mut PermsplitDecomposition,
) -> PermsplitStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(|| null("group"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let cfg = SplitConfig {
            seed,
            ..SplitConfig::default()
        };
        let outcome = split(&g.gens, &cfg).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PermsplitDecomposition { outcome }));
        Ok(())
    })
}

/// # Safety
/// `dec` must come from [`permsplit_split`] or be null.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_free(dec: *mut PermsplitDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Number of projectors, or 0 for a null handle.
///
/// # Safety
/// `dec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_len(dec: *const PermsplitDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.outcome.decomposition.projectors.len())
}

/// Rank of the centralizer algebra, or 0 for a null handle.
///
/// # Safety
/// `dec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_rank(dec: *const PermsplitDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.outcome.decomposition.rank)
}

/// Dimension of projector `index` (0-based).
///
/// # Safety
/// `dec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_dimension(
    dec: *const PermsplitDecomposition,
    index: usize,
    out: *mut usize,
) -> PermsplitStatus {
    guard(|| {
        let d = dec.as_ref().ok_or_else(|| null("decomposition"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = d.outcome.decomposition.projectors.get(index).ok_or_else(|| {
            (
                PermsplitStatus::InvalidArgument,
                format!("index {index} out of range for {} projectors", d.outcome.decomposition.projectors.len()),
            )
        })?;
        *out = p.dimension;
        Ok(())
    })
}

/// Text report of the decomposition.
///
/// # Safety
/// `dec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_text(
    dec: *const PermsplitDecomposition,
    out: *mut *mut c_char,
) -> PermsplitStatus {
    guard(|| {
        let d = dec.as_ref().ok_or_else(|| null("decomposition"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(decomposition_to_text(&d.outcome.decomposition), out)
    })
}

/// JSON report of the decomposition.
///
/// # Safety
/// `dec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_json(
    dec: *const PermsplitDecomposition,
    out: *mut *mut c_char,
) -> PermsplitStatus {
    guard(|| {
        let d = dec.as_ref().ok_or_else(|| null("decomposition"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(decomposition_to_json(&d.outcome.decomposition), out)
    })
}

/// Re-runs the algebraic checks; `PERMSPLIT_STATUS_CHECK_FAILED` names the
/// first failing check in the last-error message.
///
/// # Safety
/// `dec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn permsplit_decomposition_verify(dec: *const PermsplitDecomposition) -> PermsplitStatus {
    guard(|| {
        let d = dec.as_ref().ok_or_else(|| null("decomposition"))?;
        let rep = verify_family_algebraic(&d.outcome.constants, &d.outcome.decomposition);
        match rep.first_failure() {
            None => Ok(()),
            Some(f) => Err((PermsplitStatus::CheckFailed, f)),
        }
    })
}
