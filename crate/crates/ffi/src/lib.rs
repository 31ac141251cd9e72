//! C ABI over `msw-core`.
//!
//! Spaces are opaque [`MswSpace`] handles released with [`msw_space_free`].
//! Every fallible call returns an [`MswStatus`]; on failure the message is
//! available from [`msw_last_error`] until the next call on the same thread.
//! Strings handed out by the library are released with [`msw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use msw_core::constructions::NamedSpace;
use msw_core::primitivity::classify;
use msw_core::spacefile::{parse_space, render_space, to_json};
use msw_core::spectral::is_trivial_spectrum;
use msw_core::theorems::{run_generalized_pipeline, verify_atkinson_on_instance, verify_gerstenhaber_bound};
use msw_core::{FieldSpec, Matrix, MatrixSpace, MswError};

/// Opaque handle to a matrix space.
pub struct MswSpace {
    inner: MatrixSpace,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MswStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    ShapeMismatch = 4,
    EntryOutOfRange = 5,
    Singular = 6,
    /// An enumeration or scan would exceed its cap.
    TooLarge = 7,
    PreconditionViolated = 8,
    /// A JSON document failed to parse or validate.
    Malformed = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MswClassification {
    pub urk: usize,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub condition_iii: bool,
    pub condition_iv: bool,
    pub reduced: bool,
    pub semi_primitive: bool,
    pub primitive: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MswTheorem {
    Gerstenhaber = 0,
    Generalized = 1,
    Atkinson = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &MswError) -> MswStatus {
    match e {
        MswError::NotPrime(_) => MswStatus::NotPrime,
        MswError::FieldMismatch { .. } | MswError::ShapeMismatch { .. } | MswError::NotSquare(..) | MswError::BadSplit { .. } => {
            MswStatus::ShapeMismatch
        }
        MswError::EntryOutOfRange { .. } => MswStatus::EntryOutOfRange,
        MswError::Singular => MswStatus::Singular,
        MswError::EnumerationTooLarge { .. } | MswError::ScanTooLarge { .. } => MswStatus::TooLarge,
        MswError::PreconditionViolated(_) => MswStatus::PreconditionViolated,
        _ => MswStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (MswStatus, String)>) -> MswStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MswStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MswStatus::Internal
        }
    }
}

fn core<T>(r: msw_core::Result<T>) -> Result<T, (MswStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (MswStatus, String) {
    (MswStatus::NullPointer, "null pointer argument".into())
}

unsafe fn space_ref<'a>(s: *const MswSpace) -> Result<&'a MatrixSpace, (MswStatus, String)> {
    s.as_ref().map(|s| &s.inner).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), (MswStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn boxed(space: MatrixSpace) -> *mut MswSpace {
    Box::into_raw(Box::new(MswSpace { inner: space }))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("json has no nul").into_raw()
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, (MswStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (MswStatus::InvalidArgument, "string is not UTF-8".into()))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn msw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Span of `count` matrices of shape `rows x cols`, given row-major and back to back in `data`.
///
/// # Safety
/// `data` must point to `count * rows * cols` readable values (it may be null when that is 0);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_new(
    p: u32,
    rows: usize,
    cols: usize,
    count: usize,
    data: *const u32,
    out: *mut *mut MswSpace,
) -> MswStatus {
    guard(|| {
        let f = core(FieldSpec::new(p as u64))?;
        if rows == 0 || cols == 0 {
            return Err((MswStatus::InvalidArgument, "rows and cols must be positive".into()));
        }
        let len = rows
            .checked_mul(cols)
            .and_then(|rc| rc.checked_mul(count))
            .ok_or((MswStatus::InvalidArgument, "size overflow".to_string()))?;
        let entries: &[u32] = if len == 0 {
            &[]
        } else if data.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let mats = entries
            .chunks(rows * cols)
            .map(|c| Matrix::from_vec(f, rows, cols, c.to_vec()))
            .collect::<msw_core::Result<Vec<_>>>();
        let space = core(MatrixSpace::span(f, rows, cols, &core(mats)?))?;
        put(out, boxed(space))
    })
}

/// Build a named space: altn, strict-ut, wedge, p-alt, conj-strict-ut, transformed-wedge.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_construct(
    name: *const c_char,
    n: usize,
    p: u32,
    seed: u64,
    out: *mut *mut MswSpace,
) -> MswStatus {
    guard(|| {
        let kind: NamedSpace = core(str_arg(name)?.parse())?;
        let f = core(FieldSpec::new(p as u64))?;
        put(out, boxed(core(kind.build(f, n, seed))?))
    })
}

/// # Safety
/// `space` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn msw_space_free(space: *mut MswSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_dim(space: *const MswSpace, out: *mut usize) -> MswStatus {
    guard(|| put(out, space_ref(space)?.dim()))
}

/// # Safety
/// `space` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_shape(space: *const MswSpace, rows: *mut usize, cols: *mut usize) -> MswStatus {
    guard(|| {
        let s = space_ref(space)?;
        put(rows, s.rows())?;
        put(cols, s.cols())
    })
}

/// Largest rank of an element, enumerating at most `cap` elements.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_upper_rank(space: *const MswSpace, cap: u64, out: *mut usize) -> MswStatus {
    guard(|| put(out, core(space_ref(space)?.upper_rank(cap))?.0))
}

/// No element has a nonzero eigenvalue in the field.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_is_trivial_spectrum(space: *const MswSpace, cap: u64, out: *mut bool) -> MswStatus {
    guard(|| put(out, core(is_trivial_spectrum(space_ref(space)?, cap))?.holds))
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_classify(space: *const MswSpace, cap: u64, out: *mut MswClassification) -> MswStatus {
    guard(|| {
        let r = core(classify(space_ref(space)?, cap))?;
        put(
            out,
            MswClassification {
                urk: r.urk,
                condition_i: r.condition_i.holds,
                condition_ii: r.condition_ii.holds,
                condition_iii: r.condition_iii.holds,
                condition_iv: r.condition_iv.holds,
                reduced: r.reduced,
                semi_primitive: r.semi_primitive,
                primitive: r.primitive,
            },
        )
    })
}

/// Parse an msw-1 space document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_from_json(json: *const c_char, out: *mut *mut MswSpace) -> MswStatus {
    guard(|| {
        let space = parse_space(str_arg(json)?).map_err(|e| (MswStatus::Malformed, e.to_string()))?;
        put(out, boxed(space))
    })
}

/// The msw-1 document of a space, compact. Release with [`msw_string_free`].
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_space_to_json(space: *const MswSpace, out: *mut *mut c_char) -> MswStatus {
    guard(|| put(out, c_string(render_space(space_ref(space)?, 0))))
}

/// JSON report of a theorem verifier on `space`. `budget` and `seed` only
/// affect the equivalence search of the Atkinson verifier.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn msw_theorem_report_json(
    space: *const MswSpace,
    which: MswTheorem,
    cap: u64,
    budget: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> MswStatus {
    guard(|| {
        let s = space_ref(space)?;
        let json = match which {
            MswTheorem::Gerstenhaber => to_json(&core(verify_gerstenhaber_bound(s, cap))?, 0),
            MswTheorem::Generalized => to_json(&core(run_generalized_pipeline(s, cap))?, 0),
            MswTheorem::Atkinson => to_json(&core(verify_atkinson_on_instance(s, cap, budget, seed))?, 0),
        };
        put(out, c_string(json))
    })
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn msw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
