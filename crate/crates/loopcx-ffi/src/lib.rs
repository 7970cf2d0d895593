//! C interface: parse a complex, query its homology, check ∂² on its cobar algebra.

use loopcx::cobarloop::Cobar;
use loopcx::ledger::Conventions;
use loopcx::simpcx::{self, ReducedComplex, SimplicialComplex};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopcxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

/// Opaque handle owning a parsed complex and its tree collapse.
pub struct LoopcxComplex {
    complex: SimplicialComplex,
    reduced: ReducedComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: LoopcxStatus, msg: impl Into<String>) -> LoopcxStatus {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
    status
}

fn guarded(f: impl FnOnce() -> LoopcxStatus) -> LoopcxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LoopcxStatus::Internal, "panic inside loopcx"))
}

/// Message for the most recent failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn loopcx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a complex from its JSON document. On success `*out` owns a handle
/// that must be released with `loopcx_complex_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn loopcx_complex_parse(json: *const c_char, out: *mut *mut LoopcxComplex) -> LoopcxStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(LoopcxStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(LoopcxStatus::InvalidUtf8, "input is not UTF-8");
        };
        let complex = match simpcx::parse_complex(text) {
            Ok(c) => c,
            Err(e) => return fail(LoopcxStatus::Parse, e.to_string()),
        };
        let reduced = match simpcx::reduce(&complex) {
            Ok(r) => r,
            Err(e) => return fail(LoopcxStatus::Parse, e.to_string()),
        };
        *out = Box::into_raw(Box::new(LoopcxComplex { complex, reduced }));
        LoopcxStatus::Ok
    })
}

/// # Safety
/// `c` must come from `loopcx_complex_parse` and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn loopcx_complex_free(c: *mut LoopcxComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn loopcx_complex_dim(c: *const LoopcxComplex, dim: *mut usize) -> LoopcxStatus {
    guarded(|| {
        let (Some(c), false) = (c.as_ref(), dim.is_null()) else {
            return fail(LoopcxStatus::NullPointer, "null argument");
        };
        *dim = c.complex.dim();
        LoopcxStatus::Ok
    })
}

/// H_degree as Z^rank ⊕ ⊕ Z/t_i. At most `capacity` torsion coefficients are
/// written to `torsion`; `*n_torsion` always receives the full count.
///
/// # Safety
/// `c` must be a live handle, `rank` and `n_torsion` writable, and `torsion`
/// valid for `capacity` writes (it may be null when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn loopcx_homology(
    c: *const LoopcxComplex,
    degree: usize,
    rank: *mut usize,
    torsion: *mut i64,
    capacity: usize,
    n_torsion: *mut usize,
) -> LoopcxStatus {
    guarded(|| {
        let Some(c) = c.as_ref() else { return fail(LoopcxStatus::NullPointer, "null handle") };
        if rank.is_null() || n_torsion.is_null() || (torsion.is_null() && capacity > 0) {
            return fail(LoopcxStatus::NullPointer, "null output");
        }
        let hs = simpcx::simplicial_homology(&c.complex);
        let Some(h) = hs.iter().find(|h| h.degree == degree as i64) else {
            return fail(LoopcxStatus::OutOfRange, format!("degree {degree} exceeds dimension {}", c.complex.dim()));
        };
        let t = h.torsion_i64();
        *rank = h.rank;
        *n_torsion = t.len();
        if t.len() > capacity {
            return fail(LoopcxStatus::BufferTooSmall, format!("{} torsion coefficients, room for {capacity}", t.len()));
        }
        for (i, v) in t.iter().enumerate() {
            *torsion.add(i) = *v;
        }
        LoopcxStatus::Ok
    })
}

/// ∂² on every cobar word of weight ≤ `max_weight`, under the resolved conventions.
/// `*failures` counts words with ∂² ≠ 0 or a weight-raising boundary.
///
/// # Safety
/// `c` must be a live handle, `checked` and `failures` writable.
#[no_mangle]
pub unsafe extern "C" fn loopcx_cobar_d_squared(
    c: *const LoopcxComplex,
    max_weight: usize,
    checked: *mut u64,
    failures: *mut u64,
) -> LoopcxStatus {
    guarded(|| {
        let Some(c) = c.as_ref() else { return fail(LoopcxStatus::NullPointer, "null handle") };
        if checked.is_null() || failures.is_null() {
            return fail(LoopcxStatus::NullPointer, "null output");
        }
        if max_weight > 8 {
            return fail(LoopcxStatus::OutOfRange, "max_weight above 8");
        }
        let cob = Cobar::new(&c.reduced, &Conventions::resolved());
        let (n, weight_bad, bad) = cob.d_squared_failures(max_weight);
        *checked = n as u64;
        *failures = (bad.len() + weight_bad) as u64;
        LoopcxStatus::Ok
    })
}
