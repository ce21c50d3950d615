//! C ABI for the tailkit library: opaque handles, integer status codes, and a
//! thread-local last-error message.
//!
//! Every function returns a `TailkitStatus`; results are written through out
//! pointers. Handles are created by the `_parse` constructors and must be
//! released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io::Cursor;
use std::ptr;
use std::slice;

use num_traits::ToPrimitive;

use tailkit::bounds;
use tailkit::error::Error;
use tailkit::hypergraph::Hypergraph;
use tailkit::rooted::{alpha_star, Graph, RootedGraph};
use tailkit::sim;

/// Status code of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailkitStatus {
    TailkitOk = 0,
    TailkitErrArgument = 1,
    TailkitErrCapacity = 2,
    TailkitErrInfeasible = 3,
    TailkitErrCertificate = 4,
    TailkitErrValidation = 5,
    TailkitErrInconsistency = 6,
    TailkitErrUnsupported = 7,
    TailkitErrParse = 8,
    TailkitErrIo = 9,
    TailkitErrNullPointer = 10,
    TailkitErrUtf8 = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("sanitized message");
    });
}

fn status_of(err: &Error) -> TailkitStatus {
    match err {
        Error::Argument(_) => TailkitStatus::TailkitErrArgument,
        Error::Capacity(_) => TailkitStatus::TailkitErrCapacity,
        Error::Infeasible(_) => TailkitStatus::TailkitErrInfeasible,
        Error::Certificate { .. } => TailkitStatus::TailkitErrCertificate,
        Error::Validation(_) => TailkitStatus::TailkitErrValidation,
        Error::Inconsistency(_) => TailkitStatus::TailkitErrInconsistency,
        Error::Unsupported(_) => TailkitStatus::TailkitErrUnsupported,
        Error::Parse(_) => TailkitStatus::TailkitErrParse,
        Error::Io(_) => TailkitStatus::TailkitErrIo,
    }
}

fn fail(err: Error) -> TailkitStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null_pointer(what: &str) -> TailkitStatus {
    set_error(&format!("null pointer: {}", what));
    TailkitStatus::TailkitErrNullPointer
}

/// Message of the most recent error on this thread; valid until the next
/// failing call. Never null.
#[no_mangle]
pub extern "C" fn tailkit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque k-uniform hypergraph handle.
pub struct TailkitHypergraph {
    inner: Hypergraph,
}

/// Opaque rooted-graph handle.
pub struct TailkitRootedGraph {
    inner: RootedGraph,
}

unsafe fn text_from(ptr_text: *const c_char) -> Result<&'static str, TailkitStatus> {
    if ptr_text.is_null() {
        return Err(null_pointer("text"));
    }
    CStr::from_ptr(ptr_text).to_str().map_err(|_| {
        set_error("input text is not valid UTF-8");
        TailkitStatus::TailkitErrUtf8
    })
}

/// Parse a hypergraph from the text file format (header "N k", one edge per
/// line) and return a new handle through `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_parse(
    text: *const c_char,
    out: *mut *mut TailkitHypergraph,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let text = match text_from(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match Hypergraph::from_reader(Cursor::new(text)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(TailkitHypergraph { inner }));
            TailkitStatus::TailkitOk
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

/// Release a hypergraph handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `tailkit_hypergraph_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_free(handle: *mut TailkitHypergraph) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn hypergraph_ref<'a>(
    handle: *const TailkitHypergraph,
) -> Result<&'a Hypergraph, TailkitStatus> {
    handle
        .as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| null_pointer("hypergraph handle"))
}

/// Number of edges.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_edge_count(
    handle: *const TailkitHypergraph,
    out: *mut u64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    match hypergraph_ref(handle) {
        Ok(h) => {
            *out = h.edge_count();
            TailkitStatus::TailkitOk
        }
        Err(status) => status,
    }
}

/// Expected edge count mu = |H| p^k.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_mu(
    handle: *const TailkitHypergraph,
    p: f64,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let h = match hypergraph_ref(handle) {
        Ok(h) => h,
        Err(status) => return status,
    };
    match h.expected_count(p) {
        Ok(mu) => {
            *out = mu;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Degree bound Delta_j: most edges containing a common j-set.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_degree_bound(
    handle: *const TailkitHypergraph,
    j: usize,
    out: *mut u64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let h = match hypergraph_ref(handle) {
        Ok(h) => h,
        Err(status) => return status,
    };
    match h.degree_bound(j) {
        Ok(d) => {
            *out = d;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Exact tail P(X >= threshold) by full enumeration (guarded by ground size).
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_exact_tail(
    handle: *const TailkitHypergraph,
    p: f64,
    threshold: f64,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let h = match hypergraph_ref(handle) {
        Ok(h) => h,
        Err(status) => return status,
    };
    match h.exact_tail(p, threshold) {
        Ok(tail) => {
            *out = tail;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Optimized Markov bound on P(X >= t mu) over moment orders 1..=m_max.
/// Writes the bound and the minimizing order.
///
/// # Safety
/// `handle`, `out_bound`, and `out_m` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_hypergraph_markov_upper(
    handle: *const TailkitHypergraph,
    p: f64,
    t: f64,
    m_max: u64,
    out_bound: *mut f64,
    out_m: *mut u64,
) -> TailkitStatus {
    if out_bound.is_null() || out_m.is_null() {
        return null_pointer("out");
    }
    let h = match hypergraph_ref(handle) {
        Ok(h) => h,
        Err(status) => return status,
    };
    match bounds::markov_tail_upper(h, p, t, m_max) {
        Ok((bound, m)) => {
            *out_bound = bound;
            *out_m = m;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Parse a rooted graph: graph text (first line "n", then "u v" edges,
/// 1-indexed) plus an array of 1-indexed root vertices.
///
/// # Safety
/// `text` must be NUL-terminated, `roots` must point to `root_count` entries,
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_parse(
    text: *const c_char,
    roots: *const u32,
    root_count: usize,
    out: *mut *mut TailkitRootedGraph,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if roots.is_null() && root_count > 0 {
        return null_pointer("roots");
    }
    let text = match text_from(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let roots: Vec<usize> = if root_count == 0 {
        Vec::new()
    } else {
        slice::from_raw_parts(roots, root_count)
            .iter()
            .map(|&r| r as usize)
            .collect()
    };
    let build = Graph::from_reader(Cursor::new(text))
        .and_then(|g| RootedGraph::from_roots_1based(g, &roots));
    match build {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(TailkitRootedGraph { inner }));
            TailkitStatus::TailkitOk
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

/// Release a rooted-graph handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `tailkit_rooted_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_free(handle: *mut TailkitRootedGraph) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn rooted_ref<'a>(
    handle: *const TailkitRootedGraph,
) -> Result<&'a RootedGraph, TailkitStatus> {
    handle
        .as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| null_pointer("rooted handle"))
}

/// Fractional independence number of G - R as numerator / denominator.
///
/// # Safety
/// `handle`, `out_num`, and `out_den` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_alpha_star(
    handle: *const TailkitRootedGraph,
    out_num: *mut i64,
    out_den: *mut i64,
) -> TailkitStatus {
    if out_num.is_null() || out_den.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    let a = alpha_star(&rg.minus_roots()).value;
    *out_num = *a.numer();
    *out_den = *a.denom();
    TailkitStatus::TailkitOk
}

/// Rooted density m_R(G) as a double.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_density(
    handle: *const TailkitRootedGraph,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    match rg.rooted_density() {
        Ok(d) => {
            *out = d.to_f64().unwrap_or(f64::NAN);
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Exponent base M_{R,G} at (n, p).
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_m_value(
    handle: *const TailkitRootedGraph,
    n: u64,
    p: f64,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    match rg.min_exponent_base(n, p) {
        Ok(m) => {
            *out = m.value;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Expected rooted copy count mu at (n, p).
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_mean(
    handle: *const TailkitRootedGraph,
    n: u64,
    p: f64,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    match rg.rooted_mean(n, p) {
        Ok(mu) => {
            *out = mu;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Tail regime of (n, p, t): writes the regime letter ('a'..'d') plus the
/// appearance threshold and the phase boundaries p1, p2.
///
/// # Safety
/// `handle` and all out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_regime(
    handle: *const TailkitRootedGraph,
    n: u64,
    p: f64,
    t: f64,
    out_letter: *mut c_char,
    out_threshold: *mut f64,
    out_p1: *mut f64,
    out_p2: *mut f64,
) -> TailkitStatus {
    if out_letter.is_null() || out_threshold.is_null() || out_p1.is_null() || out_p2.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    match rg.classify_regime(n, p, t) {
        Ok(report) => {
            *out_letter = report.regime.letter().as_bytes()[0] as c_char;
            *out_threshold = report.threshold;
            *out_p1 = report.p1;
            *out_p2 = report.p2;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}

/// Exact tail P(X_G^R >= threshold) in G(n, p) by enumeration (guarded).
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tailkit_rooted_exact_tail(
    handle: *const TailkitRootedGraph,
    n: usize,
    p: f64,
    threshold: f64,
    out: *mut f64,
) -> TailkitStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let rg = match rooted_ref(handle) {
        Ok(rg) => rg,
        Err(status) => return status,
    };
    match sim::exact_tail_rooted(rg, n, p, threshold) {
        Ok(tail) => {
            *out = tail;
            TailkitStatus::TailkitOk
        }
        Err(e) => fail(e),
    }
}
