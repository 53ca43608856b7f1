//! C ABI over `treetau`.
//!
//! Objects are opaque handles created by `*_new`/`*_sample` functions and released
//! with the matching `*_free`. Every fallible call returns a `TreetauStatus`; on
//! failure `treetau_last_error` describes the most recent error on the calling
//! thread. Panics are caught at the boundary and reported as `TREETAU_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treetau::asymptotics::{expected_tau_asymptotic, Mode};
use treetau::experiments::{mc_expected_tau, McConfig};
use treetau::graphs::sample_simple_graph;
use treetau::numeric::ln_biguint;
use treetau::trees::count_trees_with_degrees;
use treetau::{DegreeSequence, Error, SimpleGraph, TreeDegreeSequence};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreetauStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Domain = 4,
    CapExceeded = 5,
    RetryLimit = 6,
    Disconnected = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Degree sequence handle.
pub struct TreetauDegreeSequence {
    inner: DegreeSequence,
}

/// Simple graph handle.
pub struct TreetauGraph {
    inner: SimpleGraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TreetauEstimate {
    pub log_value: f64,
    pub error_exponent: f64,
    pub condition_ok: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TreetauMcEstimate {
    pub mean_log: f64,
    pub std_error: f64,
    pub connected_fraction: f64,
    pub samples: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TreetauStatus {
    match e {
        Error::InvalidDegrees(_)
        | Error::InvalidTreeDegrees(_)
        | Error::NotSuitable(_)
        | Error::InvalidTree(_)
        | Error::InvalidGraph(_)
        | Error::InvalidCode(_)
        | Error::Parse(_) => TreetauStatus::InvalidArgument,
        Error::Precondition(_) => TreetauStatus::Precondition,
        Error::Domain(_) => TreetauStatus::Domain,
        Error::CapExceeded(_) => TreetauStatus::CapExceeded,
        Error::RetryLimit(_) => TreetauStatus::RetryLimit,
        Error::Disconnected => TreetauStatus::Disconnected,
    }
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), (TreetauStatus, String)>) -> TreetauStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TreetauStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside treetau".into());
            TreetauStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TreetauStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TreetauStatus, String) {
    (TreetauStatus::NullPointer, format!("{what} is null"))
}

unsafe fn u32_slice<'a>(data: *const u32, len: usize) -> Result<&'a [u32], (TreetauStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("array"));
    }
    Ok(slice::from_raw_parts(data, len))
}

/// Writes `text` and a terminating NUL into `buf`; `needed` receives the full size.
unsafe fn write_string(
    text: &str,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> Result<(), (TreetauStatus, String)> {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || cap < size {
        return Err((TreetauStatus::BufferTooSmall, format!("need a buffer of {size} bytes")));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn treetau_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn treetau_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `degrees` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_degseq_new(
    degrees: *const u32,
    len: usize,
    out: *mut *mut TreetauDegreeSequence,
) -> TreetauStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = u32_slice(degrees, len)?;
        let inner = DegreeSequence::new(values.to_vec()).map_err(lib)?;
        *out = Box::into_raw(Box::new(TreetauDegreeSequence { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from `treetau_degseq_new`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn treetau_degseq_free(handle: *mut TreetauDegreeSequence) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live degree-sequence handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_degseq_is_graphical(
    handle: *const TreetauDegreeSequence,
    out: *mut bool,
) -> TreetauStatus {
    guard(|| {
        let d = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = d.inner.is_graphical();
        Ok(())
    })
}

/// Asymptotic `ln E τ_d`. With `strict`, sequences outside the formula's
/// hypotheses fail with `TREETAU_STATUS_PRECONDITION`.
///
/// # Safety
/// `handle` must be a live degree-sequence handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_estimate(
    handle: *const TreetauDegreeSequence,
    strict: bool,
    out: *mut TreetauEstimate,
) -> TreetauStatus {
    guard(|| {
        let d = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let mode = if strict { Mode::Strict } else { Mode::Permissive };
        let est = expected_tau_asymptotic(&d.inner, mode).map_err(lib)?;
        *out = TreetauEstimate {
            log_value: est.log_value,
            error_exponent: est.error_exponent,
            condition_ok: est.condition_ok,
        };
        Ok(())
    })
}

/// Monte Carlo `ln E τ_d`; deterministic for fixed `(seed, workers)`.
///
/// # Safety
/// `handle` must be a live degree-sequence handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_mc_expected_tau(
    handle: *const TreetauDegreeSequence,
    samples: u64,
    seed: u64,
    workers: usize,
    out: *mut TreetauMcEstimate,
) -> TreetauStatus {
    guard(|| {
        let d = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let config = McConfig { samples, seed, workers, ..McConfig::default() };
        let est = mc_expected_tau(&d.inner, &config).map_err(lib)?;
        *out = TreetauMcEstimate {
            mean_log: est.mean_log,
            std_error: est.std_error,
            connected_fraction: est.connected_fraction,
            samples: est.samples,
        };
        Ok(())
    })
}

/// Number of labelled trees with degrees `x`, as a decimal string.
///
/// # Safety
/// `x` must point to `len` readable values; `buf` must have `cap` writable bytes
/// (or be null to query the size through `needed`).
#[no_mangle]
pub unsafe extern "C" fn treetau_count_trees(
    x: *const u32,
    len: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> TreetauStatus {
    guard(|| {
        let x = TreeDegreeSequence::new(u32_slice(x, len)?.to_vec()).map_err(lib)?;
        write_string(&count_trees_with_degrees(&x).to_string(), buf, cap, needed)
    })
}

/// Graph on `0..n` from `m` zero-based edges stored as `edges[2i], edges[2i+1]`.
///
/// # Safety
/// `edges` must point to `2m` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_new(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut TreetauGraph,
) -> TreetauStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = u32_slice(edges, 2 * m)?;
        let inner = SimpleGraph::new(n, flat.chunks_exact(2).map(|e| (e[0], e[1]))).map_err(lib)?;
        *out = Box::into_raw(Box::new(TreetauGraph { inner }));
        Ok(())
    })
}

/// Uniform random graph with degrees `d`.
///
/// # Safety
/// `degseq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_sample(
    degseq: *const TreetauDegreeSequence,
    seed: u64,
    out: *mut *mut TreetauGraph,
) -> TreetauStatus {
    guard(|| {
        let d = degseq.as_ref().ok_or_else(|| null("degseq"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = sample_simple_graph(&d.inner, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(lib)?;
        *out = Box::into_raw(Box::new(TreetauGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from this library, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_free(handle: *mut TreetauGraph) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live graph handle and `out_n`, `out_m` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_size(
    handle: *const TreetauGraph,
    out_n: *mut usize,
    out_m: *mut usize,
) -> TreetauStatus {
    guard(|| {
        let g = handle.as_ref().ok_or_else(|| null("handle"))?;
        *out_n.as_mut().ok_or_else(|| null("out_n"))? = g.inner.n();
        *out_m.as_mut().ok_or_else(|| null("out_m"))? = g.inner.edges().len();
        Ok(())
    })
}

/// Copies the zero-based edges, `u < v`, sorted, into `edges[0..2m]`.
///
/// # Safety
/// `edges` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_edges(
    handle: *const TreetauGraph,
    edges: *mut u32,
    cap: usize,
) -> TreetauStatus {
    guard(|| {
        let g = handle.as_ref().ok_or_else(|| null("handle"))?;
        let need = 2 * g.inner.edges().len();
        if edges.is_null() || cap < need {
            return Err((TreetauStatus::BufferTooSmall, format!("need room for {need} values")));
        }
        let out = slice::from_raw_parts_mut(edges, need);
        for (slot, &(u, v)) in out.chunks_exact_mut(2).zip(g.inner.edges()) {
            slot[0] = u;
            slot[1] = v;
        }
        Ok(())
    })
}

/// Exact `τ(G)` as a decimal string.
///
/// # Safety
/// `handle` must be a live graph handle; `buf` must have `cap` writable bytes
/// (or be null to query the size through `needed`).
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_spanning_tree_count(
    handle: *const TreetauGraph,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> TreetauStatus {
    guard(|| {
        let g = handle.as_ref().ok_or_else(|| null("handle"))?;
        write_string(&g.inner.spanning_tree_count().value.to_string(), buf, cap, needed)
    })
}

/// `ln τ(G)` computed exactly then rounded; `-inf` for a disconnected graph.
///
/// # Safety
/// `handle` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn treetau_graph_ln_spanning_tree_count(
    handle: *const TreetauGraph,
    out: *mut f64,
) -> TreetauStatus {
    guard(|| {
        let g = handle.as_ref().ok_or_else(|| null("handle"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = ln_biguint(&g.inner.spanning_tree_count().value);
        Ok(())
    })
}
