//! C ABI over `dimwit`.
//!
//! Graphs are opaque handles created by the `dimwit_graph_*` constructors and
//! released with [`dimwit_graph_free`]. Every fallible call returns a
//! [`DimwitStatus`]; the message of the most recent failure on the calling
//! thread is available from [`dimwit_last_error`]. Strings returned to the
//! caller are owned by Rust and must be released with [`dimwit_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use dimwit::graph::{
    generate_mermin, generate_qite, generate_standard, independence_number, parse_graph, Graph,
    GraphFormat, StandardFamily,
};
use dimwit::heuristic::{heuristic_theta_d, HeuristicConfig};
use dimwit::theta::{barvinok_bound, lovasz_theta};
use dimwit::witness::witness_report;
use dimwit::Error;

/// Opaque graph handle.
pub struct DimwitGraph(Graph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimwitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedGraph = 3,
    InvalidParameter = 4,
    Numeric = 5,
    HeuristicFailed = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimwitFormat {
    Json = 0,
    Dimacs = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimwitFamily {
    Cycle = 0,
    Complete = 1,
    Empty = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimwitHeuristicConfig {
    pub d: size_t,
    pub iters: size_t,
    pub restarts: size_t,
    pub seed: u64,
    pub stop_tol: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DimwitHeuristicResult {
    pub bound: f64,
    pub converged: bool,
    pub achieved_rank: size_t,
    pub failed_restarts: size_t,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DimwitStatus {
    match e {
        Error::MalformedGraph(_) => DimwitStatus::MalformedGraph,
        Error::InvalidParameter(_) => DimwitStatus::InvalidParameter,
        Error::HeuristicFailed(_) => DimwitStatus::HeuristicFailed,
        Error::Io(_) | Error::Json(_) => DimwitStatus::Io,
        _ => DimwitStatus::Numeric,
    }
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), DimwitStatus>) -> DimwitStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DimwitStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            DimwitStatus::Panic
        }
    }
}

fn fail(e: Error) -> DimwitStatus {
    let s = status_of(&e);
    set_last_error(e.to_string());
    s
}

fn null(what: &str) -> DimwitStatus {
    set_last_error(format!("{what} is null"));
    DimwitStatus::NullPointer
}

unsafe fn graph_ref<'a>(g: *const DimwitGraph) -> Result<&'a Graph, DimwitStatus> {
    // SAFETY: caller passes a handle from a dimwit_graph_* constructor or null.
    unsafe { g.as_ref() }
        .map(|g| &g.0)
        .ok_or_else(|| null("graph"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, DimwitStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| {
        set_last_error(format!("{what} is not valid UTF-8"));
        DimwitStatus::InvalidUtf8
    })
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), DimwitStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and caller-provided for writing.
    unsafe { out.write(v) };
    Ok(())
}

unsafe fn put_graph(
    out: *mut *mut DimwitGraph,
    g: Result<Graph, Error>,
) -> Result<(), DimwitStatus> {
    let g = g.map_err(fail)?;
    unsafe { put(out, Box::into_raw(Box::new(DimwitGraph(g))), "out") }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), DimwitStatus> {
    let c = CString::new(s).map_err(|_| {
        set_last_error("output contains NUL".into());
        DimwitStatus::Io
    })?;
    unsafe { put(out, c.into_raw(), "out") }
}

fn config(c: &DimwitHeuristicConfig) -> HeuristicConfig {
    let mut cfg = HeuristicConfig::new(c.d);
    cfg.iters = c.iters;
    cfg.restarts = c.restarts;
    cfg.seed = c.seed;
    cfg.stop_tol = c.stop_tol;
    cfg
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn dimwit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dimwit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_parse(
    text: *const c_char,
    format: DimwitFormat,
    out: *mut *mut DimwitGraph,
) -> DimwitStatus {
    guard(|| unsafe {
        let text = str_arg(text, "text")?;
        let format = match format {
            DimwitFormat::Json => GraphFormat::Json,
            DimwitFormat::Dimacs => GraphFormat::Dimacs,
        };
        put_graph(out, parse_graph(text, format))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_standard(
    family: DimwitFamily,
    n: size_t,
    out: *mut *mut DimwitGraph,
) -> DimwitStatus {
    let family = match family {
        DimwitFamily::Cycle => StandardFamily::Cycle,
        DimwitFamily::Complete => StandardFamily::Complete,
        DimwitFamily::Empty => StandardFamily::Empty,
    };
    guard(|| unsafe { put_graph(out, generate_standard(family, n)) })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_qite(k: size_t, out: *mut *mut DimwitGraph) -> DimwitStatus {
    guard(|| unsafe { put_graph(out, generate_qite(k)) })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_mermin(out: *mut *mut DimwitGraph) -> DimwitStatus {
    guard(|| unsafe { put_graph(out, Ok(generate_mermin())) })
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_free(g: *mut DimwitGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_vertex_count(g: *const DimwitGraph) -> size_t {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_edge_count(g: *const DimwitGraph) -> size_t {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.edge_count())
}

/// Graph as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_graph_to_json(
    g: *const DimwitGraph,
    out: *mut *mut c_char,
) -> DimwitStatus {
    guard(|| unsafe {
        let g = graph_ref(g)?;
        put_string(out, g.to_json())
    })
}

/// Independence number as a double. If `members_json` is non-null it
/// receives a maximum stable set as a JSON array.
///
/// # Safety
/// `g` must be a live handle; `value` must be writable; `members_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn dimwit_alpha(
    g: *const DimwitGraph,
    value: *mut f64,
    members_json: *mut *mut c_char,
) -> DimwitStatus {
    guard(|| unsafe {
        let g = graph_ref(g)?;
        let s = independence_number(g);
        put(value, s.value_f64(), "value")?;
        if !members_json.is_null() {
            let items: Vec<String> = s.members.iter().map(|v| v.to_string()).collect();
            put_string(members_json, format!("[{}]", items.join(",")))?;
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_theta(g: *const DimwitGraph, value: *mut f64) -> DimwitStatus {
    guard(|| unsafe {
        let g = graph_ref(g)?;
        let r = lovasz_theta(g).map_err(fail)?;
        put(value, r.value, "value")
    })
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dimwit_barvinok_bound(g: *const DimwitGraph) -> size_t {
    unsafe { g.as_ref() }.map_or(0, |g| barvinok_bound(&g.0))
}

/// Default heuristic settings for dimension `d`.
#[no_mangle]
pub extern "C" fn dimwit_heuristic_config_default(d: size_t) -> DimwitHeuristicConfig {
    let c = HeuristicConfig::new(d);
    DimwitHeuristicConfig {
        d: c.d,
        iters: c.iters,
        restarts: c.restarts,
        seed: c.seed,
        stop_tol: c.stop_tol,
    }
}

/// Heuristic lower bound on the dimension-restricted theta. The bound is
/// only valid when `converged` is set.
///
/// # Safety
/// `g` and `cfg` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_heuristic(
    g: *const DimwitGraph,
    cfg: *const DimwitHeuristicConfig,
    out: *mut DimwitHeuristicResult,
) -> DimwitStatus {
    guard(|| unsafe {
        let g = graph_ref(g)?;
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let r = heuristic_theta_d(g, &config(cfg)).map_err(fail)?;
        put(
            out,
            DimwitHeuristicResult {
                bound: r.bound,
                converged: r.converged,
                achieved_rank: r.achieved_rank,
                failed_restarts: r.failed_restarts,
            },
            "out",
        )
    })
}

/// Witness report JSON for the `ndims` caps in `dims`; `cfg.d` is ignored.
///
/// # Safety
/// `g` and `cfg` must be valid, `dims` must point to `ndims` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dimwit_report_json(
    g: *const DimwitGraph,
    dims: *const size_t,
    ndims: size_t,
    cfg: *const DimwitHeuristicConfig,
    out: *mut *mut c_char,
) -> DimwitStatus {
    guard(|| unsafe {
        let g = graph_ref(g)?;
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        if dims.is_null() && ndims > 0 {
            return Err(null("dims"));
        }
        let dims: &[usize] = if ndims == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(dims, ndims)
        };
        let rep = witness_report(g, dims, &config(cfg)).map_err(fail)?;
        put_string(out, rep.to_json())
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn dimwit_status_str(status: DimwitStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DimwitStatus::Ok => c"ok",
        DimwitStatus::NullPointer => c"null pointer",
        DimwitStatus::InvalidUtf8 => c"invalid UTF-8",
        DimwitStatus::MalformedGraph => c"malformed graph",
        DimwitStatus::InvalidParameter => c"invalid parameter",
        DimwitStatus::Numeric => c"numerical failure",
        DimwitStatus::HeuristicFailed => c"heuristic failed",
        DimwitStatus::Io => c"I/O or serialization error",
        DimwitStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
