//! C ABI over `edgelab`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns an [`EdgelabStatus`]; on failure
//! [`edgelab_last_error`] describes the problem. Panics never cross the
//! boundary and are reported as `EDGELAB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use edgelab::exact::exact_distribution;
use edgelab::experiment::run;
use edgelab::models::{kolmogorov_distance, llt_error, normal_model};
use edgelab::report::ExperimentConfig;
use edgelab::sampling::sample_edge_counts;
use edgelab::stein::lambda_scalar;
use edgelab::{gen_gnm, gen_gnp, EdgeCountDistribution, Error, Graph};

#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgelabStatus {
    Ok = 0,
    Io = 1,
    Config = 2,
    Budget = 3,
    Numeric = 4,
    NullPointer = 5,
    Panic = 6,
}

/// A simple graph.
pub struct EdgelabGraph {
    inner: Graph,
}

/// Counts of `e(S)` over sampled or enumerated k-subsets.
pub struct EdgelabDistribution {
    inner: EdgeCountDistribution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EdgelabStatus {
    match e {
        Error::Io(_) => EdgelabStatus::Io,
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::Json(_) => EdgelabStatus::Config,
        Error::BudgetExceeded { .. } => EdgelabStatus::Budget,
        Error::Numeric(_) | Error::Singular(_) => EdgelabStatus::Numeric,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EdgelabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EdgelabStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EdgelabStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EdgelabStatus::Panic
        }
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn string(p: *const c_char, what: &'static str) -> Result<String, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Failure::Lib(Error::InvalidParameter(format!("{what} is not valid UTF-8"))))
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn edgelab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Output format tag, a static string.
#[no_mangle]
pub extern "C" fn edgelab_format_version() -> *const c_char {
    static V: &CStr = c"edgelab/1";
    debug_assert_eq!(V.to_str().unwrap(), edgelab::FORMAT_VERSION);
    V.as_ptr()
}

fn put_graph(out: &mut *mut EdgelabGraph, g: Graph) {
    *out = Box::into_raw(Box::new(EdgelabGraph { inner: g }));
}

/// Uniform graph on `n` vertices with exactly `m` edges.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_gnm(n: usize, m: u64, seed: u64, out: *mut *mut EdgelabGraph) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        put_graph(out, gen_gnm(n, m, seed)?);
        Ok(())
    })
}

/// Each pair joined independently with probability `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_gnp(n: usize, p: f64, seed: u64, out: *mut *mut EdgelabGraph) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        put_graph(out, gen_gnp(n, p, seed)?);
        Ok(())
    })
}

/// Graph from `edges` (`2·m` vertex indices).
///
/// # Safety
/// `edges` must point to `2·m` readable values (may be NULL when `m` is 0);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_from_edges(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut EdgelabGraph,
) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flat: &[u32] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return Err(Failure::Null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let g = Graph::from_edges(n, flat.chunks_exact(2).map(|e| (e[0] as usize, e[1] as usize)))?;
        put_graph(out, g);
        Ok(())
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_read(path: *const c_char, out: *mut *mut EdgelabGraph) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = string(path, "path")?;
        put_graph(out, Graph::read_from(BufReader::new(File::open(path)?))?);
        Ok(())
    })
}

/// Writes an edge-list file.
///
/// # Safety
/// `g` must come from this library; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_write(g: *const EdgelabGraph, path: *const c_char) -> EdgelabStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let path = string(path, "path")?;
        g.inner.write_to(BufWriter::new(File::create(path)?))?;
        Ok(())
    })
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_n(g: *const EdgelabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_m(g: *const EdgelabGraph) -> u64 {
    g.as_ref().map_or(0, |g| g.inner.m())
}

/// # Safety
/// `g` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_degree(g: *const EdgelabGraph, v: usize, out: *mut u32) -> EdgelabStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let out = out_ptr(out, "out")?;
        if v >= g.inner.n() {
            return Err(Error::InvalidParameter(format!("vertex {v} out of range")).into());
        }
        *out = g.inner.degree(v);
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn edgelab_graph_free(g: *mut EdgelabGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

fn put_dist(out: &mut *mut EdgelabDistribution, d: EdgeCountDistribution) {
    *out = Box::into_raw(Box::new(EdgelabDistribution { inner: d }));
}

/// Empirical distribution of `e(S)` over `samples` uniform k-subsets.
///
/// # Safety
/// `g` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_sample(
    g: *const EdgelabGraph,
    k: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    out: *mut *mut EdgelabDistribution,
) -> EdgelabStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let out = out_ptr(out, "out")?;
        put_dist(out, sample_edge_counts(&g.inner, k, samples, seed, workers)?);
        Ok(())
    })
}

/// Exact distribution of `e(S)`; refuses with `EDGELAB_STATUS_BUDGET` when
/// `C(n,k) > budget`.
///
/// # Safety
/// `g` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_exact(
    g: *const EdgelabGraph,
    k: usize,
    budget: u64,
    out: *mut *mut EdgelabDistribution,
) -> EdgelabStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let out = out_ptr(out, "out")?;
        put_dist(out, exact_distribution(&g.inner, k, budget)?);
        Ok(())
    })
}

/// Number of subsets counted, or 0 for NULL.
///
/// # Safety
/// `d` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn edgelab_dist_total(d: *const EdgelabDistribution) -> u64 {
    d.as_ref().map_or(0, |d| d.inner.total)
}

/// Number of subsets with `e(S) = z`, or 0 for NULL.
///
/// # Safety
/// `d` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn edgelab_dist_count(d: *const EdgelabDistribution, z: u64) -> u64 {
    d.as_ref().map_or(0, |d| d.inner.count(z))
}

/// Smallest and largest observed `e(S)`.
///
/// # Safety
/// `d` must come from this library; `lo` and `hi` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn edgelab_dist_support(d: *const EdgelabDistribution, lo: *mut u64, hi: *mut u64) -> EdgelabStatus {
    guard(|| {
        let d = borrow(d, "distribution")?;
        let (lo, hi) = (out_ptr(lo, "lo")?, out_ptr(hi, "hi")?);
        match (d.inner.support_min(), d.inner.support_max()) {
            (Some(a), Some(b)) => {
                *lo = a;
                *hi = b;
                Ok(())
            }
            _ => Err(Error::InvalidParameter("empty distribution".into()).into()),
        }
    })
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn edgelab_dist_free(d: *mut EdgelabDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Kolmogorov distance to `N(K·M/N, λn²)`.
///
/// # Safety
/// `d` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_ks_distance(d: *const EdgelabDistribution, out: *mut f64) -> EdgelabStatus {
    guard(|| {
        let d = &borrow(d, "distribution")?.inner;
        let out = out_ptr(out, "out")?;
        *out = kolmogorov_distance(d, &normal_model(d.n, d.k, d.m)?)?.value;
        Ok(())
    })
}

/// `max n·|P(z) − φ(z)|` over `|z − μ| <= window·σ`.
///
/// # Safety
/// `d` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_llt_error(d: *const EdgelabDistribution, window: f64, out: *mut f64) -> EdgelabStatus {
    guard(|| {
        let d = &borrow(d, "distribution")?.inner;
        let out = out_ptr(out, "out")?;
        *out = llt_error(d, &normal_model(d.n, d.k, d.m)?, window)?.value;
        Ok(())
    })
}

/// `λ = ((n²−k²)k²/(2n⁴))·M(N−M)/N²`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_lambda(n: usize, k: usize, m: u64, out: *mut f64) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = lambda_scalar(n, k, m)?;
        Ok(())
    })
}

/// Runs a command described by a JSON configuration (the `config` object of
/// a header record; omitted fields take their defaults) and returns its
/// records as newline-separated JSON. Free the result with
/// [`edgelab_string_free`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn edgelab_run(config_json: *const c_char, out: *mut *mut c_char) -> EdgelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let text = string(config_json, "config_json")?;
        let mut value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
        // fill omitted fields from the defaults
        let mut full = serde_json::to_value(ExperimentConfig::default()).map_err(Error::from)?;
        if let (Some(dst), Some(src)) = (full.as_object_mut(), value.as_object_mut()) {
            for (k, v) in std::mem::take(src) {
                dst.insert(k, v);
            }
        }
        let cfg: ExperimentConfig = serde_json::from_value(full).map_err(Error::from)?;
        let result = run(&cfg, |_| {})?;
        let s = CString::new(result.records_text()).expect("JSON has no NUL bytes");
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn edgelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
