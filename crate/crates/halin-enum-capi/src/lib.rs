//! C ABI for the halin-enum library.
//!
//! Graphs travel as opaque handles, every fallible call returns a status
//! code, and strings handed out must be released with [`halin_string_free`].
//! The header `include/halin_enum.h` is generated by cbindgen at build time.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use halin_enum::check::run_check_with;
use halin_enum::enumerate::{enumerate_with, EnumConfig, EnumError, EnumSink};
use halin_enum::format as graph_format;
use halin_enum::halin::{build_halin, random_halin, HalinGraph};
use halin_enum::oracle::kirchhoff_count;
use halin_enum::parallel::{run_parallel, ConcurrentSink, ParallelConfig};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HalinStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The graph file could not be parsed.
    ParseError = 3,
    /// The tree violates the Halin constraints.
    InvalidGraph = 4,
    /// A parameter was out of range.
    InvalidArgument = 5,
    /// The retained-tree cap was hit; results are partial.
    CapacityExceeded = 6,
    /// The graph exceeds an oracle guard.
    TooLarge = 7,
    /// The verification verdict was FAIL.
    CheckFailed = 8,
    /// Unexpected internal failure.
    Internal = 9,
}

/// Enumeration mode selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HalinMode {
    /// Emit every spanning tree at least once; repeats possible.
    Naive = 0,
    /// Emit every spanning tree exactly once.
    Distinct = 1,
}

/// Opaque graph handle.
pub struct HalinGraphHandle {
    inner: HalinGraph,
}

/// Summary of one enumeration run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct HalinEnumStats {
    pub total_emitted: u64,
    /// Distinct canonical keys; equals `total_emitted` in distinct mode.
    pub distinct: u64,
    /// Emissions that repeated an earlier key.
    pub duplicates: u64,
    pub expansions: u64,
    pub max_delay_us: u64,
    pub mean_delay_us: u64,
}

fn graph_out(
    out: *mut *mut HalinGraphHandle,
    result: Result<HalinGraph, HalinStatus>,
) -> HalinStatus {
    if out.is_null() {
        return HalinStatus::NullArgument;
    }
    match result {
        Ok(inner) => {
            let handle = Box::new(HalinGraphHandle { inner });
            unsafe { *out = Box::into_raw(handle) };
            HalinStatus::Ok
        }
        Err(status) => {
            unsafe { *out = ptr::null_mut() };
            status
        }
    }
}

fn guarded<F: FnOnce() -> HalinStatus>(f: F) -> HalinStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HalinStatus::Internal)
}

/// Parses a graph file (text format) into a new handle.
///
/// On success `*out` owns the graph; release it with [`halin_graph_free`].
/// # Safety
///
/// `text` must point to a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_parse(
    text: *const c_char,
    out: *mut *mut HalinGraphHandle,
) -> HalinStatus {
    guarded(|| {
        if text.is_null() {
            return graph_out(out, Err(HalinStatus::NullArgument));
        }
        let raw = unsafe { CStr::from_ptr(text) };
        let Ok(text) = raw.to_str() else {
            return graph_out(out, Err(HalinStatus::InvalidUtf8));
        };
        let spec = match graph_format::parse(text) {
            Ok(spec) => spec,
            Err(_) => return graph_out(out, Err(HalinStatus::ParseError)),
        };
        match build_halin(spec) {
            Ok(h) => graph_out(out, Ok(h)),
            Err(_) => graph_out(out, Err(HalinStatus::InvalidGraph)),
        }
    })
}

/// Generates a random Halin graph; deterministic for a fixed seed.
/// # Safety
///
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_generate(
    seed: u64,
    target_n: u32,
    max_children: u32,
    out: *mut *mut HalinGraphHandle,
) -> HalinStatus {
    guarded(
        || match random_halin(seed, target_n as usize, max_children as usize) {
            Ok(h) => graph_out(out, Ok(h)),
            Err(_) => graph_out(out, Err(HalinStatus::InvalidArgument)),
        },
    )
}

/// Releases a graph handle. Null is ignored.
/// # Safety
///
/// `graph` must be a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_free(graph: *mut HalinGraphHandle) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Number of vertices, or 0 for a null handle.
/// # Safety
///
/// `graph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_vertex_count(graph: *const HalinGraphHandle) -> u32 {
    unsafe { graph.as_ref() }.map_or(0, |g| g.inner.n() as u32)
}

/// Number of leaves (accompanying-cycle length), or 0 for a null handle.
/// # Safety
///
/// `graph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_leaf_count(graph: *const HalinGraphHandle) -> u32 {
    unsafe { graph.as_ref() }.map_or(0, |g| g.inner.p() as u32)
}

/// Depth of the characteristic tree, or 0 for a null handle.
/// # Safety
///
/// `graph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_depth(graph: *const HalinGraphHandle) -> u32 {
    unsafe { graph.as_ref() }.map_or(0, |g| g.inner.d() as u32)
}

/// Serializes the graph back into the text format. The returned string must
/// be released with [`halin_string_free`].
/// # Safety
///
/// `graph` must be null or a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_graph_serialize(
    graph: *const HalinGraphHandle,
    out: *mut *mut c_char,
) -> HalinStatus {
    guarded(|| {
        if out.is_null() {
            return HalinStatus::NullArgument;
        }
        let Some(g) = (unsafe { graph.as_ref() }) else {
            unsafe { *out = ptr::null_mut() };
            return HalinStatus::NullArgument;
        };
        let text = graph_format::serialize(&g.inner);
        match CString::new(text) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                HalinStatus::Ok
            }
            Err(_) => HalinStatus::Internal,
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
/// # Safety
///
/// `s` must be a string from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn halin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Enumerates spanning trees and fills `stats`.
///
/// `workers == 1` runs sequentially; larger values use a fork-join pool.
/// `cap == 0` keeps the default retained-tree cap.
/// # Safety
///
/// `graph` must be null or a live handle; `stats` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_enumerate(
    graph: *const HalinGraphHandle,
    mode: HalinMode,
    workers: u32,
    cap: u64,
    stats: *mut HalinEnumStats,
) -> HalinStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph.as_ref() }) else {
            return HalinStatus::NullArgument;
        };
        if stats.is_null() {
            return HalinStatus::NullArgument;
        }
        if workers == 0 {
            return HalinStatus::InvalidArgument;
        }
        let cfg = match mode {
            HalinMode::Naive => EnumConfig::naive(),
            HalinMode::Distinct => EnumConfig::distinct(),
        };
        let mut sink = EnumSink::counting_with_keys();
        if cap > 0 {
            sink = sink.with_cap(cap as usize);
        }
        let report = if workers == 1 {
            let mut sink = sink;
            enumerate_with(&g.inner, &cfg, &mut sink)
        } else {
            let shared = ConcurrentSink::new(sink);
            run_parallel(
                &g.inner,
                &ParallelConfig::new(workers as usize, cfg),
                &shared,
            )
            .map(|(report, _)| report)
        };
        match report {
            Ok(report) => {
                let distinct = report.distinct_count.unwrap_or(report.total_emitted);
                unsafe {
                    *stats = HalinEnumStats {
                        total_emitted: report.total_emitted,
                        distinct,
                        duplicates: report.total_emitted.saturating_sub(distinct),
                        expansions: report.expansions,
                        max_delay_us: report.max_delay.as_micros() as u64,
                        mean_delay_us: report.mean_delay.as_micros() as u64,
                    };
                }
                HalinStatus::Ok
            }
            Err(EnumError::SinkOverflow { .. }) => HalinStatus::CapacityExceeded,
            Err(EnumError::Config(_)) => HalinStatus::InvalidArgument,
            Err(_) => HalinStatus::Internal,
        }
    })
}

/// Exact spanning-tree count by the matrix-tree theorem, as a decimal
/// string (counts overflow fixed-width integers quickly). Release the
/// string with [`halin_string_free`].
/// # Safety
///
/// `graph` must be null or a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_spanning_tree_count(
    graph: *const HalinGraphHandle,
    out: *mut *mut c_char,
) -> HalinStatus {
    guarded(|| {
        if out.is_null() {
            return HalinStatus::NullArgument;
        }
        let Some(g) = (unsafe { graph.as_ref() }) else {
            unsafe { *out = ptr::null_mut() };
            return HalinStatus::NullArgument;
        };
        let count = kirchhoff_count(g.inner.n(), &g.inner.all_edges());
        match CString::new(count.count.to_string()) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                HalinStatus::Ok
            }
            Err(_) => HalinStatus::Internal,
        }
    })
}

/// Runs the oracle verification suite. `guard` bounds the brute-force
/// clauses (pass 0 for the default). Writes the verdict into `out_pass`
/// and returns `CheckFailed` alongside `*out_pass == false` on FAIL.
/// # Safety
///
/// `graph` must be null or a live handle; `out_pass` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn halin_check(
    graph: *const HalinGraphHandle,
    guard: u32,
    out_pass: *mut bool,
) -> HalinStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph.as_ref() }) else {
            return HalinStatus::NullArgument;
        };
        if out_pass.is_null() {
            return HalinStatus::NullArgument;
        }
        let guard = if guard == 0 {
            halin_enum::oracle::BRUTE_FORCE_GUARD
        } else {
            guard as usize
        };
        match run_check_with(&g.inner, guard, &EnumConfig::distinct()) {
            Ok(outcome) => {
                let passed = outcome.passed();
                unsafe { *out_pass = passed };
                if passed {
                    HalinStatus::Ok
                } else {
                    HalinStatus::CheckFailed
                }
            }
            Err(_) => HalinStatus::Internal,
        }
    })
}
