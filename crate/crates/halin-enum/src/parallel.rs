//! Fork-join execution of the enumeration engines.
//!
//! Each `(partial tree, cycle edge)` expansion is an independent task: the
//! tree, including its blue set, is owned by exactly one task, all graph
//! data is shared read-only, and the sink append is the only synchronization
//! point. A bounded worker pool executes the dynamically generated task
//! tree; its shape matches the sequential recursion, so spawn counts equal
//! the sequential engine's expansion counts exactly.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::enumerate::{
    enumerate_with, expansion, make_child, materialize, EmittedTree, EnumConfig, EnumError,
    EnumReport, EnumSink, PartialTree,
};
use crate::halin::{HalinGraph, SplitMix64};

/// One unit of parallel work: expand `tree` with cycle edge `edge_index`.
#[derive(Clone, Debug)]
pub struct ExpansionTask {
    pub tree: PartialTree,
    pub edge_index: usize,
}

/// Thread-safe wrapper around an [`EnumSink`]; appends are serialized, and
/// the first overflow flips an abort flag every task watches.
pub struct ConcurrentSink {
    inner: Mutex<EnumSink>,
    aborted: AtomicBool,
}

impl ConcurrentSink {
    pub fn new(sink: EnumSink) -> ConcurrentSink {
        ConcurrentSink {
            inner: Mutex::new(sink),
            aborted: AtomicBool::new(false),
        }
    }

    pub fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    pub fn emit(&self, tree: EmittedTree) -> Result<(), EnumError> {
        let mut sink = self.inner.lock().unwrap_or_else(|p| p.into_inner());
        let res = sink.emit(tree);
        if res.is_err() {
            self.aborted.store(true, Ordering::Relaxed);
        }
        res
    }

    /// Runs `f` with the underlying sink locked. Counters stay consistent
    /// even after a worker panic poisoned the lock, so partial results
    /// remain readable.
    pub fn with_inner<R>(&self, f: impl FnOnce(&EnumSink) -> R) -> R {
        f(&self.inner.lock().unwrap_or_else(|p| p.into_inner()))
    }

    pub fn flush(&self) -> Result<(), EnumError> {
        self.inner
            .lock()
            .unwrap_or_else(|p| p.into_inner())
            .flush()
            .map_err(EnumError::Io)
    }

    pub fn into_inner(self) -> EnumSink {
        self.inner.into_inner().unwrap_or_else(|p| p.into_inner())
    }
}

#[derive(Clone, Debug)]
pub struct ParallelConfig {
    pub workers: usize,
    pub enum_config: EnumConfig,
    /// When set, sibling tasks are handed to the pool in a seeded shuffled
    /// order. Emission sets never change; only the schedule does. Leave
    /// `None` for the workers=1 order guarantee.
    pub shuffle_seed: Option<u64>,
    /// Expansions deeper than this run inline on the current worker instead
    /// of splitting further.
    pub depth_limit: Option<usize>,
}

impl ParallelConfig {
    pub fn new(workers: usize, enum_config: EnumConfig) -> ParallelConfig {
        ParallelConfig {
            workers,
            enum_config,
            shuffle_seed: None,
            depth_limit: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParallelReport {
    pub workers: usize,
    /// Number of expansions executed; equals the sequential engine's count.
    pub tasks_spawned: u64,
    pub max_task_depth: usize,
    #[serde(rename = "wall_time_us", serialize_with = "ser_micros")]
    pub wall_time: Duration,
    #[serde(rename = "sequential_wall_time_us", serialize_with = "ser_opt_micros")]
    pub sequential_wall_time: Option<Duration>,
}

fn ser_micros<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_micros().min(u128::from(u64::MAX)) as u64)
}

fn ser_opt_micros<S: serde::Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_some(&(d.as_micros().min(u128::from(u64::MAX)) as u64)),
        None => s.serialize_none(),
    }
}

struct RunCtx<'a> {
    h: &'a HalinGraph,
    cfg: &'a ParallelConfig,
    sink: &'a ConcurrentSink,
    tasks: AtomicU64,
    max_depth: AtomicUsize,
}

impl<'a> RunCtx<'a> {
    fn note_task(&self, depth: usize) {
        self.tasks.fetch_add(1, Ordering::Relaxed);
        self.max_depth.fetch_max(depth, Ordering::Relaxed);
    }
}

/// Runs the configured engine on a worker pool. The emitted canonical-key
/// set (and the per-level counts) match the sequential engine for the same
/// mode; emission order is unspecified except for `workers == 1` without a
/// shuffle seed, which degenerates to the sequential order.
pub fn run_parallel(
    h: &HalinGraph,
    cfg: &ParallelConfig,
    sink: &ConcurrentSink,
) -> Result<(EnumReport, ParallelReport), EnumError> {
    if cfg.workers < 1 {
        return Err(EnumError::Config("workers must be >= 1".into()));
    }
    let p = h.p();
    if cfg.enum_config.sigma_start >= p {
        return Err(EnumError::Config(format!(
            "sigma_start {} out of range for p = {}",
            cfg.enum_config.sigma_start, p
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EnumError::Config(format!("worker pool: {e}")))?;

    let ctx = RunCtx {
        h,
        cfg,
        sink,
        tasks: AtomicU64::new(0),
        max_depth: AtomicUsize::new(0),
    };

    let start = Instant::now();
    let base = PartialTree::base(h);
    sink.emit(materialize(h, &base))?;
    let rots: Vec<usize> = (0..p).collect();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        pool.install(|| run_children(&ctx, &base, &rots, 1))
    }));
    let wall_time = start.elapsed();

    match outcome {
        Err(_) => Err(EnumError::WorkerPanic),
        Ok(Err(e)) => Err(e),
        Ok(Ok(())) => {
            sink.flush()?;
            let report = sink.with_inner(|s| s.report(p, ctx.tasks.load(Ordering::Relaxed)));
            Ok((
                report,
                ParallelReport {
                    workers: cfg.workers,
                    tasks_spawned: ctx.tasks.load(Ordering::Relaxed),
                    max_task_depth: ctx.max_depth.load(Ordering::Relaxed),
                    wall_time,
                    sequential_wall_time: None,
                },
            ))
        }
    }
}

/// Fans sibling expansions out over the pool by binary splitting; with one
/// worker the left half always runs first, reproducing sequential order.
fn run_children(
    ctx: &RunCtx<'_>,
    tree: &PartialTree,
    rots: &[usize],
    depth: usize,
) -> Result<(), EnumError> {
    match rots {
        [] => Ok(()),
        [rot] => expand(ctx, tree, *rot, depth),
        _ => {
            if let Some(seed) = ctx.cfg.shuffle_seed {
                let mut order: Vec<usize> = rots.to_vec();
                let mut rng =
                    SplitMix64(seed ^ (depth as u64) << 32 ^ rots[0] as u64 ^ tree.level() as u64);
                for i in (1..order.len()).rev() {
                    order.swap(i, rng.below(i + 1));
                }
                return split_run(ctx, tree, &order, depth);
            }
            split_run(ctx, tree, rots, depth)
        }
    }
}

fn split_run(
    ctx: &RunCtx<'_>,
    tree: &PartialTree,
    rots: &[usize],
    depth: usize,
) -> Result<(), EnumError> {
    if rots.len() == 1 {
        return expand(ctx, tree, rots[0], depth);
    }
    if ctx.cfg.depth_limit.is_some_and(|limit| depth > limit) {
        for &rot in rots {
            expand(ctx, tree, rot, depth)?;
        }
        return Ok(());
    }
    let (lo, hi) = rots.split_at(rots.len() / 2);
    let (ra, rb) = rayon::join(
        || split_run(ctx, tree, lo, depth),
        || split_run(ctx, tree, hi, depth),
    );
    ra.and(rb)
}

/// The task body: identical expansion logic to the sequential engine, with
/// child expansions handed back to the pool.
fn expand(ctx: &RunCtx<'_>, tree: &PartialTree, rot: usize, depth: usize) -> Result<(), EnumError> {
    if ctx.sink.aborted() {
        return Ok(());
    }
    ctx.note_task(depth);
    let p = ctx.h.p();
    let ecfg = &ctx.cfg.enum_config;
    let cycle_idx = (ecfg.sigma_start + rot) % p;
    let exp = expansion(ctx.h, tree, cycle_idx, ecfg);
    for cand in &exp.candidates {
        let task = ExpansionTask {
            tree: make_child(tree, &exp, cand, cycle_idx, ecfg),
            edge_index: rot,
        };
        ctx.sink.emit(materialize(ctx.h, &task.tree))?;
        let next: Vec<usize> = (rot + 1..p).collect();
        if !next.is_empty() {
            run_children(ctx, &task.tree, &next, depth + 1)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeedupRow {
    pub workers: usize,
    #[serde(rename = "wall_time_us", serialize_with = "ser_micros")]
    pub wall_time: Duration,
    pub speedup: f64,
    pub efficiency: f64,
}

/// Times the sequential engine once, then each requested worker count, and
/// reports `S_p = T_1 / T_p` and `E_p = S_p / p`. Informational: wall-clock
/// figures carry no acceptance thresholds. Meaningful timing wants p >= 8.
pub fn speedup_report(
    h: &HalinGraph,
    cfg: &EnumConfig,
    worker_counts: &[usize],
) -> Result<Vec<SpeedupRow>, EnumError> {
    let start = Instant::now();
    let mut sink = EnumSink::counting();
    enumerate_with(h, cfg, &mut sink)?;
    let t1 = start.elapsed();

    let mut rows = Vec::with_capacity(worker_counts.len());
    for &workers in worker_counts {
        if workers == 1 {
            rows.push(SpeedupRow {
                workers: 1,
                wall_time: t1,
                speedup: 1.0,
                efficiency: 1.0,
            });
            continue;
        }
        let sink = ConcurrentSink::new(EnumSink::counting());
        let pcfg = ParallelConfig::new(workers, cfg.clone());
        let (_, preport) = run_parallel(h, &pcfg, &sink)?;
        let tp = preport.wall_time;
        let speedup = t1.as_secs_f64() / tp.as_secs_f64().max(f64::EPSILON);
        rows.push(SpeedupRow {
            workers,
            wall_time: tp,
            speedup,
            efficiency: speedup / workers as f64,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_distinct, enumerate_naive, Mode};
    use crate::graph::CanonicalTreeKey;
    use crate::halin::random_halin;
    use std::collections::BTreeSet;

    fn k4() -> HalinGraph {
        HalinGraph::wheel(3).unwrap()
    }

    fn key_set(sink: &EnumSink) -> BTreeSet<CanonicalTreeKey> {
        sink.key_multiset().unwrap().keys().cloned().collect()
    }

    #[test]
    fn k4_distinct_with_four_workers_matches_sequential() {
        let h = k4();
        let mut seq = EnumSink::counting_with_keys();
        enumerate_distinct(&h, &mut seq).unwrap();

        let sink = ConcurrentSink::new(EnumSink::counting_with_keys());
        let cfg = ParallelConfig::new(4, EnumConfig::distinct());
        let (report, preport) = run_parallel(&h, &cfg, &sink).unwrap();
        assert_eq!(report.total_emitted, 16);
        assert_eq!(report.distinct_count, Some(16));
        assert_eq!(preport.workers, 4);
        assert_eq!(key_set(&sink.into_inner()), {
            let mut s = EnumSink::counting_with_keys();
            enumerate_distinct(&h, &mut s).unwrap();
            key_set(&s)
        });
    }

    #[test]
    fn one_worker_reproduces_sequential_order() {
        let h = random_halin(5, 9, 4).unwrap();
        let mut seq = EnumSink::store();
        let seq_report = enumerate_distinct(&h, &mut seq).unwrap();

        let sink = ConcurrentSink::new(EnumSink::store());
        let cfg = ParallelConfig::new(1, EnumConfig::distinct());
        let (par_report, _) = run_parallel(&h, &cfg, &sink).unwrap();
        let par = sink.into_inner();

        assert_eq!(par_report.total_emitted, seq_report.total_emitted);
        let seq_edges: Vec<_> = seq.stored().iter().map(|t| t.edges.clone()).collect();
        let par_edges: Vec<_> = par.stored().iter().map(|t| t.edges.clone()).collect();
        assert_eq!(seq_edges, par_edges);
    }

    #[test]
    fn naive_emission_count_is_schedule_independent() {
        let h = k4();
        for seed in 0..4u64 {
            let sink = ConcurrentSink::new(EnumSink::counting());
            let mut cfg = ParallelConfig::new(2, EnumConfig::naive());
            cfg.shuffle_seed = Some(seed);
            let (report, _) = run_parallel(&h, &cfg, &sink).unwrap();
            assert_eq!(report.total_emitted, 19);
        }
    }

    #[test]
    fn task_count_matches_sequential_expansions() {
        for seed in [0u64, 4, 9] {
            let h = random_halin(seed, 10, 4).unwrap();
            for mode in [Mode::Naive, Mode::Distinct] {
                let ecfg = match mode {
                    Mode::Naive => EnumConfig::naive(),
                    Mode::Distinct => EnumConfig::distinct(),
                };
                let mut seq = EnumSink::counting();
                let seq_report = enumerate_with(&h, &ecfg, &mut seq).unwrap();

                let sink = ConcurrentSink::new(EnumSink::counting());
                let cfg = ParallelConfig::new(3, ecfg);
                let (_, preport) = run_parallel(&h, &cfg, &sink).unwrap();
                assert_eq!(
                    preport.tasks_spawned, seq_report.expansions,
                    "seed {seed} mode {mode:?}"
                );
            }
        }
    }

    #[test]
    fn per_level_counts_match_sequential_under_shuffling() {
        let h = random_halin(11, 10, 4).unwrap();
        let mut seq = EnumSink::counting_with_keys();
        let seq_report = enumerate_naive(&h, &mut seq).unwrap();
        for seed in 0..3u64 {
            let sink = ConcurrentSink::new(EnumSink::counting_with_keys());
            let mut cfg = ParallelConfig::new(4, EnumConfig::naive());
            cfg.shuffle_seed = Some(seed);
            let (report, _) = run_parallel(&h, &cfg, &sink).unwrap();
            assert_eq!(report.per_level, seq_report.per_level, "seed {seed}");
            assert_eq!(key_set(&sink.into_inner()), key_set(&seq));
        }
    }

    #[test]
    fn depth_limit_still_completes() {
        let h = random_halin(3, 10, 4).unwrap();
        let mut seq = EnumSink::counting();
        let seq_report = enumerate_distinct(&h, &mut seq).unwrap();
        let sink = ConcurrentSink::new(EnumSink::counting());
        let mut cfg = ParallelConfig::new(4, EnumConfig::distinct());
        cfg.depth_limit = Some(2);
        let (report, preport) = run_parallel(&h, &cfg, &sink).unwrap();
        assert_eq!(report.total_emitted, seq_report.total_emitted);
        assert_eq!(preport.tasks_spawned, seq_report.expansions);
    }

    #[test]
    fn overflow_propagates_and_aborts() {
        let h = random_halin(2, 10, 4).unwrap();
        let sink = ConcurrentSink::new(EnumSink::store().with_cap(10));
        let cfg = ParallelConfig::new(4, EnumConfig::distinct());
        let err = run_parallel(&h, &cfg, &sink).unwrap_err();
        assert!(matches!(err, EnumError::SinkOverflow { .. }));
        assert!(sink.aborted());
        // Partial results stay readable.
        assert!(sink.with_inner(|s| s.total()) >= 10);
    }

    #[test]
    fn worker_panic_is_caught_with_partial_results() {
        let h = random_halin(6, 10, 4).unwrap();
        // A writer that blows up partway through the stream.
        let mut emitted = 0u32;
        let writer = move |_t: &crate::enumerate::EmittedTree| {
            emitted += 1;
            if emitted == 20 {
                panic!("injected writer failure");
            }
            Ok(())
        };
        let sink = ConcurrentSink::new(EnumSink::streaming(Box::new(writer)));
        let cfg = ParallelConfig::new(4, EnumConfig::distinct());
        let err = run_parallel(&h, &cfg, &sink).unwrap_err();
        assert!(matches!(err, EnumError::WorkerPanic));
        // Partial counters survive the poisoned lock.
        assert!(sink.with_inner(|s| s.total()) >= 20);
    }

    #[test]
    fn zero_workers_rejected() {
        let h = k4();
        let sink = ConcurrentSink::new(EnumSink::counting());
        let cfg = ParallelConfig::new(0, EnumConfig::distinct());
        assert!(matches!(
            run_parallel(&h, &cfg, &sink),
            Err(EnumError::Config(_))
        ));
    }

    #[test]
    fn speedup_rows_are_definitional_at_one_worker() {
        let h = random_halin(8, 12, 4).unwrap();
        let rows = speedup_report(&h, &EnumConfig::distinct(), &[1, 2]).unwrap();
        assert_eq!(rows[0].workers, 1);
        assert_eq!(rows[0].speedup, 1.0);
        assert_eq!(rows[0].efficiency, 1.0);
        assert!(rows[1].efficiency > 0.0);
    }
}
