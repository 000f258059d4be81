//! Spanning-tree enumeration for Halin graphs.
//!
//! A Halin graph is built from a tree with no degree-two vertices by joining
//! its leaves in a cycle. This crate enumerates all spanning trees of such
//! graphs in two modes:
//!
//! * **naive** — recursive cycle-edge insertion / tree-edge deletion, which
//!   may emit the same spanning tree more than once;
//! * **distinct** — the same recursion guarded by a blue-edge coloring rule
//!   that makes every spanning tree come out exactly once.
//!
//! Both engines run sequentially or on a fork-join worker pool, and both are
//! checked against independent oracles: exact counting via the matrix-tree
//! theorem (fraction-free integer elimination) and brute-force enumeration
//! on small instances.

pub mod check;
pub mod enumerate;
pub mod format;
pub mod graph;
pub mod halin;
pub mod oracle;
pub mod parallel;

pub use check::{run_check, CheckOutcome, Clause};
pub use enumerate::{
    collect_levels, enumerate_distinct, enumerate_naive, enumerate_with, partition_cycle,
    CyclePartition, EmissionWriter, EmittedTree, EnumConfig, EnumError, EnumReport, EnumSink, Mode,
    PartialTree, SinkMode,
};
pub use graph::{
    canonical_key, fundamental_cycle, is_spanning_tree, tree_path, CanonicalTreeKey, Edge, EdgeSet,
    GraphError, VertexId,
};
pub use halin::{
    build_halin, depth, random_halin, AccompanyingCycle, CharacteristicTree, HalinError,
    HalinGraph, TreeSpec,
};
pub use oracle::{
    brute_force_trees, check_depth_bound, compute_bounds, kirchhoff_count, BoundSet, ExactCount,
    KirchhoffCount, OracleError,
};
pub use parallel::{
    run_parallel, speedup_report, ConcurrentSink, ParallelConfig, ParallelReport, SpeedupRow,
};
