//! The enumeration engines.
//!
//! Starting from the characteristic tree, accompanying-cycle edges are added
//! one at a time in σ order; each addition closes a cycle, and removing any
//! removable tree edge of that cycle yields another spanning tree, which is
//! emitted and expanded recursively with the remaining σ suffix.
//!
//! In naive mode every tree edge of the cycle is removable, so the same
//! spanning tree can be reached along several deletion orders. In distinct
//! mode each deletion colors part of the cycle blue in its branch, and blue
//! edges are never removed again; this leaves exactly one deletion order per
//! spanning tree, so nothing is emitted twice.
//!
//! Note on the removable-edge split: the partition puts the tree edges of
//! the junction-to-`v_{i+1}` walk on the right and the rest of the cycle's
//! tree edges on the left, with colored edges blocked on either side. When
//! the recursion reaches the wrap-around cycle edge, an earlier branch may
//! already have colored part of the right walk; those edges count as
//! blocked, not as right-side candidates, which keeps the two sides a true
//! partition of the removable edges.

use std::collections::{BTreeMap, HashMap};
use std::io;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{is_spanning_tree, CanonicalTreeKey, Edge, EdgeSet, VertexId};
use crate::halin::HalinGraph;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Repetitions allowed.
    Naive,
    /// Blue-edge coloring suppresses every repeat.
    Distinct,
}

/// Engine configuration shared by the sequential and parallel drivers.
#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub mode: Mode,
    /// Rotation of σ: enumeration starts from this cycle-edge index.
    /// Emission sets are unaffected; per-level traces shift.
    pub sigma_start: usize,
    /// Distinct-mode coloring switch. Leave on; turning it off reintroduces
    /// duplicates and exists to prove the duplicate detectors notice.
    pub coloring: bool,
}

impl EnumConfig {
    pub fn naive() -> EnumConfig {
        EnumConfig {
            mode: Mode::Naive,
            sigma_start: 0,
            coloring: false,
        }
    }

    pub fn distinct() -> EnumConfig {
        EnumConfig {
            mode: Mode::Distinct,
            sigma_start: 0,
            coloring: true,
        }
    }

    pub fn with_sigma_start(mut self, start: usize) -> EnumConfig {
        self.sigma_start = start;
        self
    }

    /// Negative-control build: distinct mode with coloring off.
    pub fn distinct_uncolored() -> EnumConfig {
        EnumConfig {
            mode: Mode::Distinct,
            sigma_start: 0,
            coloring: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("sink overflow: {count} retained items hit the cap of {cap}")]
    SinkOverflow { count: usize, cap: usize },
    #[error("cycle edge {edge} is already in the partial tree")]
    CycleEdgePresent { edge: Edge },
    #[error("{edge} is not an accompanying-cycle edge")]
    NotACycleEdge { edge: Edge },
    #[error("{edge} is not a removable tree edge of the fundamental cycle")]
    NotRemovable { edge: Edge },
    #[error("colored edge {edge} surfaced as a removable right-side candidate")]
    ColoredRightEdge { edge: Edge },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("worker panicked during parallel enumeration; results are partial")]
    WorkerPanic,
    #[error("emission stream failed: {0}")]
    Io(#[from] io::Error),
}

/// Compact bit set sized once; cheap to clone per branch.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn empty(bits: usize) -> BitSet {
        BitSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub(crate) fn full(bits: usize) -> BitSet {
        let mut s = BitSet::empty(bits);
        for i in 0..bits {
            s.set(i);
        }
        s
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub(crate) fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter_map(move |b| {
                if bits >> b & 1 == 1 {
                    Some(w * 64 + b)
                } else {
                    None
                }
            })
        })
    }
}

/// A spanning tree of `H` mid-enumeration: retained characteristic-tree
/// edges, the cycle edges added so far, and the branch-local blue set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialTree {
    kept: BitSet,
    added: Vec<u16>,
    colored: BitSet,
}

impl PartialTree {
    /// The characteristic tree itself: all tree edges kept, nothing added,
    /// nothing colored.
    pub fn base(h: &HalinGraph) -> PartialTree {
        let t = h.tree_edge_count();
        PartialTree {
            kept: BitSet::full(t),
            added: Vec::new(),
            colored: BitSet::empty(t),
        }
    }

    /// Number of accompanying-cycle edges in the tree, i.e. its level in the
    /// computational tree.
    pub fn level(&self) -> usize {
        self.added.len()
    }

    pub fn added_cycle_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.added.iter().map(|&i| i as usize)
    }

    pub fn kept_tree_edges(&self, h: &HalinGraph) -> EdgeSet {
        self.kept.ones().map(|t| h.tree_edge(t)).collect()
    }

    pub fn colored_edges(&self, h: &HalinGraph) -> EdgeSet {
        self.colored.ones().map(|t| h.tree_edge(t)).collect()
    }

    /// All edges of the spanning tree, ascending.
    pub fn edge_list(&self, h: &HalinGraph) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .kept
            .ones()
            .map(|t| h.tree_edge(t))
            .chain(self.added.iter().map(|&i| h.cycle_edge(i as usize)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn edge_set(&self, h: &HalinGraph) -> EdgeSet {
        self.edge_list(h).into_iter().collect()
    }

    /// Exchange step: add cycle edge `e` and remove tree edge `removed`.
    /// Coloring is the caller's business; this only moves edges.
    pub fn swap_in(
        &self,
        h: &HalinGraph,
        e: Edge,
        removed: Edge,
    ) -> Result<PartialTree, EnumError> {
        let ci = h
            .cycle_edge_index(e)
            .ok_or(EnumError::NotACycleEdge { edge: e })?;
        if self.added.iter().any(|&a| a as usize == ci) {
            return Err(EnumError::CycleEdgePresent { edge: e });
        }
        let tid = h
            .tree_edge_index(removed)
            .filter(|&t| self.kept.contains(t))
            .ok_or(EnumError::NotRemovable { edge: removed })?;
        let mut next = self.clone();
        next.kept.clear(tid);
        next.added.push(ci as u16);
        Ok(next)
    }

    /// Colors a retained tree edge blue.
    pub fn color(&mut self, h: &HalinGraph, e: Edge) -> Result<(), EnumError> {
        let tid = h
            .tree_edge_index(e)
            .filter(|&t| self.kept.contains(t))
            .ok_or(EnumError::NotRemovable { edge: e })?;
        self.colored.set(tid);
        Ok(())
    }
}

/// An edge of the current spanning tree, remembered by what it is in `H`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum EdgeRef {
    Tree(u32),
    Cycle(u16),
}

/// Paths of the fundamental cycle closed by one cycle edge: the junction is
/// the deepest common vertex of the root paths to the edge's endpoints, the
/// left walk runs junction -> v_i, the right walk junction -> v_{i+1}.
struct Geometry {
    junction: VertexId,
    left: Vec<EdgeRef>,
    right: Vec<EdgeRef>,
}

fn geometry(h: &HalinGraph, t: &PartialTree, cycle_idx: usize) -> Geometry {
    let n = h.n();
    let mut adj: Vec<Vec<(VertexId, EdgeRef)>> = vec![Vec::new(); n];
    for tid in t.kept.ones() {
        let e = h.tree_edge(tid);
        let (a, b) = e.endpoints();
        adj[a.index()].push((b, EdgeRef::Tree(tid as u32)));
        adj[b.index()].push((a, EdgeRef::Tree(tid as u32)));
    }
    for &ci in &t.added {
        let e = h.cycle_edge(ci as usize);
        let (a, b) = e.endpoints();
        adj[a.index()].push((b, EdgeRef::Cycle(ci)));
        adj[b.index()].push((a, EdgeRef::Cycle(ci)));
    }

    let root = h.root();
    let mut parent: Vec<Option<(VertexId, EdgeRef)>> = vec![None; n];
    let mut visited = vec![false; n];
    visited[root.index()] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(w, er) in &adj[v.index()] {
            if !visited[w.index()] {
                visited[w.index()] = true;
                parent[w.index()] = Some((v, er));
                queue.push_back(w);
            }
        }
    }
    debug_assert!(visited.iter().all(|&v| v), "partial tree must span H");

    let (vi, vnext) = h.cycle().oriented(cycle_idx);
    let path_i = root_path(&parent, root, vi);
    let path_next = root_path(&parent, root, vnext);

    // Longest common prefix of the two root paths ends at the junction.
    let mut common = 0;
    while common + 1 < path_i.verts.len()
        && common + 1 < path_next.verts.len()
        && path_i.verts[common + 1] == path_next.verts[common + 1]
    {
        common += 1;
    }
    let junction = path_i.verts[common];

    // Left side ordered v_i -> junction, right side junction -> v_{i+1}.
    let mut left: Vec<EdgeRef> = path_i.edges[common..].to_vec();
    left.reverse();
    let right: Vec<EdgeRef> = path_next.edges[common..].to_vec();

    Geometry {
        junction,
        left,
        right,
    }
}

struct RootPath {
    verts: Vec<VertexId>,
    edges: Vec<EdgeRef>,
}

fn root_path(parent: &[Option<(VertexId, EdgeRef)>], root: VertexId, x: VertexId) -> RootPath {
    let mut verts = vec![x];
    let mut edges = Vec::new();
    let mut cur = x;
    while cur != root {
        let (up, er) = parent[cur.index()].expect("walk reaches the root");
        verts.push(up);
        edges.push(er);
        cur = up;
    }
    verts.reverse();
    edges.reverse();
    RootPath { verts, edges }
}

/// Removable-edge split of the fundamental cycle created by adding `e` to
/// the partial tree: `right` holds the uncolored tree edges on the walk from
/// the junction to `v_{i+1}`, `left` the remaining uncolored tree edges of
/// the cycle, `blocked` every colored edge the cycle contains.
#[derive(Clone, Debug)]
pub struct CyclePartition {
    pub junction: VertexId,
    /// Ordered from `v_i` toward the junction.
    pub left: Vec<Edge>,
    /// Ordered from the junction toward `v_{i+1}`.
    pub right: Vec<Edge>,
    pub blocked: EdgeSet,
}

pub fn partition_cycle(
    h: &HalinGraph,
    t: &PartialTree,
    e: Edge,
) -> Result<CyclePartition, EnumError> {
    let ci = h
        .cycle_edge_index(e)
        .ok_or(EnumError::NotACycleEdge { edge: e })?;
    if t.added.iter().any(|&a| a as usize == ci) {
        return Err(EnumError::CycleEdgePresent { edge: e });
    }
    let geom = geometry(h, t, ci);
    let mut blocked = EdgeSet::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for er in geom.left.iter() {
        if let EdgeRef::Tree(tid) = er {
            let edge = h.tree_edge(*tid as usize);
            if t.colored.contains(*tid as usize) {
                blocked.insert(edge);
            } else {
                left.push(edge);
            }
        }
    }
    for er in geom.right.iter() {
        if let EdgeRef::Tree(tid) = er {
            let edge = h.tree_edge(*tid as usize);
            if t.colored.contains(*tid as usize) {
                blocked.insert(edge);
            } else {
                right.push(edge);
            }
        }
    }
    // Internal consistency: the two sides are disjoint and no blocked edge
    // leaked into the removable right side.
    for e in &right {
        if blocked.contains(*e) {
            return Err(EnumError::ColoredRightEdge { edge: *e });
        }
        if left.contains(e) {
            return Err(EnumError::ColoredRightEdge { edge: *e });
        }
    }
    Ok(CyclePartition {
        junction: geom.junction,
        left,
        right,
        blocked,
    })
}

/// One emitted spanning tree.
#[derive(Clone, Debug)]
pub struct EmittedTree {
    pub level: usize,
    pub edges: Vec<Edge>,
    pub key: CanonicalTreeKey,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SinkMode {
    Store,
    Stream,
    CountOnly,
}

pub const DEFAULT_STORE_CAP: usize = 10_000_000;

/// Destination for streamed emissions. Implementations buffering their
/// output should override `flush`; the engines flush once a run completes.
pub trait EmissionWriter: Send {
    fn write(&mut self, tree: &EmittedTree) -> io::Result<()>;

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl<F: FnMut(&EmittedTree) -> io::Result<()> + Send> EmissionWriter for F {
    fn write(&mut self, tree: &EmittedTree) -> io::Result<()> {
        self(tree)
    }
}

/// Receives emissions: keeps per-level counters and delay statistics, and
/// depending on the mode stores trees, streams them out, or only counts.
pub struct EnumSink {
    mode: SinkMode,
    cap: usize,
    stored: Vec<EmittedTree>,
    per_level: Vec<u64>,
    track_keys: bool,
    keys: HashMap<CanonicalTreeKey, u64>,
    writer: Option<Box<dyn EmissionWriter>>,
    total: u64,
    last_emit: Option<Instant>,
    max_delay: Duration,
    delay_sum: Duration,
    delay_count: u64,
}

impl EnumSink {
    fn new(mode: SinkMode, track_keys: bool) -> EnumSink {
        EnumSink {
            mode,
            cap: DEFAULT_STORE_CAP,
            stored: Vec::new(),
            per_level: Vec::new(),
            track_keys,
            keys: HashMap::new(),
            writer: None,
            total: 0,
            last_emit: None,
            max_delay: Duration::ZERO,
            delay_sum: Duration::ZERO,
            delay_count: 0,
        }
    }

    /// Stores every emission (dedup keys tracked too).
    pub fn store() -> EnumSink {
        EnumSink::new(SinkMode::Store, true)
    }

    /// Counters only; cheapest for big runs.
    pub fn counting() -> EnumSink {
        EnumSink::new(SinkMode::CountOnly, false)
    }

    /// Counters plus the canonical-key multiset.
    pub fn counting_with_keys() -> EnumSink {
        EnumSink::new(SinkMode::CountOnly, true)
    }

    /// Forwards every emission to `writer` as it is produced.
    pub fn streaming(writer: Box<dyn EmissionWriter>) -> EnumSink {
        let mut s = EnumSink::new(SinkMode::Stream, true);
        s.writer = Some(writer);
        s
    }

    pub fn with_cap(mut self, cap: usize) -> EnumSink {
        self.cap = cap;
        self
    }

    pub fn with_key_tracking(mut self, on: bool) -> EnumSink {
        self.track_keys = on;
        self
    }

    pub fn mode(&self) -> SinkMode {
        self.mode
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn stored(&self) -> &[EmittedTree] {
        &self.stored
    }

    pub fn key_multiset(&self) -> Option<&HashMap<CanonicalTreeKey, u64>> {
        if self.track_keys {
            Some(&self.keys)
        } else {
            None
        }
    }

    /// Drains any buffering the stream writer does.
    pub fn flush(&mut self) -> io::Result<()> {
        match self.writer.as_mut() {
            Some(w) => w.flush(),
            None => Ok(()),
        }
    }

    pub fn emit(&mut self, tree: EmittedTree) -> Result<(), EnumError> {
        let now = Instant::now();
        if let Some(last) = self.last_emit {
            let gap = now - last;
            if gap > self.max_delay {
                self.max_delay = gap;
            }
            self.delay_sum += gap;
            self.delay_count += 1;
        }
        self.last_emit = Some(now);

        if self.per_level.len() <= tree.level {
            self.per_level.resize(tree.level + 1, 0);
        }
        self.per_level[tree.level] += 1;
        self.total += 1;

        if self.track_keys {
            if self.keys.len() >= self.cap && !self.keys.contains_key(&tree.key) {
                return Err(EnumError::SinkOverflow {
                    count: self.keys.len(),
                    cap: self.cap,
                });
            }
            *self.keys.entry(tree.key.clone()).or_insert(0) += 1;
        }
        match self.mode {
            SinkMode::Store => {
                if self.stored.len() >= self.cap {
                    return Err(EnumError::SinkOverflow {
                        count: self.stored.len(),
                        cap: self.cap,
                    });
                }
                self.stored.push(tree);
            }
            SinkMode::Stream => {
                if let Some(w) = self.writer.as_mut() {
                    w.write(&tree)?;
                }
            }
            SinkMode::CountOnly => {}
        }
        Ok(())
    }

    /// Snapshot of the run so far. `levels` pads the per-level table out to
    /// the last structurally possible level.
    pub fn report(&self, levels: usize, expansions: u64) -> EnumReport {
        let mut per_level: Vec<(usize, u64)> = Vec::with_capacity(levels + 1);
        for l in 0..=levels {
            per_level.push((l, self.per_level.get(l).copied().unwrap_or(0)));
        }
        let distinct_count = self.track_keys.then_some(self.keys.len() as u64);
        let mut duplicate_multiplicities = BTreeMap::new();
        if self.track_keys {
            for &mult in self.keys.values() {
                *duplicate_multiplicities.entry(mult).or_insert(0) += 1;
            }
        }
        EnumReport {
            total_emitted: self.total,
            distinct_count,
            per_level,
            max_delay: self.max_delay,
            mean_delay: if self.delay_count > 0 {
                self.delay_sum / self.delay_count as u32
            } else {
                Duration::ZERO
            },
            duplicate_multiplicities,
            expansions,
        }
    }
}

mod duration_micros {
    use super::Duration;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_micros().min(u128::from(u64::MAX)) as u64)
    }
}

/// Final accounting of one enumeration run.
#[derive(Clone, Debug, Serialize)]
pub struct EnumReport {
    pub total_emitted: u64,
    /// Number of distinct canonical keys, when the sink tracked them.
    pub distinct_count: Option<u64>,
    /// `(level, emitted)` for levels `0..=p`; level `p` is structurally 0.
    pub per_level: Vec<(usize, u64)>,
    #[serde(with = "duration_micros", rename = "max_delay_us")]
    pub max_delay: Duration,
    #[serde(with = "duration_micros", rename = "mean_delay_us")]
    pub mean_delay: Duration,
    /// multiplicity -> number of keys emitted that many times.
    pub duplicate_multiplicities: BTreeMap<u64, u64>,
    /// `(tree, cycle-edge)` expansions performed.
    pub expansions: u64,
}

impl EnumReport {
    /// Keys emitted more than once, with their multiplicities.
    pub fn duplicate_count(&self) -> u64 {
        self.duplicate_multiplicities
            .iter()
            .filter(|(&mult, _)| mult > 1)
            .map(|(_, &keys)| keys)
            .sum()
    }
}

/// Emitted counts grouped by level; level 0 is always the characteristic
/// tree alone.
pub fn collect_levels(report: &EnumReport) -> Vec<(usize, u64)> {
    report.per_level.clone()
}

pub(crate) fn materialize(h: &HalinGraph, t: &PartialTree) -> EmittedTree {
    let edges = t.edge_list(h);
    debug_assert!(is_spanning_tree(&edges.iter().copied().collect(), h.n()));
    let key = CanonicalTreeKey::from_sorted_edges(&edges);
    EmittedTree {
        level: t.level(),
        edges,
        key,
    }
}

/// A removable edge with enough context to apply the coloring rule.
pub(crate) struct Candidate {
    pub(crate) tree_id: usize,
    /// Position on the left walk (ordered v_i -> junction) or on the right
    /// walk (ordered junction -> v_{i+1}).
    pub(crate) side: Side,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Side {
    Left(usize),
    Right(usize),
}

pub(crate) struct Expansion {
    pub(crate) candidates: Vec<Candidate>,
    left: Vec<EdgeRef>,
    right: Vec<EdgeRef>,
}

/// Shared expansion step: compute the fundamental-cycle geometry for adding
/// cycle edge `cycle_idx` and list the removable candidates in σ* order
/// (left side from `v_i` to the junction, then right side on to `v_{i+1}`).
pub(crate) fn expansion(
    h: &HalinGraph,
    t: &PartialTree,
    cycle_idx: usize,
    cfg: &EnumConfig,
) -> Expansion {
    let geom = geometry(h, t, cycle_idx);
    let use_colors = cfg.mode == Mode::Distinct;
    let mut candidates = Vec::new();
    for (pos, er) in geom.left.iter().enumerate() {
        if let EdgeRef::Tree(tid) = er {
            let tid = *tid as usize;
            if !use_colors || !t.colored.contains(tid) {
                candidates.push(Candidate {
                    tree_id: tid,
                    side: Side::Left(pos),
                });
            }
        }
    }
    for (pos, er) in geom.right.iter().enumerate() {
        if let EdgeRef::Tree(tid) = er {
            let tid = *tid as usize;
            if !use_colors || !t.colored.contains(tid) {
                candidates.push(Candidate {
                    tree_id: tid,
                    side: Side::Right(pos),
                });
            }
        }
    }
    Expansion {
        candidates,
        left: geom.left,
        right: geom.right,
    }
}

/// Builds the child tree for one deletion choice and colors everything that
/// comes after the deleted edge in σ* order blue: a right-side deletion at
/// position `q` colors the rest of the right walk toward `v_{i+1}`, and a
/// left-side deletion colors both the rest of the left walk toward the
/// junction and the whole right walk.
///
/// Coloring the left remainder matters: with right-walk coloring alone, a
/// pair of left-side deletions stays unordered, and once earlier exchanges
/// have rewired the tree a later cycle can still reach the other left edge,
/// so the same spanning tree comes out of both orders. The suffix rule
/// leaves each pair exactly one legal order, and collapses to right-walk
/// coloring whenever the left side holds at most one candidate (as in
/// every wheel graph).
pub(crate) fn make_child(
    t: &PartialTree,
    exp: &Expansion,
    cand: &Candidate,
    cycle_idx: usize,
    cfg: &EnumConfig,
) -> PartialTree {
    let mut child = t.clone();
    child.kept.clear(cand.tree_id);
    child.added.push(cycle_idx as u16);
    if cfg.mode == Mode::Distinct && cfg.coloring {
        let mut color_ref = |er: &EdgeRef| {
            if let EdgeRef::Tree(tid) = er {
                if child.kept.contains(*tid as usize) {
                    child.colored.set(*tid as usize);
                }
            }
        };
        match cand.side {
            Side::Left(q) => {
                for er in &exp.left[q + 1..] {
                    color_ref(er);
                }
                for er in &exp.right {
                    color_ref(er);
                }
            }
            Side::Right(q) => {
                for er in &exp.right[q + 1..] {
                    color_ref(er);
                }
            }
        }
    }
    debug_assert!(
        child.colored.ones().all(|tid| child.kept.contains(tid)),
        "blue edges must stay in the tree"
    );
    child
}

struct Engine<'a> {
    h: &'a HalinGraph,
    cfg: &'a EnumConfig,
    expansions: u64,
}

impl<'a> Engine<'a> {
    fn expand(
        &mut self,
        t: &PartialTree,
        rot: usize,
        sink: &mut EnumSink,
    ) -> Result<(), EnumError> {
        self.expansions += 1;
        let p = self.h.p();
        let cycle_idx = (self.cfg.sigma_start + rot) % p;
        let exp = expansion(self.h, t, cycle_idx, self.cfg);
        for cand in &exp.candidates {
            let child = make_child(t, &exp, cand, cycle_idx, self.cfg);
            sink.emit(materialize(self.h, &child))?;
            for next in rot + 1..p {
                self.expand(&child, next, sink)?;
            }
        }
        Ok(())
    }
}

/// Runs one engine over `h`, emitting into `sink`, and returns the report.
pub fn enumerate_with(
    h: &HalinGraph,
    cfg: &EnumConfig,
    sink: &mut EnumSink,
) -> Result<EnumReport, EnumError> {
    let p = h.p();
    if cfg.sigma_start >= p {
        return Err(EnumError::Config(format!(
            "sigma_start {} out of range for p = {}",
            cfg.sigma_start, p
        )));
    }
    let mut engine = Engine {
        h,
        cfg,
        expansions: 0,
    };
    let base = PartialTree::base(h);
    sink.emit(materialize(h, &base))?;
    for rot in 0..p {
        engine.expand(&base, rot, sink)?;
    }
    sink.flush()?;
    Ok(sink.report(p, engine.expansions))
}

/// Naive engine: every spanning tree at least once, repeats possible.
pub fn enumerate_naive(h: &HalinGraph, sink: &mut EnumSink) -> Result<EnumReport, EnumError> {
    enumerate_with(h, &EnumConfig::naive(), sink)
}

/// Distinct engine: every spanning tree exactly once.
pub fn enumerate_distinct(h: &HalinGraph, sink: &mut EnumSink) -> Result<EnumReport, EnumError> {
    enumerate_with(h, &EnumConfig::distinct(), sink)
}
