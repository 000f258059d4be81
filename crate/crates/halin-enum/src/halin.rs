//! Halin graph model: a rooted characteristic tree with no degree-two
//! vertices plus the accompanying cycle through its leaves, in the planar
//! order induced by the children lists.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Edge, EdgeSet, VertexId};

/// Rooted tree underlying a Halin graph. Children lists are ordered; the
/// left-to-right leaf traversal defines the plane embedding.
#[derive(Clone, Debug)]
pub struct CharacteristicTree {
    root: VertexId,
    children: Vec<Vec<VertexId>>,
    parent: Vec<Option<VertexId>>,
    depth_of: Vec<usize>,
    depth: usize,
}

impl CharacteristicTree {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v.index()]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.index()]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v.index()].is_empty()
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn depth_of(&self, v: VertexId) -> usize {
        self.depth_of[v.index()]
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    /// Leaves in left-to-right traversal order.
    pub fn traversal_leaves(&self) -> Vec<VertexId> {
        let mut leaves = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if self.is_leaf(v) {
                leaves.push(v);
            } else {
                for &c in self.children[v.index()].iter().rev() {
                    stack.push(c);
                }
            }
        }
        leaves
    }
}

/// The cycle through all leaves: `e_i` joins consecutive leaves of
/// `leaf_order`, with the last edge closing back to the first leaf.
#[derive(Clone, Debug)]
pub struct AccompanyingCycle {
    leaf_order: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl AccompanyingCycle {
    fn new(leaf_order: Vec<VertexId>) -> AccompanyingCycle {
        let p = leaf_order.len();
        let edges = (0..p)
            .map(|i| Edge::new(leaf_order[i], leaf_order[(i + 1) % p]))
            .collect();
        AccompanyingCycle { leaf_order, edges }
    }

    pub fn p(&self) -> usize {
        self.leaf_order.len()
    }

    pub fn leaf_order(&self) -> &[VertexId] {
        &self.leaf_order
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    /// Endpoints of cycle edge `i` oriented along the cycle: `(v_i, v_{i+1})`
    /// with the index wrapping around.
    pub fn oriented(&self, i: usize) -> (VertexId, VertexId) {
        let p = self.leaf_order.len();
        (self.leaf_order[i], self.leaf_order[(i + 1) % p])
    }
}

/// Validated Halin graph `H = T ∪ C`.
#[derive(Clone, Debug)]
pub struct HalinGraph {
    tree: CharacteristicTree,
    cycle: AccompanyingCycle,
    labels: Vec<String>,
    leaf_pos: Vec<Option<usize>>,
    /// Non-root vertices in id order; tree edge `t` joins `tree_edge_child[t]`
    /// to its parent.
    tree_edge_child: Vec<VertexId>,
    tree_edge_of: Vec<Option<usize>>,
}

impl HalinGraph {
    pub fn n(&self) -> usize {
        self.tree.vertex_count()
    }

    pub fn p(&self) -> usize {
        self.cycle.p()
    }

    pub fn d(&self) -> usize {
        self.tree.depth()
    }

    pub fn root(&self) -> VertexId {
        self.tree.root()
    }

    pub fn tree(&self) -> &CharacteristicTree {
        &self.tree
    }

    pub fn cycle(&self) -> &AccompanyingCycle {
        &self.cycle
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| VertexId(i as u32))
    }

    /// Position of a leaf in the cycle order, if `v` is a leaf.
    pub fn leaf_position(&self, v: VertexId) -> Option<usize> {
        self.leaf_pos[v.index()]
    }

    pub fn tree_edge_count(&self) -> usize {
        self.n() - 1
    }

    /// Tree edge `t` as a normalized edge.
    pub fn tree_edge(&self, t: usize) -> Edge {
        let child = self.tree_edge_child[t];
        Edge::new(child, self.tree.parent(child).unwrap())
    }

    /// The id of the tree edge between `child` and its parent.
    pub fn tree_edge_id(&self, child: VertexId) -> Option<usize> {
        self.tree_edge_of[child.index()]
    }

    /// Looks an arbitrary edge up among the tree edges.
    pub fn tree_edge_index(&self, e: Edge) -> Option<usize> {
        let (a, b) = e.endpoints();
        for (child, parent_side) in [(a, b), (b, a)] {
            if self.tree.parent(child) == Some(parent_side) {
                return self.tree_edge_of[child.index()];
            }
        }
        None
    }

    pub fn cycle_edge(&self, i: usize) -> Edge {
        self.cycle.edge(i)
    }

    pub fn cycle_edge_index(&self, e: Edge) -> Option<usize> {
        self.cycle.edges().iter().position(|&c| c == e)
    }

    pub fn edge_count(&self) -> usize {
        self.n() - 1 + self.p()
    }

    /// Edge set of the characteristic tree.
    pub fn base_edges(&self) -> EdgeSet {
        (0..self.tree_edge_count())
            .map(|t| self.tree_edge(t))
            .collect()
    }

    /// Edge set of the whole graph, tree and cycle together.
    pub fn all_edges(&self) -> EdgeSet {
        let mut s = self.base_edges();
        s.extend(self.cycle.edges().iter().copied());
        s
    }

    /// The wheel-shaped Halin graph: a root joined to `p` leaves. `wheel(3)`
    /// is K4, the smallest Halin graph.
    pub fn wheel(p: usize) -> Result<HalinGraph, HalinError> {
        let labels: Vec<String> = (0..=p).map(|i| i.to_string()).collect();
        let mut children = vec![Vec::new(); p + 1];
        children[0] = (1..=p as u32).map(VertexId).collect();
        build_halin(TreeSpec {
            labels,
            root: VertexId(0),
            children,
            explicit_leaf_order: None,
        })
    }
}

/// Raw tree description handed to [`build_halin`].
#[derive(Clone, Debug)]
pub struct TreeSpec {
    /// One label per vertex; index doubles as the vertex id.
    pub labels: Vec<String>,
    pub root: VertexId,
    /// Ordered children lists, indexed by vertex id.
    pub children: Vec<Vec<VertexId>>,
    /// Leaf order overriding the left-to-right traversal; must be a rotation
    /// or reflection of it.
    pub explicit_leaf_order: Option<Vec<VertexId>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HalinError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex {vertex} has degree two")]
    DegreeTwoVertex { vertex: String },
    #[error("root has {children} children; an internal root needs at least 3")]
    RootNotInternal { children: usize },
    #[error("characteristic tree has {found} leaves; a Halin graph needs at least 3")]
    TooFewLeaves { found: usize },
    #[error("leaf order mismatch: {0}")]
    LeafOrderMismatch(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

/// Validates a tree spec and closes the leaf cycle.
pub fn build_halin(spec: TreeSpec) -> Result<HalinGraph, HalinError> {
    let n = spec.labels.len();
    if spec.children.len() != n {
        return Err(HalinError::NotATree(format!(
            "{} children lists for {} labels",
            spec.children.len(),
            n
        )));
    }
    if spec.root.index() >= n {
        return Err(HalinError::NotATree("root id out of range".into()));
    }

    // Exactly one parent per non-root vertex, all ids in range.
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    for (pi, kids) in spec.children.iter().enumerate() {
        for &c in kids {
            if c.index() >= n {
                return Err(HalinError::NotATree(format!("child id {c} out of range")));
            }
            if c == spec.root {
                return Err(HalinError::NotATree("root listed as a child".into()));
            }
            if parent[c.index()].is_some() {
                return Err(HalinError::NotATree(format!(
                    "vertex {} has two parents",
                    spec.labels[c.index()]
                )));
            }
            parent[c.index()] = Some(VertexId(pi as u32));
        }
    }

    // Reachability from the root; together with single parents this makes
    // the children relation a tree.
    let mut depth_of = vec![usize::MAX; n];
    depth_of[spec.root.index()] = 0;
    let mut queue = VecDeque::from([spec.root]);
    let mut seen = 1usize;
    while let Some(v) = queue.pop_front() {
        for &c in &spec.children[v.index()] {
            if depth_of[c.index()] != usize::MAX {
                return Err(HalinError::NotATree("cycle in children lists".into()));
            }
            depth_of[c.index()] = depth_of[v.index()] + 1;
            seen += 1;
            queue.push_back(c);
        }
    }
    if seen != n {
        return Err(HalinError::NotATree(format!(
            "{} of {} vertices reachable from the root",
            seen, n
        )));
    }

    // Degree constraints: internal root needs >= 3 children, every other
    // internal vertex >= 2 (degree 2 would otherwise appear).
    let root_kids = spec.children[spec.root.index()].len();
    if root_kids == 2 {
        return Err(HalinError::DegreeTwoVertex {
            vertex: spec.labels[spec.root.index()].clone(),
        });
    }
    if root_kids < 2 {
        return Err(HalinError::RootNotInternal {
            children: root_kids,
        });
    }
    for v in 0..n {
        if VertexId(v as u32) != spec.root && spec.children[v].len() == 1 {
            return Err(HalinError::DegreeTwoVertex {
                vertex: spec.labels[v].clone(),
            });
        }
    }

    let depth = depth_of.iter().copied().max().unwrap();
    let tree = CharacteristicTree {
        root: spec.root,
        children: spec.children,
        parent,
        depth_of,
        depth,
    };

    let traversal = tree.traversal_leaves();
    if traversal.len() < 3 {
        return Err(HalinError::TooFewLeaves {
            found: traversal.len(),
        });
    }

    let leaf_order = match spec.explicit_leaf_order {
        None => traversal,
        Some(explicit) => {
            check_leaf_order(&traversal, &explicit, &spec.labels)?;
            explicit
        }
    };

    let mut leaf_pos = vec![None; n];
    for (i, &leaf) in leaf_order.iter().enumerate() {
        leaf_pos[leaf.index()] = Some(i);
    }

    let tree_edge_child: Vec<VertexId> = (0..n as u32)
        .map(VertexId)
        .filter(|&v| v != tree.root)
        .collect();
    let mut tree_edge_of = vec![None; n];
    for (t, &child) in tree_edge_child.iter().enumerate() {
        tree_edge_of[child.index()] = Some(t);
    }

    let cycle = AccompanyingCycle::new(leaf_order);
    Ok(HalinGraph {
        tree,
        cycle,
        labels: spec.labels,
        leaf_pos,
        tree_edge_child,
        tree_edge_of,
    })
}

/// Accepts `explicit` iff it is a rotation of the traversal order or of its
/// reversal, i.e. the same plane cycle read from a different starting point
/// or side.
fn check_leaf_order(
    traversal: &[VertexId],
    explicit: &[VertexId],
    labels: &[String],
) -> Result<(), HalinError> {
    let p = traversal.len();
    if explicit.len() != p {
        return Err(HalinError::LeafOrderMismatch(format!(
            "{} leaves listed, tree has {}",
            explicit.len(),
            p
        )));
    }
    let mut sorted_a: Vec<VertexId> = traversal.to_vec();
    let mut sorted_b: Vec<VertexId> = explicit.to_vec();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        sorted_b.dedup();
        if sorted_b.len() != p {
            return Err(HalinError::LeafOrderMismatch("repeated leaf".into()));
        }
        return Err(HalinError::LeafOrderMismatch(
            "listed vertices are not exactly the leaves".into(),
        ));
    }
    let is_rotation = |base: &[VertexId]| -> bool {
        (0..p).any(|r| (0..p).all(|i| base[(r + i) % p] == explicit[i]))
    };
    let reversed: Vec<VertexId> = traversal.iter().rev().copied().collect();
    if is_rotation(traversal) || is_rotation(&reversed) {
        Ok(())
    } else {
        Err(HalinError::LeafOrderMismatch(format!(
            "cycle order is not a rotation or reflection of the plane traversal (first leaf {})",
            labels[explicit[0].index()]
        )))
    }
}

/// Deterministic 64-bit generator (splitmix64 stepping).
#[derive(Clone)]
pub(crate) struct SplitMix64(pub(crate) u64);

impl SplitMix64 {
    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `[0, bound)`; `bound` must be nonzero.
    pub(crate) fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Inclusive range sample.
    pub(crate) fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

/// Grows a random characteristic tree top-down and closes the cycle.
///
/// Deterministic for a fixed seed. The final vertex count lands on
/// `target_n` or one below it, because every expansion adds at least two
/// vertices. Coverage of varied `(p, d)` shapes is the goal, not uniformity.
pub fn random_halin(
    seed: u64,
    target_n: usize,
    max_children: usize,
) -> Result<HalinGraph, HalinError> {
    if target_n < 4 {
        return Err(HalinError::InfeasibleParams(format!(
            "target_n = {target_n} is below the smallest Halin graph (4 vertices)"
        )));
    }
    if max_children < 3 {
        return Err(HalinError::InfeasibleParams(format!(
            "max_children = {max_children}; the root alone needs 3 children"
        )));
    }
    let mut rng = SplitMix64(seed);

    let mut children: Vec<Vec<VertexId>> = vec![Vec::new()];
    let root_kids = rng.range(3, max_children.min(target_n - 1));
    let mut open: Vec<VertexId> = Vec::new();
    for _ in 0..root_kids {
        let id = VertexId(children.len() as u32);
        children.push(Vec::new());
        children[0].push(id);
        open.push(id);
    }

    // Expand random current leaves while at least two more vertices fit.
    let mut n = 1 + root_kids;
    while n + 2 <= target_n {
        let slot = rng.below(open.len());
        let v = open.swap_remove(slot);
        let most = max_children.min(target_n - n);
        let kids = rng.range(2, most.max(2));
        for _ in 0..kids {
            let id = VertexId(children.len() as u32);
            children.push(Vec::new());
            children[v.index()].push(id);
            open.push(id);
        }
        n += kids;
    }

    let labels = (0..n).map(|i| i.to_string()).collect();
    build_halin(TreeSpec {
        labels,
        root: VertexId(0),
        children,
        explicit_leaf_order: None,
    })
}

/// Depth of the characteristic tree.
pub fn depth(h: &HalinGraph) -> usize {
    h.d()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_spanning_tree;
    use proptest::prelude::*;

    pub(crate) fn k4() -> HalinGraph {
        HalinGraph::wheel(3).unwrap()
    }

    /// Root 0 with children (a=1, v3=2); a has children (v1=3, v2=4).
    /// Six vertices, three leaves, depth two.
    fn depth_two() -> HalinGraph {
        build_halin(TreeSpec {
            labels: (0..6).map(|i| i.to_string()).collect(),
            root: VertexId(0),
            children: vec![
                vec![VertexId(1), VertexId(2), VertexId(5)],
                vec![VertexId(3), VertexId(4)],
                vec![],
                vec![],
                vec![],
                vec![],
            ],
            explicit_leaf_order: None,
        })
        .unwrap()
    }

    #[test]
    fn k4_parameters() {
        let h = k4();
        assert_eq!((h.n(), h.p(), h.d()), (4, 3, 1));
        assert_eq!(h.edge_count(), 6);
        assert_eq!(h.cycle.edges().len(), 3);
        assert!(is_spanning_tree(&h.base_edges(), 4));
    }

    #[test]
    fn degree_two_vertex_is_rejected() {
        // Root 0 -> a=1 -> leaf 2, root also has leaves 3, 4: "a" has one child.
        let err = build_halin(TreeSpec {
            labels: vec!["u".into(), "a".into(), "x".into(), "y".into(), "z".into()],
            root: VertexId(0),
            children: vec![
                vec![VertexId(1), VertexId(3), VertexId(4)],
                vec![VertexId(2)],
                vec![],
                vec![],
                vec![],
            ],
            explicit_leaf_order: None,
        })
        .unwrap_err();
        assert_eq!(err, HalinError::DegreeTwoVertex { vertex: "a".into() });
    }

    #[test]
    fn two_child_root_is_degree_two() {
        let err = build_halin(TreeSpec {
            labels: (0..3).map(|i| i.to_string()).collect(),
            root: VertexId(0),
            children: vec![vec![VertexId(1), VertexId(2)], vec![], vec![]],
            explicit_leaf_order: None,
        })
        .unwrap_err();
        assert!(matches!(err, HalinError::DegreeTwoVertex { .. }));
    }

    #[test]
    fn non_tree_children_lists_rejected() {
        // Vertex 3 hangs off both 1 and 2.
        let err = build_halin(TreeSpec {
            labels: (0..5).map(|i| i.to_string()).collect(),
            children: vec![
                vec![VertexId(1), VertexId(2), VertexId(4)],
                vec![VertexId(3)],
                vec![VertexId(3)],
                vec![],
                vec![],
            ],
            root: VertexId(0),
            explicit_leaf_order: None,
        })
        .unwrap_err();
        assert!(matches!(err, HalinError::NotATree(_)));

        // Vertex 4 is not reachable from the root.
        let err = build_halin(TreeSpec {
            labels: (0..5).map(|i| i.to_string()).collect(),
            children: vec![
                vec![VertexId(1), VertexId(2), VertexId(3)],
                vec![],
                vec![],
                vec![],
                vec![],
            ],
            root: VertexId(0),
            explicit_leaf_order: None,
        })
        .unwrap_err();
        assert!(matches!(err, HalinError::NotATree(_)));
    }

    #[test]
    fn dangling_root_rejected() {
        let err = build_halin(TreeSpec {
            labels: (0..5).map(|i| i.to_string()).collect(),
            children: vec![
                vec![VertexId(1)],
                vec![VertexId(2), VertexId(3), VertexId(4)],
                vec![],
                vec![],
                vec![],
            ],
            root: VertexId(0),
            explicit_leaf_order: None,
        })
        .unwrap_err();
        assert_eq!(err, HalinError::RootNotInternal { children: 1 });
    }

    #[test]
    fn undersized_wheels_rejected() {
        // A root with at least three children always leaves at least three
        // leaves, so the degree checks subsume the leaf-count check; the
        // small wheels fail on degree.
        assert!(matches!(
            HalinGraph::wheel(2),
            Err(HalinError::DegreeTwoVertex { .. })
        ));
        assert!(matches!(
            HalinGraph::wheel(1),
            Err(HalinError::RootNotInternal { .. })
        ));
    }

    #[test]
    fn depth_two_example() {
        let h = depth_two();
        assert_eq!((h.n(), h.p(), h.d()), (6, 4, 2));
        // d <= floor(n/2) - 1 holds with equality here.
        assert_eq!(h.d(), h.n() / 2 - 1);
    }

    #[test]
    fn leaf_order_rotation_and_reflection_accepted() {
        let base = depth_two();
        let t: Vec<VertexId> = base.cycle().leaf_order().to_vec();
        let p = t.len();
        for r in 0..p {
            let rotated: Vec<VertexId> = (0..p).map(|i| t[(r + i) % p]).collect();
            let mut spec = spec_of(&base);
            spec.explicit_leaf_order = Some(rotated);
            build_halin(spec).unwrap();

            let reflected: Vec<VertexId> = (0..p).map(|i| t[(r + p - i) % p]).collect();
            let mut spec = spec_of(&base);
            spec.explicit_leaf_order = Some(reflected);
            build_halin(spec).unwrap();
        }
    }

    #[test]
    fn leaf_order_transposition_rejected() {
        // Swapping two adjacent leaves is not a rotation or reflection of a
        // 4-cycle (swapping opposite ones would be).
        let base = depth_two();
        let mut swapped: Vec<VertexId> = base.cycle().leaf_order().to_vec();
        swapped.swap(1, 2);
        let mut spec = spec_of(&base);
        spec.explicit_leaf_order = Some(swapped);
        assert!(matches!(
            build_halin(spec),
            Err(HalinError::LeafOrderMismatch(_))
        ));
    }

    fn spec_of(h: &HalinGraph) -> TreeSpec {
        TreeSpec {
            labels: h.labels().to_vec(),
            root: h.root(),
            children: (0..h.n())
                .map(|v| h.tree().children(VertexId(v as u32)).to_vec())
                .collect(),
            explicit_leaf_order: None,
        }
    }

    #[test]
    fn generator_at_minimum_size_yields_k4() {
        let h = random_halin(1, 4, 3).unwrap();
        assert_eq!((h.n(), h.p(), h.d()), (4, 3, 1));
    }

    #[test]
    fn generator_is_deterministic() {
        let a = crate::format::serialize(&random_halin(7, 12, 4).unwrap());
        let b = crate::format::serialize(&random_halin(7, 12, 4).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn generator_rejects_infeasible() {
        assert!(matches!(
            random_halin(1, 3, 4),
            Err(HalinError::InfeasibleParams(_))
        ));
        assert!(matches!(
            random_halin(1, 10, 2),
            Err(HalinError::InfeasibleParams(_))
        ));
    }

    /// The depth-bound proof construction: drop all deepest leaves, re-close
    /// the cycle, and a valid Halin graph of depth d-1 remains.
    fn prune_deepest(h: &HalinGraph) -> Result<HalinGraph, HalinError> {
        let d = h.d();
        assert!(d >= 2, "pruning needs depth >= 2");
        let keep: Vec<VertexId> = (0..h.n() as u32)
            .map(VertexId)
            .filter(|&v| h.tree().depth_of(v) < d)
            .collect();
        let mut new_id = vec![None; h.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v.index()] = Some(VertexId(i as u32));
        }
        let children = keep
            .iter()
            .map(|&v| {
                h.tree()
                    .children(v)
                    .iter()
                    .filter_map(|&c| new_id[c.index()])
                    .collect()
            })
            .collect();
        build_halin(TreeSpec {
            labels: keep.iter().map(|&v| h.label(v).to_string()).collect(),
            root: new_id[h.root().index()].unwrap(),
            children,
            explicit_leaf_order: None,
        })
    }

    #[test]
    fn pruning_deepest_leaves_reduces_depth_by_one() {
        for seed in 0..40u64 {
            let h = random_halin(seed, 14, 4).unwrap();
            if h.d() >= 2 {
                let pruned = prune_deepest(&h).unwrap();
                assert_eq!(pruned.d(), h.d() - 1, "seed {seed}");
            }
        }
    }

    #[test]
    fn base_fundamental_cycles_pairwise_share_at_most_one_edge() {
        // Cycles closed by two different accompanying-cycle edges over the
        // characteristic tree overlap in at most one tree edge.
        for seed in 0..30u64 {
            let h = random_halin(seed, 4 + (seed as usize % 11), 4).unwrap();
            let base = h.base_edges();
            let cycles: Vec<crate::graph::EdgeSet> = (0..h.p())
                .map(|i| {
                    crate::graph::fundamental_cycle(&base, h.cycle_edge(i))
                        .unwrap()
                        .into_iter()
                        .collect()
                })
                .collect();
            for i in 0..cycles.len() {
                for j in i + 1..cycles.len() {
                    let shared = cycles[i].intersection(&cycles[j]).len();
                    assert!(shared <= 1, "seed {seed}: cycles {i},{j} share {shared}");
                }
            }
        }
    }

    #[test]
    fn base_fundamental_cycles_respect_depth_bound() {
        // Over the characteristic tree, adding one cycle edge closes a cycle
        // of at most 2d + 1 edges.
        for seed in 0..30u64 {
            let h = random_halin(seed, 4 + (seed as usize % 11), 4).unwrap();
            let base = h.base_edges();
            for i in 0..h.p() {
                let c = crate::graph::fundamental_cycle(&base, h.cycle_edge(i)).unwrap();
                assert!(
                    c.len() <= 2 * h.d() + 1,
                    "seed {seed} edge {i}: cycle of {} edges, d = {}",
                    c.len(),
                    h.d()
                );
            }
        }
    }

    proptest! {
        #[test]
        fn generated_graphs_are_valid(seed in 0u64..300, target in 4usize..=20, fanout in 3usize..=6) {
            let h = random_halin(seed, target, fanout).unwrap();
            // n lands on the target or one short of it.
            prop_assert!(h.n() == target || h.n() + 1 == target);
            prop_assert_eq!(h.p(), h.cycle().leaf_order().len());
            prop_assert_eq!(h.edge_count(), h.n() - 1 + h.p());
            prop_assert!(h.d() >= 1);
            prop_assert!(crate::oracle::check_depth_bound(&h));
            // Tree edges and cycle edges never overlap.
            let base = h.base_edges();
            for e in h.cycle().edges() {
                prop_assert!(!base.contains(*e));
            }
        }
    }
}
