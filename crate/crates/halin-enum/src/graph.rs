//! Foundational graph pieces: vertices, normalized edges, edge sets,
//! tree path / fundamental cycle queries, and canonical spanning-tree keys.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Dense vertex index in `[0, n)`, stable for the lifetime of one graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge stored as a normalized `(min, max)` pair, so equality and
/// hashing never depend on orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    /// Builds a normalized edge. Self-loops are structurally impossible here.
    pub fn new(x: VertexId, y: VertexId) -> Edge {
        assert!(x != y, "self-loop edge {x}-{y}");
        if x < y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    pub fn ids(x: u32, y: u32) -> Edge {
        Edge::new(VertexId(x), VertexId(y))
    }

    #[inline]
    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    #[inline]
    pub fn touches(self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint opposite `v`; `v` must be one of the two endpoints.
    #[inline]
    pub fn other(self, v: VertexId) -> VertexId {
        debug_assert!(self.touches(v));
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Set of edges with O(1)-amortized membership.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct EdgeSet {
    members: HashSet<Edge>,
}

impl EdgeSet {
    pub fn new() -> EdgeSet {
        EdgeSet::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.members.insert(e)
    }

    pub fn remove(&mut self, e: Edge) -> bool {
        self.members.remove(&e)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.members.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.members.iter().copied()
    }

    /// Edges in ascending `(min, max)` order.
    pub fn sorted(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.members.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// Every vertex that appears as an endpoint.
    pub fn vertices(&self) -> HashSet<VertexId> {
        let mut vs = HashSet::with_capacity(self.members.len() + 1);
        for e in &self.members {
            vs.insert(e.a);
            vs.insert(e.b);
        }
        vs
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        self.members
            .iter()
            .copied()
            .filter(|e| other.contains(*e))
            .collect()
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = Edge>>(iter: T) -> EdgeSet {
        EdgeSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl Extend<Edge> for EdgeSet {
    fn extend<T: IntoIterator<Item = Edge>>(&mut self, iter: T) {
        self.members.extend(iter);
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = Edge;
    type IntoIter = std::iter::Copied<std::collections::hash_set::Iter<'a, Edge>>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

/// Order-independent fingerprint of a spanning tree's edge set. Two spanning
/// trees are the same tree exactly when their keys compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalTreeKey {
    pairs: Vec<(u32, u32)>,
}

impl CanonicalTreeKey {
    /// Internal fast path: `edges` must already be sorted ascending.
    pub(crate) fn from_sorted_edges(edges: &[Edge]) -> CanonicalTreeKey {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        CanonicalTreeKey {
            pairs: edges.iter().map(|e| (e.a.0, e.b.0)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

impl fmt::Display for CanonicalTreeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

/// Deterministic, insertion-order-independent key for an edge set.
pub fn canonical_key(tree: &EdgeSet) -> CanonicalTreeKey {
    CanonicalTreeKey::from_sorted_edges(&tree.sorted())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge set is not a tree: {0}")]
    NotATree(String),
    #[error("edge {0} is already in the tree")]
    EdgeInTree(Edge),
    #[error("vertex {0} is not covered by the tree")]
    MissingVertex(VertexId),
}

fn adjacency(tree: &EdgeSet) -> HashMap<VertexId, Vec<(VertexId, Edge)>> {
    let mut adj: HashMap<VertexId, Vec<(VertexId, Edge)>> = HashMap::new();
    for e in tree.iter() {
        let (a, b) = e.endpoints();
        adj.entry(a).or_default().push((b, e));
        adj.entry(b).or_default().push((a, e));
    }
    adj
}

/// The unique edge sequence from `a` to `b` inside a tree; empty when `a == b`.
///
/// The input must actually be a tree over its own vertex set; a cycle or a
/// disconnected edge set is rejected.
pub fn tree_path(tree: &EdgeSet, a: VertexId, b: VertexId) -> Result<Vec<Edge>, GraphError> {
    if a == b {
        // Still sanity-check the input when it is nonempty.
        if !tree.is_empty() {
            validate_tree(tree)?;
            if !tree.vertices().contains(&a) {
                return Err(GraphError::MissingVertex(a));
            }
        }
        return Ok(Vec::new());
    }
    validate_tree(tree)?;
    let vs = tree.vertices();
    if !vs.contains(&a) {
        return Err(GraphError::MissingVertex(a));
    }
    if !vs.contains(&b) {
        return Err(GraphError::MissingVertex(b));
    }

    let adj = adjacency(tree);
    let mut parent: HashMap<VertexId, (VertexId, Edge)> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(a);
    let mut seen = HashSet::new();
    seen.insert(a);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        if let Some(nexts) = adj.get(&v) {
            for &(w, e) in nexts {
                if seen.insert(w) {
                    parent.insert(w, (v, e));
                    queue.push_back(w);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let (prev, e) = parent[&cur];
        path.push(e);
        cur = prev;
    }
    path.reverse();
    Ok(path)
}

fn validate_tree(tree: &EdgeSet) -> Result<(), GraphError> {
    let vs = tree.vertices();
    if tree.is_empty() {
        return Ok(());
    }
    if tree.len() + 1 != vs.len() {
        return Err(GraphError::NotATree(format!(
            "{} edges over {} vertices",
            tree.len(),
            vs.len()
        )));
    }
    // Edge count is right; connectivity now rules out a cycle + island split.
    let adj = adjacency(tree);
    let start = *vs.iter().next().unwrap();
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if let Some(nexts) = adj.get(&v) {
            for &(w, _) in nexts {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    if seen.len() != vs.len() {
        return Err(GraphError::NotATree("disconnected".into()));
    }
    Ok(())
}

/// Edge set of the unique cycle created when `e` is added to `tree`:
/// `e` followed by the tree path between its endpoints.
pub fn fundamental_cycle(tree: &EdgeSet, e: Edge) -> Result<Vec<Edge>, GraphError> {
    if tree.contains(e) {
        return Err(GraphError::EdgeInTree(e));
    }
    let (a, b) = e.endpoints();
    let mut cycle = vec![e];
    cycle.extend(tree_path(tree, a, b)?);
    Ok(cycle)
}

/// True iff `candidate` has `n - 1` edges and connects all `n` vertices
/// (acyclicity follows from the count).
pub fn is_spanning_tree(candidate: &EdgeSet, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    if candidate.len() != n - 1 {
        return false;
    }
    let mut dsu = Dsu::new(n);
    for e in candidate.iter() {
        let (a, b) = e.endpoints();
        if a.index() >= n || b.index() >= n {
            return false;
        }
        if !dsu.union(a.index(), b.index()) {
            return false;
        }
    }
    dsu.components() == 1
}

/// Small union-find used by the tree test and the brute-force oracle.
#[derive(Clone)]
pub(crate) struct Dsu {
    parent: Vec<u32>,
    components: usize,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n as u32).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns false when `x` and `y` were already connected.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry as u32;
        self.components -= 1;
        true
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    // K4 as a Halin graph: root u=0, leaves v1=1, v2=2, v3=3.
    fn k4_star() -> EdgeSet {
        [Edge::ids(0, 1), Edge::ids(0, 2), Edge::ids(0, 3)]
            .into_iter()
            .collect()
    }

    #[test]
    fn edge_is_normalized() {
        assert_eq!(Edge::ids(3, 1), Edge::ids(1, 3));
        assert_eq!(Edge::ids(3, 1).to_string(), "1-3");
    }

    #[test]
    #[should_panic(expected = "self-loop")]
    fn edge_rejects_self_loop() {
        let _ = Edge::ids(2, 2);
    }

    #[test]
    fn path_in_star_goes_through_center() {
        let star = k4_star();
        let path = tree_path(&star, v(1), v(2)).unwrap();
        assert_eq!(path, vec![Edge::ids(0, 1), Edge::ids(0, 2)]);
    }

    #[test]
    fn path_to_self_is_empty() {
        let star = k4_star();
        assert!(tree_path(&star, v(1), v(1)).unwrap().is_empty());
    }

    #[test]
    fn path_on_a_path_tree() {
        let line: EdgeSet = [Edge::ids(0, 1), Edge::ids(1, 2)].into_iter().collect();
        let path = tree_path(&line, v(0), v(2)).unwrap();
        assert_eq!(path, vec![Edge::ids(0, 1), Edge::ids(1, 2)]);
    }

    #[test]
    fn path_rejects_cycle_input() {
        let tri: EdgeSet = [Edge::ids(0, 1), Edge::ids(1, 2), Edge::ids(0, 2)]
            .into_iter()
            .collect();
        assert!(matches!(
            tree_path(&tri, v(0), v(2)),
            Err(GraphError::NotATree(_))
        ));
    }

    #[test]
    fn path_rejects_disconnected_input() {
        let two: EdgeSet = [Edge::ids(0, 1), Edge::ids(2, 3)].into_iter().collect();
        assert!(matches!(
            tree_path(&two, v(0), v(3)),
            Err(GraphError::NotATree(_))
        ));
    }

    #[test]
    fn fundamental_cycle_in_k4() {
        let star = k4_star();
        let e1 = Edge::ids(1, 2);
        let c = fundamental_cycle(&star, e1).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.contains(&e1));
        assert!(c.contains(&Edge::ids(0, 1)));
        assert!(c.contains(&Edge::ids(0, 2)));
    }

    #[test]
    fn fundamental_cycle_with_prior_cycle_edges() {
        // Spanning tree {e1, e2, uv1}; adding e3 closes the outer cycle, so
        // no removable tree edges remain in it.
        let tree: EdgeSet = [Edge::ids(1, 2), Edge::ids(2, 3), Edge::ids(0, 1)]
            .into_iter()
            .collect();
        let c = fundamental_cycle(&tree, Edge::ids(1, 3)).unwrap();
        let cs: EdgeSet = c.into_iter().collect();
        let expected: EdgeSet = [Edge::ids(1, 3), Edge::ids(1, 2), Edge::ids(2, 3)]
            .into_iter()
            .collect();
        assert_eq!(cs, expected);
    }

    #[test]
    fn fundamental_cycle_rejects_tree_edge() {
        let star = k4_star();
        assert!(matches!(
            fundamental_cycle(&star, Edge::ids(0, 1)),
            Err(GraphError::EdgeInTree(_))
        ));
    }

    #[test]
    fn canonical_key_ignores_insertion_order() {
        let mut s1 = EdgeSet::new();
        s1.insert(Edge::ids(0, 2));
        s1.insert(Edge::ids(0, 1));
        let mut s2 = EdgeSet::new();
        s2.insert(Edge::ids(0, 1));
        s2.insert(Edge::ids(0, 2));
        assert_eq!(canonical_key(&s1), canonical_key(&s2));
        assert_eq!(canonical_key(&s1).to_string(), "0-1,0-2");
    }

    #[test]
    fn canonical_key_separates_different_sets() {
        let s1: EdgeSet = [Edge::ids(0, 1), Edge::ids(0, 2)].into_iter().collect();
        let s2: EdgeSet = [Edge::ids(0, 1), Edge::ids(0, 3)].into_iter().collect();
        assert_ne!(canonical_key(&s1), canonical_key(&s2));
    }

    #[test]
    fn spanning_tree_test_on_k4() {
        let yes: EdgeSet = [Edge::ids(1, 2), Edge::ids(0, 2), Edge::ids(0, 3)]
            .into_iter()
            .collect();
        assert!(is_spanning_tree(&yes, 4));

        // Misses vertex 0 entirely.
        let no_center: EdgeSet = [Edge::ids(1, 2), Edge::ids(2, 3), Edge::ids(1, 3)]
            .into_iter()
            .collect();
        assert!(!is_spanning_tree(&no_center, 4));

        // Four edges can never be a spanning tree on four vertices.
        let four: EdgeSet = [
            Edge::ids(0, 1),
            Edge::ids(0, 2),
            Edge::ids(0, 3),
            Edge::ids(1, 2),
        ]
        .into_iter()
        .collect();
        assert!(!is_spanning_tree(&four, 4));
    }

    /// Random labelled tree on `n` vertices from a seed (random parent rule).
    fn random_tree(seed: u64, n: usize) -> EdgeSet {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            state.wrapping_mul(0x2545f4914f6cdd1d)
        };
        (1..n as u32)
            .map(|i| Edge::ids(i, (next() % i as u64) as u32))
            .collect()
    }

    proptest! {
        #[test]
        fn path_reverses_cleanly(seed in 0u64..500, n in 2usize..24, pick in 0u64..10_000) {
            let tree = random_tree(seed, n);
            let a = v((pick % n as u64) as u32);
            let b = v(((pick / 7) % n as u64) as u32);
            let fwd = tree_path(&tree, a, b).unwrap();
            let mut back = tree_path(&tree, b, a).unwrap();
            back.reverse();
            prop_assert_eq!(fwd, back);
        }

        #[test]
        fn fundamental_cycle_is_simple(seed in 0u64..500, n in 3usize..24, pick in 0u64..10_000) {
            let tree = random_tree(seed, n);
            let a = (pick % n as u64) as u32;
            let b = ((pick / 11) % n as u64) as u32;
            prop_assume!(a != b);
            let e = Edge::ids(a, b);
            prop_assume!(!tree.contains(e));
            let cycle = fundamental_cycle(&tree, e).unwrap();
            prop_assert!(cycle.contains(&e));
            // Every vertex on the cycle is met by exactly two cycle edges.
            let mut deg: HashMap<VertexId, usize> = HashMap::new();
            for ce in &cycle {
                let (x, y) = ce.endpoints();
                *deg.entry(x).or_default() += 1;
                *deg.entry(y).or_default() += 1;
            }
            prop_assert!(deg.values().all(|&d| d == 2));
        }

        #[test]
        fn random_trees_span(seed in 0u64..500, n in 2usize..24) {
            let tree = random_tree(seed, n);
            prop_assert!(is_spanning_tree(&tree, n));
        }
    }
}
