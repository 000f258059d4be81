//! Independent ground truth: exact spanning-tree counts via the matrix-tree
//! theorem, brute-force enumeration for small graphs, and the combinatorial
//! bounds as checkable integer formulas.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{canonical_key, CanonicalTreeKey, Dsu, Edge, EdgeSet};
use crate::halin::HalinGraph;

/// Exact non-negative count; no floating point anywhere near it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactCount(pub BigUint);

impl ExactCount {
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl std::fmt::Display for ExactCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> ExactCount {
        ExactCount(BigUint::from(v))
    }
}

/// Matrix-tree count plus a connectivity flag; a disconnected input reports
/// zero trees rather than an error.
#[derive(Clone, Debug)]
pub struct KirchhoffCount {
    pub count: ExactCount,
    pub connected: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph too large for brute force: {n} vertices, guard is {guard}")]
    TooLarge { n: usize, guard: usize },
    #[error("invalid bound parameters: {0}")]
    InvalidParams(String),
}

/// Vertex budget for the brute-force oracle.
pub const BRUTE_FORCE_GUARD: usize = 14;

/// Edge budgets picking between subset filtering and backtracking.
const SUBSET_FILTER_MAX_EDGES: usize = 24;

/// Number of spanning trees by any cofactor of the Laplacian, computed with
/// fraction-free (Bareiss) elimination over arbitrary-precision integers.
pub fn kirchhoff_count(n: usize, edges: &EdgeSet) -> KirchhoffCount {
    let connected = is_connected(n, edges);
    if n == 0 || !connected {
        return KirchhoffCount {
            count: ExactCount(BigUint::zero()),
            connected,
        };
    }
    if n == 1 {
        return KirchhoffCount {
            count: ExactCount(BigUint::one()),
            connected: true,
        };
    }
    // Reduced Laplacian: drop row and column 0.
    let m = n - 1;
    let mut lap = vec![vec![BigInt::zero(); m]; m];
    for e in edges.iter() {
        let (a, b) = e.endpoints();
        let (a, b) = (a.index(), b.index());
        if a > 0 {
            lap[a - 1][a - 1] += 1;
        }
        if b > 0 {
            lap[b - 1][b - 1] += 1;
        }
        if a > 0 && b > 0 {
            lap[a - 1][b - 1] -= 1;
            lap[b - 1][a - 1] -= 1;
        }
    }
    let det = bareiss_determinant(lap);
    KirchhoffCount {
        count: ExactCount(det.abs().to_biguint().unwrap()),
        connected: true,
    }
}

fn is_connected(n: usize, edges: &EdgeSet) -> bool {
    if n == 0 {
        return false;
    }
    let mut dsu = Dsu::new(n);
    for e in edges.iter() {
        let (a, b) = e.endpoints();
        if a.index() >= n || b.index() >= n {
            return false;
        }
        dsu.union(a.index(), b.index());
    }
    dsu.components() == 1
}

/// Fraction-free elimination; every division is exact, so the arithmetic
/// stays in the integers and the final pivot is the determinant.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exhaustive set of spanning-tree keys for a small graph: subset filtering
/// while the edge count stays modest, include/exclude backtracking beyond.
pub fn brute_force_trees(
    n: usize,
    edges: &EdgeSet,
) -> Result<BTreeSet<CanonicalTreeKey>, OracleError> {
    if n > BRUTE_FORCE_GUARD {
        return Err(OracleError::TooLarge {
            n,
            guard: BRUTE_FORCE_GUARD,
        });
    }
    let mut out = BTreeSet::new();
    if n == 0 || n == 1 {
        if n == 1 {
            out.insert(canonical_key(&EdgeSet::new()));
        }
        return Ok(out);
    }
    let edge_list = edges.sorted();
    let m = edge_list.len();
    if m < n - 1 {
        return Ok(out);
    }
    if m <= SUBSET_FILTER_MAX_EDGES {
        subset_filter(n, &edge_list, &mut out);
    } else {
        let mut chosen = Vec::with_capacity(n - 1);
        backtrack(n, &edge_list, 0, &mut chosen, &Dsu::new(n), &mut out);
    }
    Ok(out)
}

/// Walks every (n-1)-subset of the edges and keeps the ones forming a tree.
fn subset_filter(n: usize, edge_list: &[Edge], out: &mut BTreeSet<CanonicalTreeKey>) {
    let k = n - 1;
    let m = edge_list.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut subset: Vec<Edge> = Vec::with_capacity(k);
    loop {
        subset.clear();
        subset.extend(idx.iter().map(|&i| edge_list[i]));
        if subset_is_tree(n, &subset) {
            out.insert(CanonicalTreeKey::from_sorted_edges(&subset));
        }
        // Next combination in lexicographic index order.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
        }
        if idx[i] == i + m - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn subset_is_tree(n: usize, subset: &[Edge]) -> bool {
    let mut dsu = Dsu::new(n);
    for e in subset {
        let (a, b) = e.endpoints();
        if !dsu.union(a.index(), b.index()) {
            return false;
        }
    }
    dsu.components() == 1
}

/// Include/exclude recursion over a fixed edge order; every spanning tree is
/// a distinct subset, so each comes out exactly once.
fn backtrack(
    n: usize,
    edge_list: &[Edge],
    next: usize,
    chosen: &mut Vec<Edge>,
    dsu: &Dsu,
    out: &mut BTreeSet<CanonicalTreeKey>,
) {
    if chosen.len() == n - 1 {
        out.insert(CanonicalTreeKey::from_sorted_edges(chosen));
        return;
    }
    if next >= edge_list.len() || chosen.len() + (edge_list.len() - next) < n - 1 {
        return;
    }
    let e = edge_list[next];
    let (a, b) = e.endpoints();
    let mut with = dsu.clone();
    if with.union(a.index(), b.index()) {
        chosen.push(e);
        backtrack(n, edge_list, next + 1, chosen, &with, out);
        chosen.pop();
    }
    backtrack(n, edge_list, next + 1, chosen, dsu, out);
}

/// Per-level and total bounds on the number of spanning trees, as exact
/// integers: level `i` is bounded by `C(p, i) * i! * (2d)^i`, and the whole
/// enumeration by `(2pd)^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub p: usize,
    pub d: usize,
    /// Bound per level `i` for `i` in `[0, p-1]`.
    pub per_level: Vec<BigUint>,
    pub total: BigUint,
    pub headline: BigUint,
}

impl BoundSet {
    pub fn level(&self, i: usize) -> Option<&BigUint> {
        self.per_level.get(i)
    }
}

pub fn compute_bounds(p: usize, d: usize) -> Result<BoundSet, OracleError> {
    if p < 3 {
        return Err(OracleError::InvalidParams(format!(
            "p = {p}, a Halin graph has at least 3 leaves"
        )));
    }
    if d < 1 {
        return Err(OracleError::InvalidParams(
            "d = 0, depth is at least 1".into(),
        ));
    }
    let two_d = BigUint::from(2 * d);
    let mut per_level = Vec::with_capacity(p);
    let mut level_value = BigUint::one(); // i! * (2d)^i, built incrementally
    for i in 0..p {
        if i > 0 {
            level_value *= BigUint::from(i) * &two_d;
        }
        per_level.push(binomial(p, i) * &level_value);
    }
    let total = per_level.iter().sum();
    let headline = BigUint::from(2 * p * d).pow(p as u32);
    Ok(BoundSet {
        p,
        d,
        per_level,
        total,
        headline,
    })
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        num /= BigUint::from(i + 1);
    }
    num
}

/// Depth bound check: `d <= floor(n/2) - 1` must hold for every valid
/// Halin graph; a false return indicates a validator bug.
#[allow(clippy::int_plus_one)] // keep the inequality in its documented shape
pub fn check_depth_bound(h: &HalinGraph) -> bool {
    h.d() <= h.n() / 2 - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_spanning_tree, VertexId};
    use crate::halin::{random_halin, HalinGraph};

    fn k4_edges() -> (usize, EdgeSet) {
        let h = HalinGraph::wheel(3).unwrap();
        (4, h.all_edges())
    }

    #[test]
    fn kirchhoff_k4_matches_cayley() {
        let (n, edges) = k4_edges();
        let k = kirchhoff_count(n, &edges);
        assert!(k.connected);
        assert_eq!(k.count, ExactCount::from(16)); // 4^{4-2}
    }

    #[test]
    fn kirchhoff_cycle_and_tree() {
        let c5: EdgeSet = (0..5).map(|i| Edge::ids(i, (i + 1) % 5)).collect();
        assert_eq!(kirchhoff_count(5, &c5).count, ExactCount::from(5));

        let path: EdgeSet = (0..4).map(|i| Edge::ids(i, i + 1)).collect();
        assert_eq!(kirchhoff_count(5, &path).count, ExactCount::from(1));
    }

    #[test]
    fn kirchhoff_flags_disconnection() {
        let split: EdgeSet = [Edge::ids(0, 1), Edge::ids(2, 3)].into_iter().collect();
        let k = kirchhoff_count(4, &split);
        assert!(!k.connected);
        assert_eq!(k.count, ExactCount::from(0));
    }

    #[test]
    fn brute_force_k4() {
        let (n, edges) = k4_edges();
        let trees = brute_force_trees(n, &edges).unwrap();
        assert_eq!(trees.len(), 16);
        // The characteristic tree and one edge-exchanged tree are in the set.
        let star: EdgeSet = [Edge::ids(0, 1), Edge::ids(0, 2), Edge::ids(0, 3)]
            .into_iter()
            .collect();
        assert!(trees.contains(&canonical_key(&star)));
        let swapped: EdgeSet = [Edge::ids(1, 2), Edge::ids(2, 3), Edge::ids(0, 3)]
            .into_iter()
            .collect();
        assert!(trees.contains(&canonical_key(&swapped)));
    }

    #[test]
    fn brute_force_matches_direct_subset_scan_on_k4() {
        // Independent route: filter all C(6,3) = 20 subsets through the
        // public spanning-tree test.
        let (n, edges) = k4_edges();
        let list = edges.sorted();
        let mut count = 0;
        let mut keys = BTreeSet::new();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                for k in j + 1..list.len() {
                    let subset: EdgeSet = [list[i], list[j], list[k]].into_iter().collect();
                    if is_spanning_tree(&subset, n) {
                        count += 1;
                        keys.insert(canonical_key(&subset));
                    }
                }
            }
        }
        assert_eq!(count, 16);
        assert_eq!(keys, brute_force_trees(n, &edges).unwrap());
    }

    #[test]
    fn brute_force_triangle() {
        let tri: EdgeSet = [Edge::ids(0, 1), Edge::ids(1, 2), Edge::ids(0, 2)]
            .into_iter()
            .collect();
        assert_eq!(brute_force_trees(3, &tri).unwrap().len(), 3);
    }

    #[test]
    fn brute_force_guard() {
        let big: EdgeSet = (0..15).map(|i| Edge::ids(i, (i + 1) % 16)).collect();
        assert!(matches!(
            brute_force_trees(16, &big),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn backtracking_route_agrees_with_subset_route() {
        // Force the backtracking path by feeding it directly.
        let (n, edges) = k4_edges();
        let list = edges.sorted();
        let mut via_backtrack = BTreeSet::new();
        let mut chosen = Vec::new();
        backtrack(n, &list, 0, &mut chosen, &Dsu::new(n), &mut via_backtrack);
        assert_eq!(via_backtrack, brute_force_trees(n, &edges).unwrap());
    }

    #[test]
    fn dual_oracle_agreement_on_random_graphs() {
        for seed in 0..25u64 {
            let h = random_halin(seed, 4 + (seed as usize % 9), 4).unwrap();
            let edges = h.all_edges();
            let trees = brute_force_trees(h.n(), &edges).unwrap();
            let k = kirchhoff_count(h.n(), &edges);
            assert_eq!(
                ExactCount(BigUint::from(trees.len())),
                k.count,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn bounds_for_k4_shape() {
        let b = compute_bounds(3, 1).unwrap();
        assert_eq!(b.headline, BigUint::from(216u32)); // (2*3*1)^3
        assert_eq!(
            b.per_level,
            vec![
                BigUint::from(1u32),
                BigUint::from(6u32),
                BigUint::from(24u32)
            ]
        );
        assert_eq!(b.total, BigUint::from(31u32));
        assert!(b.total <= b.headline);
    }

    #[test]
    fn bounds_reject_bad_params() {
        assert!(compute_bounds(2, 1).is_err());
        assert!(compute_bounds(3, 0).is_err());
    }

    #[test]
    fn headline_grows_in_p_and_d() {
        let base = compute_bounds(4, 2).unwrap().headline;
        assert!(compute_bounds(5, 2).unwrap().headline > base);
        assert!(compute_bounds(4, 3).unwrap().headline > base);
    }

    #[test]
    fn total_below_headline_across_params() {
        for p in 3..=9 {
            for d in 1..=5 {
                let b = compute_bounds(p, d).unwrap();
                assert!(b.total <= b.headline, "p={p} d={d}");
            }
        }
    }

    #[test]
    fn wheel_counts_match_the_lucas_closed_form() {
        // Wheels have a closed-form spanning-tree count: L(2p) - 2 over the
        // Lucas sequence. A third route, independent of both the
        // determinant and the subset scan.
        fn lucas(k: usize) -> u64 {
            let (mut a, mut b) = (2u64, 1u64);
            for _ in 0..k {
                let c = a + b;
                a = b;
                b = c;
            }
            a
        }
        assert_eq!(lucas(6), 18);
        for p in 3..=10 {
            let h = HalinGraph::wheel(p).unwrap();
            let expected = lucas(2 * p) - 2;
            let k = kirchhoff_count(h.n(), &h.all_edges());
            assert_eq!(k.count, ExactCount::from(expected), "wheel {p}");

            let mut sink = crate::enumerate::EnumSink::counting();
            let report = crate::enumerate::enumerate_distinct(&h, &mut sink).unwrap();
            assert_eq!(report.total_emitted, expected, "wheel {p} engine");
        }
    }

    #[test]
    fn depth_bound_examples() {
        assert!(check_depth_bound(&HalinGraph::wheel(3).unwrap())); // 1 <= 1
        for seed in 0..40u64 {
            let h = random_halin(seed, 4 + (seed as usize % 13), 5).unwrap();
            assert!(check_depth_bound(&h), "seed {seed}");
        }
        let _ = VertexId(0);
    }
}
