//! Batch verification of one Halin graph against the oracles: exact count
//! agreement, set agreement with brute force, duplicate-freeness, the depth
//! bound, and the per-level / total growth bounds.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerate::{enumerate_with, EnumConfig, EnumError, EnumSink};
use crate::graph::CanonicalTreeKey;
use crate::halin::HalinGraph;
use crate::oracle::{
    brute_force_trees, check_depth_bound, compute_bounds, kirchhoff_count, BRUTE_FORCE_GUARD,
};

/// One verified clause of the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Clause {
    fn pass(name: &str, detail: String) -> Clause {
        Clause {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Clause {
        Clause {
            name: name.into(),
            passed: false,
            detail,
        }
    }

    fn of(name: &str, ok: bool, detail: String) -> Clause {
        if ok {
            Clause::pass(name, detail)
        } else {
            Clause::fail(name, detail)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub n: usize,
    pub p: usize,
    pub d: usize,
    pub clauses: Vec<Clause>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }
}

/// Full verdict with the default oracle guard.
pub fn run_check(h: &HalinGraph) -> Result<CheckOutcome, EnumError> {
    run_check_with(h, BRUTE_FORCE_GUARD, &EnumConfig::distinct())
}

/// Verdict with an explicit brute-force guard and a caller-chosen distinct
/// configuration. The configuration knob exists so tests can demonstrate
/// that a broken engine (coloring off) is caught; production callers pass
/// [`EnumConfig::distinct`].
pub fn run_check_with(
    h: &HalinGraph,
    guard: usize,
    distinct_cfg: &EnumConfig,
) -> Result<CheckOutcome, EnumError> {
    let mut clauses = Vec::new();
    let edges = h.all_edges();

    let mut distinct_sink = EnumSink::counting_with_keys();
    let distinct_report = enumerate_with(h, distinct_cfg, &mut distinct_sink)?;

    let mut naive_sink = EnumSink::counting_with_keys();
    let naive_report = enumerate_with(h, &EnumConfig::naive(), &mut naive_sink)?;

    // Exact count agreement with the matrix-tree oracle.
    let kirchhoff = kirchhoff_count(h.n(), &edges);
    let emitted = BigUint::from(distinct_report.total_emitted);
    clauses.push(Clause::of(
        "distinct-count-matches-kirchhoff",
        emitted == kirchhoff.count.0,
        format!(
            "distinct emitted {} vs kirchhoff {}",
            emitted, kirchhoff.count
        ),
    ));

    // No key emitted twice in distinct mode; failures name the keys.
    let dup_keys: Vec<String> = distinct_sink
        .key_multiset()
        .unwrap()
        .iter()
        .filter(|(_, &m)| m > 1)
        .map(|(k, &m)| format!("{k} (x{m})"))
        .take(8)
        .collect();
    clauses.push(Clause::of(
        "no-duplicate-keys",
        dup_keys.is_empty(),
        if dup_keys.is_empty() {
            format!("{} keys, all multiplicity 1", distinct_report.total_emitted)
        } else {
            format!("duplicate keys: {}", dup_keys.join(", "))
        },
    ));

    // Set agreement with brute force while the graph is inside the guard;
    // larger graphs fall back to the count-only clauses above.
    if h.n() <= guard.min(BRUTE_FORCE_GUARD) {
        let oracle = brute_force_trees(h.n(), &edges).expect("guard checked");
        let distinct_keys: BTreeSet<CanonicalTreeKey> = distinct_sink
            .key_multiset()
            .unwrap()
            .keys()
            .cloned()
            .collect();
        clauses.push(Clause::of(
            "distinct-set-matches-brute-force",
            distinct_keys == oracle,
            format!(
                "distinct {} keys vs brute force {}",
                distinct_keys.len(),
                oracle.len()
            ),
        ));

        let naive_keys: BTreeSet<CanonicalTreeKey> =
            naive_sink.key_multiset().unwrap().keys().cloned().collect();
        clauses.push(Clause::of(
            "naive-dedup-matches-brute-force",
            naive_keys == oracle,
            format!(
                "naive {} distinct keys vs brute force {}",
                naive_keys.len(),
                oracle.len()
            ),
        ));
    }

    clauses.push(Clause::of(
        "naive-count-covers-distinct",
        naive_report.total_emitted >= distinct_report.total_emitted,
        format!(
            "naive {} vs distinct {}",
            naive_report.total_emitted, distinct_report.total_emitted
        ),
    ));

    clauses.push(Clause::of(
        "depth-bound",
        check_depth_bound(h),
        format!("d = {} vs floor(n/2) - 1 = {}", h.d(), h.n() / 2 - 1),
    ));

    let bounds = compute_bounds(h.p(), h.d()).expect("valid graph parameters");
    let mut level_violations = Vec::new();
    for report in [&naive_report, &distinct_report] {
        for &(level, count) in &report.per_level {
            let ok = match bounds.level(level) {
                Some(b) => &BigUint::from(count) <= b,
                None => count == 0,
            };
            if !ok {
                level_violations.push(format!("level {level}: {count}"));
            }
        }
    }
    clauses.push(Clause::of(
        "per-level-bounds",
        level_violations.is_empty(),
        if level_violations.is_empty() {
            "every level within C(p,i) * i! * (2d)^i".into()
        } else {
            level_violations.join("; ")
        },
    ));

    clauses.push(Clause::of(
        "total-within-headline",
        BigUint::from(distinct_report.total_emitted) <= bounds.headline,
        format!(
            "{} distinct trees vs (2pd)^p = {}",
            distinct_report.total_emitted, bounds.headline
        ),
    ));

    Ok(CheckOutcome {
        n: h.n(),
        p: h.p(),
        d: h.d(),
        clauses,
    })
}
