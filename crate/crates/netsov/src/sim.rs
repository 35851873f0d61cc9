//! Manufacturer-failure simulation: walk every failure combination and
//! measure the fraction of flows that survive (average two-terminal
//! availability, ATTA).

use crate::graph::{Flow, Topology};
use crate::score::Assignment;
use num::rational::Rational64;
use num::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("failure sweeps need at least two manufacturers, got {0}")]
    TooFewManufacturers(u32),
}

/// A non-empty, proper subset of manufacturers failing simultaneously.
/// All manufacturers failing at once is not a meaningful scenario.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FailureScenario {
    failed: Vec<u32>,
}

impl FailureScenario {
    pub fn new(mut failed: Vec<u32>, m: u32) -> Option<Self> {
        failed.sort_unstable();
        failed.dedup();
        if failed.is_empty() || failed.len() >= m as usize || failed.iter().any(|&f| f >= m) {
            return None;
        }
        Some(FailureScenario { failed })
    }

    pub fn failed(&self) -> &[u32] {
        &self.failed
    }

    pub fn contains(&self, manufacturer: u32) -> bool {
        self.failed.binary_search(&manufacturer).is_ok()
    }

    /// Dash-joined manufacturer IDs, e.g. `0-2`.
    pub fn label(&self) -> String {
        self.failed
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Every non-empty proper subset of `0..m`, ordered by cardinality then
/// lexicographically: 2^m - 2 scenarios.
pub fn failure_combinations(m: u32) -> Result<Vec<FailureScenario>, SimError> {
    if m < 2 {
        return Err(SimError::TooFewManufacturers(m));
    }
    let mut out = Vec::new();
    for size in 1..m {
        let mut chosen: Vec<u32> = (0..size).collect();
        loop {
            out.push(FailureScenario {
                failed: chosen.clone(),
            });
            let mut i = size as usize;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if chosen[i] != i as u32 + m - size {
                    chosen[i] += 1;
                    for j in i + 1..size as usize {
                        chosen[j] = chosen[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(out)
}

/// Fraction of flows still connected when every node of a failed
/// manufacturer is down. Flows losing an endpoint count as failed; the
/// denominator is always the full flow set.
pub fn atta(t: &Topology, flows: &[Flow], a: &Assignment, s: &FailureScenario) -> Rational64 {
    if flows.is_empty() {
        return Rational64::zero();
    }
    let alive: Vec<bool> = (0..t.node_count())
        .map(|v| {
            a.manufacturer_of(v as u32)
                .map(|c| !s.contains(c))
                .unwrap_or(false)
        })
        .collect();
    // label connected components of the surviving subgraph once
    let mut comp: Vec<i32> = vec![-1; t.node_count()];
    let mut next = 0;
    for start in 0..t.node_count() {
        if !alive[start] || comp[start] >= 0 {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start as u32]);
        while let Some(v) = queue.pop_front() {
            for &w in t.neighbors(v) {
                if alive[w as usize] && comp[w as usize] < 0 {
                    comp[w as usize] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    let ok = flows
        .iter()
        .filter(|f| {
            alive[f.src as usize]
                && alive[f.dst as usize]
                && comp[f.src as usize] == comp[f.dst as usize]
        })
        .count();
    Rational64::new(ok as i64, flows.len() as i64)
}

#[derive(Debug, Clone, Serialize)]
pub struct AttaRow {
    pub scenario: String,
    pub failed_count: usize,
    pub fraction: Rational64,
}

/// Sweep results over every failure combination, grouped by the number of
/// failing manufacturers.
#[derive(Debug, Clone, Serialize)]
pub struct AttaReport {
    /// One row per scenario, in scenario order (cardinality, then lex).
    pub rows: Vec<AttaRow>,
    /// Per group: fractions sorted descending, for availability plots.
    pub by_group: Vec<(usize, Vec<Rational64>)>,
    /// True when every scenario keeps all flows alive.
    pub fully_sovereign: bool,
}

impl AttaReport {
    /// Worst fraction among scenarios failing exactly `count` manufacturers.
    pub fn worst_in_group(&self, count: usize) -> Option<Rational64> {
        self.by_group
            .iter()
            .find(|(c, _)| *c == count)
            .and_then(|(_, v)| v.last().copied())
    }
}

/// ATTA for every failure combination of `m` manufacturers.
pub fn full_sweep(
    t: &Topology,
    flows: &[Flow],
    a: &Assignment,
    m: u32,
) -> Result<AttaReport, SimError> {
    let scenarios = failure_combinations(m)?;
    let fractions: Vec<Rational64> = scenarios
        .par_iter()
        .map(|s| atta(t, flows, a, s))
        .collect();
    let rows: Vec<AttaRow> = scenarios
        .iter()
        .zip(&fractions)
        .map(|(s, &fraction)| AttaRow {
            scenario: s.label(),
            failed_count: s.failed().len(),
            fraction,
        })
        .collect();
    let mut by_group: Vec<(usize, Vec<Rational64>)> = Vec::new();
    for size in 1..m as usize {
        let mut group: Vec<Rational64> = rows
            .iter()
            .filter(|r| r.failed_count == size)
            .map(|r| r.fraction)
            .collect();
        group.sort_by(|a, b| b.cmp(a));
        by_group.push((size, group));
    }
    let one = Rational64::new(1, 1);
    let fully_sovereign = rows.iter().all(|r| r.fraction == one);
    Ok(AttaReport {
        rows,
        by_group,
        fully_sovereign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_flows;
    use crate::graph::Topology;

    fn path3() -> Topology {
        Topology::new(
            "path",
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn combinations_m3() {
        let combos = failure_combinations(3).unwrap();
        let labels: Vec<String> = combos.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["0", "1", "2", "0-1", "0-2", "1-2"]);
    }

    #[test]
    fn combinations_m2_and_m5() {
        let m2: Vec<String> = failure_combinations(2)
            .unwrap()
            .iter()
            .map(|c| c.label())
            .collect();
        assert_eq!(m2, ["0", "1"]);
        assert_eq!(failure_combinations(5).unwrap().len(), 30);
    }

    #[test]
    fn rejects_single_manufacturer() {
        assert!(matches!(
            failure_combinations(1),
            Err(SimError::TooFewManufacturers(1))
        ));
    }

    #[test]
    fn unused_manufacturer_failure_is_harmless() {
        let t = path3();
        let flows = enumerate_flows(&t);
        let a = Assignment::new(vec![0, 0, 0], 2).unwrap();
        let s = FailureScenario::new(vec![1], 2).unwrap();
        assert_eq!(atta(&t, &flows, &a, &s), Rational64::new(1, 1));
    }

    #[test]
    fn lone_manufacturer_failure_kills_everything() {
        let t = path3();
        let flows = enumerate_flows(&t);
        let a = Assignment::new(vec![0, 0, 0], 2).unwrap();
        let s = FailureScenario::new(vec![0], 2).unwrap();
        assert_eq!(atta(&t, &flows, &a, &s), Rational64::zero());
    }

    #[test]
    fn endpoint_failure_counts_against_the_flow() {
        let t = path3();
        let flows = enumerate_flows(&t); // just a-c
        let a = Assignment::new(vec![1, 0, 0], 2).unwrap(); // a from 1
        let s = FailureScenario::new(vec![1], 2).unwrap();
        assert_eq!(atta(&t, &flows, &a, &s), Rational64::zero());
    }

    #[test]
    fn sweep_shape_and_sovereign_flag() {
        let t = path3();
        let flows = enumerate_flows(&t);
        let a = Assignment::new(vec![0, 1, 0], 2).unwrap();
        let report = full_sweep(&t, &flows, &a, 2).unwrap();
        assert_eq!(report.rows.len(), 2);
        // cut vertex b belongs to one manufacturer: that failure kills a-c
        assert!(!report.fully_sovereign);
    }

    #[test]
    fn subset_chain_monotonicity() {
        let t = Topology::new(
            "square",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        let flows = enumerate_flows(&t);
        let a = Assignment::new(vec![0, 1, 2, 3], 4).unwrap();
        let single = FailureScenario::new(vec![1], 4).unwrap();
        let double = FailureScenario::new(vec![1, 3], 4).unwrap();
        assert!(atta(&t, &flows, &a, &single) >= atta(&t, &flows, &a, &double));
    }
}
