//! Sovereignty scores, kept in exact rational arithmetic so that the
//! optimizer can compare 2/3 against 3/4 without floating-point ties.
//!
//! The cut-set coloring (CSC) family:
//! * MCS-CSC — 0 if one manufacturer supplies the whole cut set, otherwise
//!   distinct manufacturers over cut-set size;
//! * Flow-CSC — a flow is only as sovereign as its weakest cut set: the
//!   minimum MCS-CSC over the flow's cut sets;
//! * Network-CSC — the distribution of Flow-CSC scores (a box plot, not a
//!   single number, so the worst case stays visible).
//!
//! The older path-set diversity (PSD) score is included for comparison: per
//! path, the reciprocal of the number of manufacturers among intermediate
//! nodes; per flow, the sum over the k shortest paths after collapsing
//! paths with identical manufacturer sets.

use crate::cutset::{CutSetCatalog, MinimalCutSet};
use crate::graph::{k_shortest_paths, Flow, NodeIdx, Topology};
use num::rational::Rational64;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Exact rational score.
pub type Score = Rational64;

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("node {0} has no manufacturer assigned")]
    UnassignedNode(NodeIdx),
    #[error("flow has no cut sets")]
    EmptyMcsList,
    #[error("path with {0} nodes has no intermediate nodes")]
    PathTooShort(usize),
    #[error("no path between flow endpoints")]
    NoPath,
    #[error("no flows to score")]
    NoFlows,
    #[error("assignment covers {assigned} nodes, topology has {expected}")]
    WrongNodeCount { assigned: usize, expected: usize },
    #[error("manufacturer id {id} out of range (market has {m})")]
    ManufacturerOutOfRange { id: u32, m: u32 },
}

/// Total map node -> manufacturer ID, aligned with a topology's node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    colors: Vec<u32>,
    manufacturers: u32,
}

impl Assignment {
    /// `colors[v]` is the manufacturer of node index `v`; every ID must be
    /// below `manufacturers`.
    pub fn new(colors: Vec<u32>, manufacturers: u32) -> Result<Self, ScoreError> {
        for &c in &colors {
            if c >= manufacturers {
                return Err(ScoreError::ManufacturerOutOfRange {
                    id: c,
                    m: manufacturers,
                });
            }
        }
        Ok(Assignment {
            colors,
            manufacturers,
        })
    }

    pub fn manufacturer_count(&self) -> u32 {
        self.manufacturers
    }

    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    pub fn manufacturer_of(&self, v: NodeIdx) -> Option<u32> {
        self.colors.get(v as usize).copied()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Nodes owned by each manufacturer, as index lists.
    pub fn groups(&self) -> Vec<Vec<NodeIdx>> {
        let mut groups = vec![Vec::new(); self.manufacturers as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            groups[c as usize].push(v as NodeIdx);
        }
        groups
    }

    pub fn ensure_covers(&self, t: &Topology) -> Result<(), ScoreError> {
        if self.colors.len() != t.node_count() {
            return Err(ScoreError::WrongNodeCount {
                assigned: self.colors.len(),
                expected: t.node_count(),
            });
        }
        Ok(())
    }
}

/// Eq-style MCS score: 0 when a single manufacturer covers the cut set,
/// otherwise distinct manufacturers over cut-set cardinality.
pub fn mcs_csc_score(mcs: &MinimalCutSet, a: &Assignment) -> Result<Score, ScoreError> {
    let mut seen = 0u64;
    for &v in &mcs.nodes {
        let c = a
            .manufacturer_of(v)
            .ok_or(ScoreError::UnassignedNode(v))?;
        seen |= 1 << c;
    }
    let distinct = seen.count_ones() as i64;
    if distinct <= 1 {
        Ok(Score::zero())
    } else {
        Ok(Score::new(distinct, mcs.nodes.len() as i64))
    }
}

/// Minimum MCS-CSC over the flow's cut sets.
pub fn flow_csc_score(sets: &[MinimalCutSet], a: &Assignment) -> Result<Score, ScoreError> {
    if sets.is_empty() {
        return Err(ScoreError::EmptyMcsList);
    }
    let mut min = Score::one();
    for s in sets {
        let v = mcs_csc_score(s, a)?;
        if v < min {
            min = v;
        }
    }
    Ok(min)
}

/// Five-number summary plus Tukey whiskers (1.5 x IQR) and mean, all exact.
/// Quartiles interpolate linearly between closest ranks.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionSummary {
    pub min: Score,
    pub q1: Score,
    pub median: Score,
    pub q3: Score,
    pub max: Score,
    pub mean: Score,
    pub whisker_low: Score,
    pub whisker_high: Score,
}

/// Per-flow scores with their box-plot summary.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreDistribution {
    pub per_flow: Vec<(Flow, Score)>,
    pub summary: DistributionSummary,
    pub outliers: Vec<(Flow, Score)>,
}

impl ScoreDistribution {
    pub fn from_scores(per_flow: Vec<(Flow, Score)>) -> Self {
        assert!(!per_flow.is_empty());
        let mut sorted: Vec<Score> = per_flow.iter().map(|(_, s)| *s).collect();
        sorted.sort();
        let n = sorted.len();
        let q1 = quantile(&sorted, 1, 4);
        let median = quantile(&sorted, 2, 4);
        let q3 = quantile(&sorted, 3, 4);
        let iqr = q3 - q1;
        let step = Score::new(3, 2) * iqr;
        let low_fence = q1 - step;
        let high_fence = q3 + step;
        let whisker_low = *sorted.iter().find(|s| **s >= low_fence).unwrap();
        let whisker_high = *sorted.iter().rev().find(|s| **s <= high_fence).unwrap();
        let mean = sorted.iter().fold(Score::zero(), |acc, s| acc + s) / Score::from_integer(n as i64);
        let outliers = per_flow
            .iter()
            .filter(|(_, s)| *s < low_fence || *s > high_fence)
            .cloned()
            .collect();
        ScoreDistribution {
            summary: DistributionSummary {
                min: sorted[0],
                q1,
                median,
                q3,
                max: sorted[n - 1],
                mean,
                whisker_low,
                whisker_high,
            },
            per_flow,
            outliers,
        }
    }

    pub fn min(&self) -> Score {
        self.summary.min
    }

    pub fn mean(&self) -> Score {
        self.summary.mean
    }
}

/// Exact quantile at fraction `num/den` of the sorted data, linear
/// interpolation between closest ranks.
fn quantile(sorted: &[Score], num: i64, den: i64) -> Score {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = Score::new((n as i64 - 1) * num, den);
    let lo = pos.floor().to_integer() as usize;
    let frac = pos - pos.floor();
    if frac.is_zero() || lo + 1 >= n {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Flow-CSC distribution across the whole catalog.
pub fn network_csc_score(
    catalog: &CutSetCatalog,
    a: &Assignment,
) -> Result<ScoreDistribution, ScoreError> {
    let entries = catalog.entries();
    if entries.is_empty() {
        return Err(ScoreError::NoFlows);
    }
    let per_flow: Result<Vec<(Flow, Score)>, ScoreError> = entries
        .par_iter()
        .map(|(flow, sets)| flow_csc_score(sets, a).map(|s| (*flow, s)))
        .collect();
    Ok(ScoreDistribution::from_scores(per_flow?))
}

/// Number of `k` shortest paths the PSD score inspects per flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PsdConfig {
    k: usize,
}

impl PsdConfig {
    pub fn new(k: usize) -> Option<Self> {
        (k >= 1).then_some(PsdConfig { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Default for PsdConfig {
    fn default() -> Self {
        PsdConfig { k: 10 }
    }
}

/// Reciprocal of the number of distinct manufacturers among the path's
/// intermediate nodes. Endpoints are excluded: their failure fails the flow
/// no matter who made them.
pub fn path_psd_score(path: &[NodeIdx], a: &Assignment) -> Result<Score, ScoreError> {
    if path.len() < 3 {
        return Err(ScoreError::PathTooShort(path.len()));
    }
    let mut seen = 0u64;
    for &v in &path[1..path.len() - 1] {
        let c = a
            .manufacturer_of(v)
            .ok_or(ScoreError::UnassignedNode(v))?;
        seen |= 1 << c;
    }
    Ok(Score::new(1, seen.count_ones() as i64))
}

/// Sum of path-PSD scores over the k shortest paths, counting each distinct
/// manufacturer set once.
pub fn flow_psd_score(
    t: &Topology,
    f: Flow,
    a: &Assignment,
    cfg: PsdConfig,
) -> Result<Score, ScoreError> {
    let paths = k_shortest_paths(t, f, cfg.k);
    if paths.is_empty() {
        return Err(ScoreError::NoPath);
    }
    let mut seen_sets: Vec<u64> = Vec::new();
    let mut total = Score::zero();
    for path in &paths {
        let mut mask = 0u64;
        for &v in &path[1..path.len() - 1] {
            let c = a
                .manufacturer_of(v)
                .ok_or(ScoreError::UnassignedNode(v))?;
            mask |= 1 << c;
        }
        if mask == 0 {
            continue; // one-hop path: no intermediates, no diversity signal
        }
        if !seen_sets.contains(&mask) {
            seen_sets.push(mask);
            total += Score::new(1, mask.count_ones() as i64);
        }
    }
    Ok(total)
}

/// Arithmetic mean of the flow-PSD scores.
pub fn network_psd_score(
    t: &Topology,
    flows: &[Flow],
    a: &Assignment,
    cfg: PsdConfig,
) -> Result<Score, ScoreError> {
    if flows.is_empty() {
        return Err(ScoreError::NoFlows);
    }
    let scores: Result<Vec<Score>, ScoreError> = flows
        .par_iter()
        .map(|&f| flow_psd_score(t, f, a, cfg))
        .collect();
    let scores = scores?;
    let sum = scores.iter().fold(Score::zero(), |acc, s| acc + s);
    Ok(sum / Score::from_integer(scores.len() as i64))
}

/// Render an exact score as a short decimal for reports.
pub fn score_to_f64(s: Score) -> f64 {
    *s.numer() as f64 / *s.denom() as f64
}

/// Assignment cost under per-manufacturer node prices.
pub fn assignment_cost(a: &Assignment, costs: &[Rational64]) -> Rational64 {
    a.colors()
        .iter()
        .map(|&c| costs[c as usize])
        .fold(Rational64::zero(), |acc, c| acc + c)
}

#[allow(dead_code)]
fn is_nonnegative(s: &Score) -> bool {
    !s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;

    fn mcs(nodes: &[NodeIdx]) -> MinimalCutSet {
        MinimalCutSet {
            nodes: nodes.to_vec(),
            flow: Flow::new(98, 99),
        }
    }

    #[test]
    fn single_manufacturer_penalized_to_zero() {
        let a = Assignment::new(vec![0, 0, 0, 0], 4).unwrap();
        assert_eq!(mcs_csc_score(&mcs(&[0, 1, 2]), &a).unwrap(), Score::zero());
    }

    #[test]
    fn two_of_three_scores_two_thirds() {
        let a = Assignment::new(vec![0, 1, 1], 4).unwrap();
        assert_eq!(
            mcs_csc_score(&mcs(&[0, 1, 2]), &a).unwrap(),
            Score::new(2, 3)
        );
    }

    #[test]
    fn fully_diverse_scores_one() {
        let a = Assignment::new(vec![0, 1, 2, 3], 4).unwrap();
        assert_eq!(mcs_csc_score(&mcs(&[0, 1, 2, 3]), &a).unwrap(), Score::one());
    }

    #[test]
    fn unassigned_node_is_an_error() {
        let a = Assignment::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            mcs_csc_score(&mcs(&[0, 5]), &a),
            Err(ScoreError::UnassignedNode(5))
        ));
    }

    #[test]
    fn flow_score_is_minimum() {
        let a = Assignment::new(vec![0, 1, 1, 0], 2).unwrap();
        let sets = vec![mcs(&[0, 1]), mcs(&[1, 2])]; // scores 1 and 0
        assert_eq!(flow_csc_score(&sets, &a).unwrap(), Score::zero());
        assert!(matches!(
            flow_csc_score(&[], &a),
            Err(ScoreError::EmptyMcsList)
        ));
    }

    #[test]
    fn flow_score_all_diverse_is_one() {
        let a = Assignment::new(vec![0, 1, 2, 3], 4).unwrap();
        let sets = vec![mcs(&[0, 1]), mcs(&[2, 3]), mcs(&[1, 2])];
        assert_eq!(flow_csc_score(&sets, &a).unwrap(), Score::one());
    }

    #[test]
    fn degenerate_distribution_at_zero() {
        let flows: Vec<(Flow, Score)> = (0..5u32)
            .map(|i| (Flow::new(i, i + 10), Score::zero()))
            .collect();
        let d = ScoreDistribution::from_scores(flows);
        assert_eq!(d.summary.min, Score::zero());
        assert_eq!(d.summary.max, Score::zero());
        assert_eq!(d.summary.mean, Score::zero());
        assert!(d.outliers.is_empty());
    }

    #[test]
    fn summary_is_ordered() {
        let scores = [2, 5, 9, 1, 7, 3, 3]
            .iter()
            .enumerate()
            .map(|(i, &s)| (Flow::new(i as u32, 90 + i as u32), Score::new(s, 10)))
            .collect();
        let d = ScoreDistribution::from_scores(scores);
        let s = &d.summary;
        assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
        // mean recomputable from the per-flow scores
        let mean = d
            .per_flow
            .iter()
            .fold(Score::zero(), |acc, (_, v)| acc + v)
            / Score::from_integer(d.per_flow.len() as i64);
        assert_eq!(mean, s.mean);
    }

    #[test]
    fn path_psd_uniform_intermediates() {
        let a = Assignment::new(vec![2, 0, 0, 0, 3], 4).unwrap();
        // endpoints have other manufacturers; intermediates all share one
        assert_eq!(path_psd_score(&[0, 1, 2, 3, 4], &a).unwrap(), Score::one());
    }

    #[test]
    fn path_psd_two_manufacturers() {
        let a = Assignment::new(vec![2, 1, 0, 0, 3], 4).unwrap();
        assert_eq!(
            path_psd_score(&[0, 1, 2, 3, 4], &a).unwrap(),
            Score::new(1, 2)
        );
    }

    #[test]
    fn path_psd_needs_intermediates() {
        let a = Assignment::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            path_psd_score(&[0, 1], &a),
            Err(ScoreError::PathTooShort(2))
        ));
    }

    #[test]
    fn flow_psd_dedups_manufacturer_sets() {
        // diamond: two 2-hop paths a-b-d and a-c-d with the same color
        let t = Topology::new(
            "diamond",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")],
        )
        .unwrap();
        let f = Flow::new(t.index_of("a").unwrap(), t.index_of("d").unwrap());
        let a = Assignment::new(vec![0, 1, 1, 0], 2).unwrap();
        let cfg = PsdConfig::default();
        // both paths have manufacturer set {1}: counted once, score 1
        assert_eq!(flow_psd_score(&t, f, &a, cfg).unwrap(), Score::one());
        let b = Assignment::new(vec![0, 1, 0, 0], 2).unwrap();
        // sets {1} and {0}: 1 + 1 = 2
        assert_eq!(
            flow_psd_score(&t, f, &b, cfg).unwrap(),
            Score::from_integer(2)
        );
    }

    #[test]
    fn network_psd_mean() {
        let t = Topology::new(
            "path",
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        let flows = crate::graph::enumerate_flows(&t);
        let a = Assignment::new(vec![0, 1, 0], 2).unwrap();
        let s = network_psd_score(&t, &flows, &a, PsdConfig::default()).unwrap();
        assert_eq!(s, Score::one()); // one flow, one path through b
    }
}
