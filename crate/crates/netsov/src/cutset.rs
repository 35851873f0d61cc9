//! Minimal cut set enumeration.
//!
//! A minimal cut set (MCS) of a flow is an inclusion-minimal set of
//! intermediate nodes whose joint failure disconnects the flow's endpoints.
//! Equivalently, a minimal s-t vertex separator. The enumerator works
//! graph-wide: it generates every minimal separator of the topology by
//! close-separator expansion (Berry, Bordat, Cogis), then assigns each
//! separator to the flows it actually separates, which avoids redoing the
//! expansion once per flow.

use crate::graph::{Flow, NodeIdx, Topology};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CutsetError {
    #[error("graph has {nodes} nodes, brute-force oracle is capped at {cap}")]
    TooLargeForOracle { nodes: usize, cap: usize },
    #[error("catalog is empty")]
    EmptyCatalog,
}

/// A minimal set of intermediate nodes whose joint failure cuts `flow`.
///
/// Invariants: never contains the flow endpoints, removing `nodes`
/// disconnects the endpoints, and no proper subset does.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MinimalCutSet {
    /// Member nodes, sorted ascending.
    pub nodes: Vec<NodeIdx>,
    pub flow: Flow,
}

impl MinimalCutSet {
    pub fn cardinality(&self) -> usize {
        self.nodes.len()
    }

    pub fn labels(&self, t: &Topology) -> Vec<String> {
        self.nodes
            .iter()
            .map(|&v| t.node_id(v).to_string())
            .collect()
    }
}

/// Per-flow families of minimal cut sets, each family sorted by
/// (cardinality, lexicographic node sequence). The same node set may appear
/// under several flows; flow-level scores are defined per flow.
#[derive(Debug, Clone)]
pub struct CutSetCatalog {
    entries: Vec<(Flow, Vec<MinimalCutSet>)>,
}

impl CutSetCatalog {
    /// Enumerate the full catalog for `flows` on `t`.
    pub fn build(t: &Topology, flows: &[Flow]) -> Self {
        let separators = all_minimal_separators(t);
        let entries: Vec<(Flow, Vec<MinimalCutSet>)> = flows
            .par_iter()
            .map(|&flow| {
                let mut sets: Vec<MinimalCutSet> = separators
                    .iter()
                    .filter(|s| separates(t, s, flow))
                    .map(|s| MinimalCutSet {
                        nodes: s.clone(),
                        flow,
                    })
                    .collect();
                sort_family(&mut sets);
                (flow, sets)
            })
            .collect();
        CutSetCatalog { entries }
    }

    pub fn from_entries(entries: Vec<(Flow, Vec<MinimalCutSet>)>) -> Self {
        CutSetCatalog { entries }
    }

    pub fn flows(&self) -> impl Iterator<Item = Flow> + '_ {
        self.entries.iter().map(|(f, _)| *f)
    }

    pub fn entries(&self) -> &[(Flow, Vec<MinimalCutSet>)] {
        &self.entries
    }

    pub fn sets_for(&self, flow: Flow) -> Option<&[MinimalCutSet]> {
        self.entries
            .iter()
            .find(|(f, _)| *f == flow)
            .map(|(_, s)| s.as_slice())
    }

    /// Every MCS of every flow, in catalog order.
    pub fn iter_all(&self) -> impl Iterator<Item = &MinimalCutSet> {
        self.entries.iter().flat_map(|(_, s)| s.iter())
    }

    pub fn total_sets(&self) -> usize {
        self.entries.iter().map(|(_, s)| s.len()).sum()
    }

    /// Unique node sets across all flows.
    pub fn dedup_sets(&self) -> BTreeSet<Vec<NodeIdx>> {
        self.iter_all().map(|m| m.nodes.clone()).collect()
    }
}

fn sort_family(sets: &mut [MinimalCutSet]) {
    sets.sort_by(|a, b| {
        a.nodes
            .len()
            .cmp(&b.nodes.len())
            .then_with(|| a.nodes.cmp(&b.nodes))
    });
}

/// All minimal s-t vertex separators for one flow, complete and
/// duplicate-free, sorted by (cardinality, lexicographic node sequence).
pub fn enumerate_mcs(t: &Topology, f: Flow) -> Vec<MinimalCutSet> {
    let mut sets: Vec<MinimalCutSet> = all_minimal_separators(t)
        .into_iter()
        .filter(|s| separates(t, s, f))
        .map(|nodes| MinimalCutSet { nodes, flow: f })
        .collect();
    sort_family(&mut sets);
    sets
}

/// Every minimal separator of the graph, by close-separator expansion:
/// seed with the component neighborhoods of `G - N[v]` for each vertex `v`,
/// then repeatedly push each separator past one of its members. Candidates
/// are verified (two full components) before being kept.
fn all_minimal_separators(t: &Topology) -> Vec<Vec<NodeIdx>> {
    let n = t.node_count();
    let mut found: BTreeSet<Vec<NodeIdx>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<NodeIdx>> = VecDeque::new();

    let offer = |cand: Vec<NodeIdx>,
                     found: &mut BTreeSet<Vec<NodeIdx>>,
                     queue: &mut VecDeque<Vec<NodeIdx>>| {
        if cand.is_empty() || found.contains(&cand) {
            return;
        }
        if is_minimal_separator(t, &cand) {
            found.insert(cand.clone());
            queue.push_back(cand);
        }
    };

    // Close separators: neighborhoods of the components left by deleting a
    // closed neighborhood.
    for v in 0..n as NodeIdx {
        let mut removed = vec![false; n];
        removed[v as usize] = true;
        for &w in t.neighbors(v) {
            removed[w as usize] = true;
        }
        for comp in components(t, &removed) {
            offer(neighborhood(t, &comp), &mut found, &mut queue);
        }
    }
    // Expansion.
    while let Some(sep) = queue.pop_front() {
        for &x in &sep {
            let mut removed = vec![false; n];
            for &s in &sep {
                removed[s as usize] = true;
            }
            for &w in t.neighbors(x) {
                removed[w as usize] = true;
            }
            for comp in components(t, &removed) {
                offer(neighborhood(t, &comp), &mut found, &mut queue);
            }
        }
    }
    found.into_iter().collect()
}

/// Components of the graph induced on nodes not marked `removed`,
/// each returned as a sorted node list.
fn components(t: &Topology, removed: &[bool]) -> Vec<Vec<NodeIdx>> {
    let n = t.node_count();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start as NodeIdx]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in t.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn neighborhood(t: &Topology, comp: &[NodeIdx]) -> Vec<NodeIdx> {
    let mut inside = vec![false; t.node_count()];
    for &v in comp {
        inside[v as usize] = true;
    }
    let mut nb = BTreeSet::new();
    for &v in comp {
        for &w in t.neighbors(v) {
            if !inside[w as usize] {
                nb.insert(w);
            }
        }
    }
    nb.into_iter().collect()
}

/// A set is a minimal separator iff at least two components of `G - S` see
/// all of `S` (full components).
fn is_minimal_separator(t: &Topology, sep: &[NodeIdx]) -> bool {
    full_components(t, sep).len() >= 2
}

/// Components of `G - sep` whose neighborhood is exactly `sep`.
fn full_components(t: &Topology, sep: &[NodeIdx]) -> Vec<Vec<NodeIdx>> {
    let mut removed = vec![false; t.node_count()];
    for &v in sep {
        removed[v as usize] = true;
    }
    components(t, &removed)
        .into_iter()
        .filter(|c| neighborhood(t, c) == sep)
        .collect()
}

/// Does `sep` minimally separate the flow endpoints? True iff the endpoints
/// land in two distinct components of `G - sep` and both components are
/// full. (A non-full endpoint component would admit a strictly smaller
/// separator for this flow.)
fn separates(t: &Topology, sep: &[NodeIdx], f: Flow) -> bool {
    if sep.binary_search(&f.src).is_ok() || sep.binary_search(&f.dst).is_ok() {
        return false;
    }
    let mut removed = vec![false; t.node_count()];
    for &v in sep {
        removed[v as usize] = true;
    }
    let comps = components(t, &removed);
    let find = |v: NodeIdx| comps.iter().position(|c| c.binary_search(&v).is_ok());
    let (Some(ci), Some(cj)) = (find(f.src), find(f.dst)) else {
        return false;
    };
    if ci == cj {
        return false;
    }
    neighborhood(t, &comps[ci]) == sep && neighborhood(t, &comps[cj]) == sep
}

/// Brute-force oracle: scan every subset of intermediate nodes in ascending
/// cardinality, keep the cuts whose proper subsets are not cuts. Guarded by
/// `max_nodes` (pass `None` for the default cap of 16).
pub fn brute_force_mcs(
    t: &Topology,
    f: Flow,
    max_nodes: Option<usize>,
) -> Result<Vec<MinimalCutSet>, CutsetError> {
    let cap = max_nodes.unwrap_or(16);
    let n = t.node_count();
    if n > cap {
        return Err(CutsetError::TooLargeForOracle { nodes: n, cap });
    }
    let inter: Vec<NodeIdx> = (0..n as NodeIdx)
        .filter(|&v| v != f.src && v != f.dst)
        .collect();
    let mut cuts: Vec<Vec<NodeIdx>> = Vec::new();
    // Subsets in ascending size so that supersets of found cuts can be
    // skipped; whatever survives is minimal by construction.
    for size in 1..=inter.len() {
        let mut chosen: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<NodeIdx> = chosen.iter().map(|&i| inter[i]).collect();
            let dominated = cuts.iter().any(|c| is_subset(c, &subset));
            if !dominated && cuts_flow(t, &subset, f) {
                cuts.push(subset);
            }
            if !next_combination(&mut chosen, inter.len()) {
                break;
            }
        }
    }
    let mut sets: Vec<MinimalCutSet> = cuts
        .into_iter()
        .map(|nodes| MinimalCutSet { nodes, flow: f })
        .collect();
    sort_family(&mut sets);
    Ok(sets)
}

/// Advance `chosen` to the next k-combination of `0..n`; false when done.
fn next_combination(chosen: &mut [usize], n: usize) -> bool {
    let k = chosen.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if chosen[i] != i + n - k {
            chosen[i] += 1;
            for j in i + 1..k {
                chosen[j] = chosen[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn is_subset(a: &[NodeIdx], b: &[NodeIdx]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn cuts_flow(t: &Topology, subset: &[NodeIdx], f: Flow) -> bool {
    let alive: Vec<bool> = (0..t.node_count() as NodeIdx)
        .map(|v| subset.binary_search(&v).is_err())
        .collect();
    !crate::graph::is_connected_subgraph(t, &alive, f)
}

/// Catalog statistics under both counting conventions: per flow (every
/// flow's cut sets counted individually) and deduplicated (unique node sets
/// across the network).
#[derive(Debug, Clone, Serialize)]
pub struct CatalogStats {
    pub flow_count: usize,
    pub per_flow_counts: Vec<(Flow, usize)>,
    pub total_per_flow: usize,
    pub total_dedup: usize,
    pub histogram_per_flow: BTreeMap<usize, usize>,
    pub histogram_dedup: BTreeMap<usize, usize>,
    pub mean_cardinality_per_flow: f64,
    pub mean_cardinality_dedup: f64,
    pub max_cardinality: usize,
}

pub fn catalog_stats(catalog: &CutSetCatalog) -> Result<CatalogStats, CutsetError> {
    if catalog.total_sets() == 0 {
        return Err(CutsetError::EmptyCatalog);
    }
    let mut histogram_per_flow: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_flow_counts = Vec::new();
    for (flow, sets) in catalog.entries() {
        per_flow_counts.push((*flow, sets.len()));
        for s in sets {
            *histogram_per_flow.entry(s.cardinality()).or_default() += 1;
        }
    }
    let dedup = catalog.dedup_sets();
    let mut histogram_dedup: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &dedup {
        *histogram_dedup.entry(s.len()).or_default() += 1;
    }
    let total_per_flow = histogram_per_flow.values().sum::<usize>();
    let total_dedup = dedup.len();
    let sum_pf: usize = histogram_per_flow.iter().map(|(c, n)| c * n).sum();
    let sum_dd: usize = histogram_dedup.iter().map(|(c, n)| c * n).sum();
    Ok(CatalogStats {
        flow_count: catalog.entries().len(),
        per_flow_counts,
        total_per_flow,
        total_dedup,
        max_cardinality: histogram_per_flow.keys().max().copied().unwrap_or(0),
        mean_cardinality_per_flow: sum_pf as f64 / total_per_flow as f64,
        mean_cardinality_dedup: sum_dd as f64 / total_dedup as f64,
        histogram_per_flow,
        histogram_dedup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn single_cut_vertex() {
        let t = path3();
        let f = Flow::new(t.index_of("a").unwrap(), t.index_of("c").unwrap());
        let mcs = enumerate_mcs(&t, f);
        assert_eq!(mcs.len(), 1);
        assert_eq!(mcs[0].labels(&t), ["b"]);
        let oracle = brute_force_mcs(&t, f, None).unwrap();
        assert_eq!(mcs, oracle);
    }

    #[test]
    fn complete_graph_k4() {
        let t = Topology::new(
            "k4",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[
                ("a", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "d"),
            ],
        )
        .unwrap();
        // all pairs adjacent: no flows, but the oracle can still be asked
        // about a hypothetical pair; with an edge present nothing cuts it.
        let f = Flow::new(0, 1);
        let oracle = brute_force_mcs(&t, f, None).unwrap();
        assert!(oracle.is_empty());
        // remove the direct edge: the two remaining nodes are the only MCS
        let t2 = Topology::new(
            "k4-minus",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        let mcs = enumerate_mcs(&t2, f);
        assert_eq!(mcs.len(), 1);
        assert_eq!(mcs[0].labels(&t2), ["c", "d"]);
        assert_eq!(mcs, brute_force_mcs(&t2, f, None).unwrap());
    }

    #[test]
    fn oracle_size_guard() {
        let nodes: Vec<String> = (0..20).map(|i| format!("n{i:02}")).collect();
        let edges: Vec<(String, String)> = (0..19)
            .map(|i| (format!("n{i:02}"), format!("n{:02}", i + 1)))
            .collect();
        let t = Topology::new("chain", nodes, &edges).unwrap();
        let f = Flow::new(0, 19);
        assert!(matches!(
            brute_force_mcs(&t, f, None),
            Err(CutsetError::TooLargeForOracle { .. })
        ));
    }

    #[test]
    fn every_returned_set_satisfies_invariants() {
        // ladder graph: enough structure to exercise multi-node separators
        let t = Topology::new(
            "ladder",
            (0..8).map(|i| format!("v{i}")).collect(),
            &[
                ("v0", "v1"),
                ("v2", "v3"),
                ("v4", "v5"),
                ("v6", "v7"),
                ("v0", "v2"),
                ("v2", "v4"),
                ("v4", "v6"),
                ("v1", "v3"),
                ("v3", "v5"),
                ("v5", "v7"),
            ],
        )
        .unwrap();
        for f in crate::graph::enumerate_flows(&t) {
            for m in enumerate_mcs(&t, f) {
                assert!(!m.nodes.contains(&f.src) && !m.nodes.contains(&f.dst));
                assert!(cuts_flow(&t, &m.nodes, f), "not a cut: {:?}", m.nodes);
                for drop in &m.nodes {
                    let reduced: Vec<NodeIdx> =
                        m.nodes.iter().copied().filter(|v| v != drop).collect();
                    assert!(
                        !cuts_flow(&t, &reduced, f),
                        "not minimal: {:?} minus {drop}",
                        m.nodes
                    );
                }
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let t = path3();
        let flows = crate::graph::enumerate_flows(&t);
        let c1 = CutSetCatalog::build(&t, &flows);
        let c2 = CutSetCatalog::build(&t, &flows);
        let v1: Vec<_> = c1.iter_all().collect();
        let v2: Vec<_> = c2.iter_all().collect();
        assert_eq!(v1, v2);
    }

    #[test]
    fn stats_single_flow() {
        let t = path3();
        let flows = crate::graph::enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let stats = catalog_stats(&catalog).unwrap();
        assert_eq!(stats.total_per_flow, 1);
        assert_eq!(stats.mean_cardinality_per_flow, 1.0);
        assert_eq!(stats.max_cardinality, 1);
    }

    #[test]
    fn stats_reject_empty() {
        let t = Topology::new(
            "k3",
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap();
        let catalog = CutSetCatalog::build(&t, &[]);
        assert!(matches!(
            catalog_stats(&catalog),
            Err(CutsetError::EmptyCatalog)
        ));
    }
}
