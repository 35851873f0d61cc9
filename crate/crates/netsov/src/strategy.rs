//! Baseline manufacturer assignments to compare the optimizer against:
//! centrality round-robin (spread the important nodes across vendors),
//! a greedy pass over the cut-set catalog, and externally produced
//! assignments loaded from CSV.

use crate::cutset::CutSetCatalog;
use crate::graph::{centrality_exact, CentralityKind, NodeIdx, Topology};
use crate::score::Assignment;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("assignment row {0}: expected `node,manufacturer`")]
    MalformedRow(usize),
    #[error("assignment header must be `node,manufacturer`, got `{0}`")]
    BadHeader(String),
    #[error("unknown node `{0}` in assignment")]
    UnknownNode(String),
    #[error("node `{0}` assigned more than once")]
    DuplicateNode(String),
    #[error("node `{0}` missing from assignment")]
    MissingNode(String),
    #[error("node `{node}`: manufacturer id {id} out of range (market has {m})")]
    ManufacturerOutOfRange { node: String, id: u32, m: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    CentralityNd,
    CentralityBwc,
    CentralityCc,
    MinCutSetGreedy,
    Loaded,
}

impl StrategyKind {
    pub const BUILTIN: [StrategyKind; 4] = [
        StrategyKind::CentralityNd,
        StrategyKind::CentralityBwc,
        StrategyKind::CentralityCc,
        StrategyKind::MinCutSetGreedy,
    ];
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StrategyKind::CentralityNd => "nd",
            StrategyKind::CentralityBwc => "bwc",
            StrategyKind::CentralityCc => "cc",
            StrategyKind::MinCutSetGreedy => "greedy",
            StrategyKind::Loaded => "loaded",
        };
        f.write_str(s)
    }
}

/// Sort nodes by centrality descending (ties: node ID ascending) and deal
/// them round-robin across the `m` manufacturers.
pub fn centrality_assignment(t: &Topology, kind: CentralityKind, m: u32) -> Assignment {
    assert!(m >= 1, "need at least one manufacturer");
    let values = centrality_exact(t, kind);
    let mut order: Vec<NodeIdx> = (0..t.node_count() as NodeIdx).collect();
    // node index order is lexicographic ID order, so a stable sort on the
    // descending value keeps the ID tie-break
    order.sort_by(|&a, &b| values[b as usize].cmp(&values[a as usize]));
    let mut colors = vec![0u32; t.node_count()];
    for (pos, &v) in order.iter().enumerate() {
        colors[v as usize] = (pos % m as usize) as u32;
    }
    Assignment::new(colors, m).expect("round-robin ids are in range")
}

/// Greedy pass over the cut sets, most fragile first: process the distinct
/// cut sets in ascending (cardinality, node sequence) order; inside each,
/// give every still-unassigned node the manufacturer least represented in
/// that cut set (ties: lowest ID). Whatever remains unassigned afterwards
/// gets the globally least-used manufacturer.
///
/// Cost is deliberately ignored here; only the optimizer enforces the
/// budget. Callers can check the resulting cost and warn.
pub fn min_cutset_greedy(t: &Topology, catalog: &CutSetCatalog, m: u32) -> Assignment {
    assert!(m >= 1, "need at least one manufacturer");
    let mut sets: Vec<Vec<NodeIdx>> = catalog.dedup_sets().into_iter().collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut colors: Vec<Option<u32>> = vec![None; t.node_count()];
    for set in &sets {
        let mut counts = vec![0usize; m as usize];
        for &v in set {
            if let Some(c) = colors[v as usize] {
                counts[c as usize] += 1;
            }
        }
        for &v in set {
            if colors[v as usize].is_some() {
                continue;
            }
            let pick = least_used(&counts);
            colors[v as usize] = Some(pick);
            counts[pick as usize] += 1;
        }
    }
    let mut global = vec![0usize; m as usize];
    for c in colors.iter().flatten() {
        global[*c as usize] += 1;
    }
    for slot in colors.iter_mut() {
        if slot.is_none() {
            let pick = least_used(&global);
            *slot = Some(pick);
            global[pick as usize] += 1;
        }
    }
    let colors: Vec<u32> = colors.into_iter().map(|c| c.unwrap()).collect();
    Assignment::new(colors, m).expect("greedy ids are in range")
}

fn least_used(counts: &[usize]) -> u32 {
    let mut best = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        if c < counts[best] {
            best = i;
        }
    }
    best as u32
}

/// Parse an assignment CSV (`node,manufacturer` header, one row per node)
/// and validate it against the topology and manufacturer count.
pub fn load_assignment(text: &str, t: &Topology, m: u32) -> Result<Assignment, StrategyError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| StrategyError::BadHeader(String::new()))?;
    if header.trim() != "node,manufacturer" {
        return Err(StrategyError::BadHeader(header.trim().to_string()));
    }
    let mut seen: BTreeMap<NodeIdx, u32> = BTreeMap::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (node, manu) = line
            .split_once(',')
            .ok_or(StrategyError::MalformedRow(lineno + 1))?;
        let node = node.trim();
        let id: u32 = manu
            .trim()
            .parse()
            .map_err(|_| StrategyError::MalformedRow(lineno + 1))?;
        let v = t
            .index_of(node)
            .ok_or_else(|| StrategyError::UnknownNode(node.to_string()))?;
        if id >= m {
            return Err(StrategyError::ManufacturerOutOfRange {
                node: node.to_string(),
                id,
                m,
            });
        }
        if seen.insert(v, id).is_some() {
            return Err(StrategyError::DuplicateNode(node.to_string()));
        }
    }
    let mut colors = Vec::with_capacity(t.node_count());
    for v in 0..t.node_count() as NodeIdx {
        match seen.get(&v) {
            Some(&c) => colors.push(c),
            None => return Err(StrategyError::MissingNode(t.node_id(v).to_string())),
        }
    }
    Ok(Assignment::new(colors, m).expect("validated above"))
}

/// Render an assignment as the CSV format accepted by [`load_assignment`]
/// (UTF-8, LF line endings).
pub fn save_assignment(t: &Topology, a: &Assignment) -> String {
    let mut out = String::from("node,manufacturer\n");
    for v in 0..t.node_count() as NodeIdx {
        out.push_str(&format!(
            "{},{}\n",
            t.node_id(v),
            a.manufacturer_of(v).expect("assignment is total")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_flows;

    fn path5() -> Topology {
        Topology::new(
            "path5",
            vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")],
        )
        .unwrap()
    }

    #[test]
    fn single_manufacturer_everything_zero() {
        let t = path5();
        let a = centrality_assignment(&t, CentralityKind::NodalDegree, 1);
        assert!(a.colors().iter().all(|&c| c == 0));
    }

    #[test]
    fn round_robin_group_sizes_balanced() {
        let t = path5();
        for kind in [
            CentralityKind::NodalDegree,
            CentralityKind::Betweenness,
            CentralityKind::Closeness,
        ] {
            for m in 1..=4 {
                let a = centrality_assignment(&t, kind, m);
                let sizes: Vec<usize> = a.groups().iter().map(|g| g.len()).collect();
                let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
                assert!(hi - lo <= 1, "{kind:?} m={m}: sizes {sizes:?}");
            }
        }
    }

    #[test]
    fn strategies_are_deterministic() {
        let t = path5();
        let a1 = centrality_assignment(&t, CentralityKind::Betweenness, 3);
        let a2 = centrality_assignment(&t, CentralityKind::Betweenness, 3);
        assert_eq!(a1, a2);
    }

    #[test]
    fn greedy_single_manufacturer() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let a = min_cutset_greedy(&t, &catalog, 1);
        assert!(a.colors().iter().all(|&c| c == 0));
    }

    #[test]
    fn greedy_diversifies_adjacent_cut_vertices() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let a = min_cutset_greedy(&t, &catalog, 2);
        // every 2-node cut set must see both manufacturers
        for set in catalog.dedup_sets() {
            if set.len() == 2 {
                let c0 = a.manufacturer_of(set[0]).unwrap();
                let c1 = a.manufacturer_of(set[1]).unwrap();
                assert_ne!(c0, c1, "cut set {set:?} is monochrome");
            }
        }
    }

    #[test]
    fn greedy_no_worse_than_monochrome() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        for m in 1..=3 {
            let a = min_cutset_greedy(&t, &catalog, m);
            for set in catalog.dedup_sets() {
                let distinct: std::collections::BTreeSet<u32> = set
                    .iter()
                    .map(|&v| a.manufacturer_of(v).unwrap())
                    .collect();
                assert!(!distinct.is_empty());
            }
        }
    }

    #[test]
    fn load_and_save_round_trip() {
        let t = path5();
        let csv = "node,manufacturer\na,0\nb,1\nc,2\nd,0\ne,1\n";
        let a = load_assignment(csv, &t, 3).unwrap();
        assert_eq!(save_assignment(&t, &a), csv);
    }

    #[test]
    fn load_rejects_missing_node() {
        let t = path5();
        let csv = "node,manufacturer\na,0\nb,1\nc,2\nd,0\n";
        match load_assignment(csv, &t, 3) {
            Err(StrategyError::MissingNode(n)) => assert_eq!(n, "e"),
            other => panic!("expected MissingNode, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_out_of_range_manufacturer() {
        let t = path5();
        let csv = "node,manufacturer\na,0\nb,1\nc,3\nd,0\ne,1\n";
        assert!(matches!(
            load_assignment(csv, &t, 3),
            Err(StrategyError::ManufacturerOutOfRange { id: 3, .. })
        ));
    }

    #[test]
    fn load_rejects_unknown_node() {
        let t = path5();
        let csv = "node,manufacturer\nzz,0\n";
        assert!(matches!(
            load_assignment(csv, &t, 3),
            Err(StrategyError::UnknownNode(_))
        ));
    }

    #[test]
    fn load_rejects_duplicate() {
        let t = path5();
        let csv = "node,manufacturer\na,0\na,1\n";
        assert!(matches!(
            load_assignment(csv, &t, 3),
            Err(StrategyError::DuplicateNode(_))
        ));
    }
}
