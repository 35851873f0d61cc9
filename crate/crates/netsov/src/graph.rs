//! Topology model and graph primitives: SNDlib ingestion, flow enumeration,
//! centralities, k-shortest paths and connectivity queries.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything here is safe to share across threads.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Index of a node inside a [`Topology`]. Node indices follow the
/// lexicographic order of the node IDs, so index order doubles as the
/// canonical tie-breaking order everywhere downstream.
pub type NodeIdx = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("link `{link}` references unknown node `{node}`")]
    UnknownNode { link: String, node: String },
    #[error("link `{link}` is a self-loop on `{node}`")]
    SelfLoop { link: String, node: String },
    #[error("topology has no nodes")]
    Empty,
    #[error("graph is not connected ({0} components)")]
    Disconnected(usize),
    #[error("malformed SNDlib input: {0}")]
    Malformed(String),
    #[error("degree-one pruning removed every node")]
    PrunedToNothing,
}

/// An undirected simple graph of named nodes. Connected by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    name: String,
    nodes: Vec<String>,
    adj: Vec<Vec<NodeIdx>>,
    edges: Vec<(NodeIdx, NodeIdx)>,
}

impl Topology {
    /// Build a topology from node IDs and named edges, validating the
    /// invariants: unique nodes, known endpoints, no self-loops, no
    /// duplicate edges (silently merged), connected.
    pub fn new<S: AsRef<str>>(
        name: &str,
        node_ids: Vec<String>,
        edge_list: &[(S, S)],
    ) -> Result<Self, GraphError> {
        if node_ids.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut nodes = node_ids;
        nodes.sort();
        for w in nodes.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateNode(w[0].clone()));
            }
        }
        let index: BTreeMap<&str, NodeIdx> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as NodeIdx))
            .collect();
        let mut edges = BTreeSet::new();
        for (a, b) in edge_list {
            let (a, b) = (a.as_ref(), b.as_ref());
            let link = format!("{a}-{b}");
            let ia = *index.get(a).ok_or_else(|| GraphError::UnknownNode {
                link: link.clone(),
                node: a.to_string(),
            })?;
            let ib = *index.get(b).ok_or_else(|| GraphError::UnknownNode {
                link: link.clone(),
                node: b.to_string(),
            })?;
            if ia == ib {
                return Err(GraphError::SelfLoop {
                    link,
                    node: a.to_string(),
                });
            }
            edges.insert((ia.min(ib), ia.max(ib)));
        }
        Self::from_indexed(name, nodes, edges.into_iter().collect())
    }

    fn from_indexed(
        name: &str,
        nodes: Vec<String>,
        edges: Vec<(NodeIdx, NodeIdx)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let t = Topology {
            name: name.to_string(),
            nodes,
            adj,
            edges,
        };
        let components = t.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected(components));
        }
        Ok(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node IDs in lexicographic order; position equals [`NodeIdx`].
    pub fn node_ids(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, v: NodeIdx) -> &str {
        &self.nodes[v as usize]
    }

    pub fn index_of(&self, id: &str) -> Option<NodeIdx> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(id))
            .ok()
            .map(|i| i as NodeIdx)
    }

    pub fn neighbors(&self, v: NodeIdx) -> &[NodeIdx] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: NodeIdx) -> usize {
        self.adj[v as usize].len()
    }

    /// Normalized edge list: `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(NodeIdx, NodeIdx)] {
        &self.edges
    }

    pub fn has_edge(&self, a: NodeIdx, b: NodeIdx) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut queue = VecDeque::from([start as NodeIdx]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Serialize back to the SNDlib native subset understood by
    /// [`parse_topology`]. Round-trips the node set and edge set.
    pub fn to_sndlib(&self) -> String {
        let mut out = String::new();
        out.push_str("?SNDlib native format; type: network; version: 1.0\n");
        out.push_str(&format!("# network {}\n\nNODES (\n", self.name));
        for n in &self.nodes {
            out.push_str(&format!("  {n} ( 0.00 0.00 )\n"));
        }
        out.push_str(")\n\nLINKS (\n");
        for &(a, b) in &self.edges {
            out.push_str(&format!(
                "  L_{a}_{b} ( {} {} ) 0.00 0.00 0.00 0.00 ( 0.00 0.00 )\n",
                self.node_id(a),
                self.node_id(b)
            ));
        }
        out.push_str(")\n");
        out
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (|V|={}, |E|={})",
            self.name,
            self.node_count(),
            self.edge_count()
        )
    }
}

/// An unordered source-destination pair demanding connectivity.
/// Only non-adjacent pairs qualify; one-hop flows have no intermediate
/// cut sets and are excluded when the flow set is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Flow {
    pub src: NodeIdx,
    pub dst: NodeIdx,
}

impl Flow {
    /// Canonical flow with `src < dst`. Panics if `a == b`.
    pub fn new(a: NodeIdx, b: NodeIdx) -> Self {
        assert!(a != b, "flow endpoints must differ");
        Flow {
            src: a.min(b),
            dst: a.max(b),
        }
    }

    pub fn label(&self, t: &Topology) -> String {
        format!("{}-{}", t.node_id(self.src), t.node_id(self.dst))
    }
}

/// Parse the SNDlib native-format subset: node IDs from the `NODES ( ... )`
/// section, undirected links from `linkId ( srcNode dstNode ) ...` lines in
/// the `LINKS ( ... )` section. Coordinates, capacities and any other
/// sections are ignored. The network name is taken from a `# network <name>`
/// comment when present.
pub fn parse_topology(text: &str) -> Result<Topology, GraphError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Nodes,
        Links,
        Other,
    }
    let mut section = Section::None;
    let mut name = String::from("network");
    let mut nodes: Vec<String> = Vec::new();
    let mut links: Vec<(String, String)> = Vec::new();

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('?') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(n) = rest.strip_prefix("network") {
                let n = n.trim();
                if !n.is_empty() {
                    name = n.to_string();
                }
            }
            continue;
        }
        if section == Section::None {
            let mut it = line.split_whitespace();
            match (it.next(), it.next()) {
                (Some("NODES"), Some("(")) => section = Section::Nodes,
                (Some("LINKS"), Some("(")) => section = Section::Links,
                (Some(_), Some("(")) => section = Section::Other,
                _ => {} // stray tokens between sections are ignored
            }
            continue;
        }
        if line == ")" {
            section = Section::None;
            continue;
        }
        match section {
            Section::Nodes => {
                let id = line
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| GraphError::Malformed(format!("bad node line `{raw}`")))?;
                nodes.push(id.to_string());
            }
            Section::Links => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                // linkId ( src dst ) ...
                if tokens.len() < 5 || tokens[1] != "(" || tokens[4] != ")" {
                    return Err(GraphError::Malformed(format!("bad link line `{raw}`")));
                }
                links.push((tokens[2].to_string(), tokens[3].to_string()));
            }
            _ => {}
        }
    }
    if section != Section::None {
        return Err(GraphError::Malformed("unterminated section".into()));
    }
    if nodes.is_empty() {
        return Err(GraphError::Malformed("no NODES section".into()));
    }
    Topology::new(&name, nodes, &links)
}

/// Iteratively strip degree-one nodes (and their incident edges) until none
/// remain. Each round removes every current degree-one node at once, so a
/// two-node graph empties out (an error) while a three-node path keeps its
/// middle node.
pub fn prune_degree_one(t: &Topology) -> Result<Topology, GraphError> {
    let mut keep: Vec<bool> = vec![true; t.node_count()];
    loop {
        let mut removed_any = false;
        let degree: Vec<usize> = (0..t.node_count())
            .map(|v| {
                if !keep[v] {
                    return 0;
                }
                t.neighbors(v as NodeIdx)
                    .iter()
                    .filter(|&&w| keep[w as usize])
                    .count()
            })
            .collect();
        for v in 0..t.node_count() {
            if keep[v] && degree[v] == 1 {
                keep[v] = false;
                removed_any = true;
            }
        }
        if !removed_any {
            break;
        }
    }
    let surviving: Vec<String> = t
        .node_ids()
        .iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(_, n)| n.clone())
        .collect();
    if surviving.is_empty() {
        return Err(GraphError::PrunedToNothing);
    }
    let edges: Vec<(String, String)> = t
        .edges()
        .iter()
        .filter(|(a, b)| keep[*a as usize] && keep[*b as usize])
        .map(|&(a, b)| (t.node_id(a).to_string(), t.node_id(b).to_string()))
        .collect();
    Topology::new(t.name(), surviving, &edges)
}

/// All unordered node pairs that are not adjacent, in lexicographic order
/// of node IDs (any-to-any traffic minus one-hop flows).
pub fn enumerate_flows(t: &Topology) -> Vec<Flow> {
    let n = t.node_count() as NodeIdx;
    let mut flows = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if !t.has_edge(a, b) {
                flows.push(Flow { src: a, dst: b });
            }
        }
    }
    flows
}

/// Centrality metric used by the round-robin assignment baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CentralityKind {
    NodalDegree,
    Betweenness,
    Closeness,
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CentralityKind::NodalDegree => "nodal-degree",
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::Closeness => "closeness",
        };
        f.write_str(s)
    }
}

/// Exact per-node centrality values, indexed by [`NodeIdx`].
///
/// * nodal degree: the degree count;
/// * betweenness: sum over unordered pairs `s < t` (excluding the node) of
///   the fraction of shortest `s`-`t` paths through the node;
/// * closeness: `(|V|-1)` divided by the sum of hop distances to all
///   other nodes.
///
/// Values are exact rationals so that equal-by-symmetry nodes compare equal
/// and downstream tie-breaking stays deterministic.
pub fn centrality_exact(t: &Topology, kind: CentralityKind) -> Vec<BigRational> {
    match kind {
        CentralityKind::NodalDegree => (0..t.node_count())
            .map(|v| BigRational::from_integer(BigInt::from(t.degree(v as NodeIdx))))
            .collect(),
        CentralityKind::Closeness => {
            let n = t.node_count();
            (0..n)
                .map(|v| {
                    let dist = bfs_distances(t, v as NodeIdx);
                    let total: u64 = dist.iter().map(|&d| d.unwrap() as u64).sum();
                    BigRational::new(BigInt::from(n as u64 - 1), BigInt::from(total.max(1)))
                })
                .collect()
        }
        CentralityKind::Betweenness => betweenness_exact(t),
    }
}

/// Centrality as `f64`, for reports and plotting.
pub fn centrality(t: &Topology, kind: CentralityKind) -> Vec<f64> {
    centrality_exact(t, kind)
        .into_iter()
        .map(|r| rational_to_f64(&r))
        .collect()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    num / den
}

/// Brandes' accumulation, kept exact: shortest-path counts are integers and
/// pair dependencies are accumulated as rationals.
fn betweenness_exact(t: &Topology) -> Vec<BigRational> {
    let n = t.node_count();
    let zero = BigRational::zero();
    let mut score = vec![zero.clone(); n];
    for s in 0..n as NodeIdx {
        // BFS from s with shortest-path counts.
        let mut dist: Vec<i64> = vec![-1; n];
        let mut sigma: Vec<BigInt> = vec![BigInt::zero(); n];
        let mut preds: Vec<Vec<NodeIdx>> = vec![Vec::new(); n];
        let mut order: Vec<NodeIdx> = Vec::with_capacity(n);
        dist[s as usize] = 0;
        sigma[s as usize] = BigInt::one();
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in t.neighbors(v) {
                if dist[w as usize] < 0 {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
                if dist[w as usize] == dist[v as usize] + 1 {
                    let add = sigma[v as usize].clone();
                    sigma[w as usize] += add;
                    preds[w as usize].push(v);
                }
            }
        }
        let mut delta = vec![BigRational::zero(); n];
        for &w in order.iter().rev() {
            for &v in &preds[w as usize] {
                let ratio = BigRational::new(sigma[v as usize].clone(), sigma[w as usize].clone());
                let contrib = ratio * (BigRational::one() + delta[w as usize].clone());
                delta[v as usize] += contrib;
            }
            if w != s {
                score[w as usize] += delta[w as usize].clone();
            }
        }
    }
    // Each unordered pair was counted from both endpoints.
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for v in &mut score {
        *v = v.clone() * half.clone();
    }
    score
}

fn bfs_distances(t: &Topology, s: NodeIdx) -> Vec<Option<u32>> {
    let mut dist = vec![None; t.node_count()];
    dist[s as usize] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize].unwrap();
        for &w in t.neighbors(v) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// True iff both endpoints are alive and some path between them uses only
/// alive nodes.
pub fn is_connected_subgraph(t: &Topology, alive: &[bool], f: Flow) -> bool {
    assert_eq!(alive.len(), t.node_count());
    if !alive[f.src as usize] || !alive[f.dst as usize] {
        return false;
    }
    let mut seen = vec![false; t.node_count()];
    seen[f.src as usize] = true;
    let mut queue = VecDeque::from([f.src]);
    while let Some(v) = queue.pop_front() {
        if v == f.dst {
            return true;
        }
        for &w in t.neighbors(v) {
            if alive[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Up to `k` loopless paths between the flow endpoints, hop-count metric,
/// in non-decreasing length with ties broken by lexicographic node-index
/// sequence. Yen's algorithm over a deterministic shortest-path subroutine.
pub fn k_shortest_paths(t: &Topology, f: Flow, k: usize) -> Vec<Vec<NodeIdx>> {
    if k == 0 {
        return Vec::new();
    }
    let Some(first) = lex_shortest_path(t, f.src, f.dst, &[], &[]) else {
        return Vec::new();
    };
    let mut accepted: Vec<Vec<NodeIdx>> = vec![first];
    // Candidates ordered by (length, lexicographic sequence); BinaryHeap is
    // a max-heap so wrap in Reverse.
    let mut candidates: BinaryHeap<std::cmp::Reverse<(usize, Vec<NodeIdx>)>> = BinaryHeap::new();
    let mut known: BTreeSet<Vec<NodeIdx>> = accepted.iter().cloned().collect();

    while accepted.len() < k {
        let previous = accepted.last().unwrap().clone();
        for spur_pos in 0..previous.len() - 1 {
            let spur = previous[spur_pos];
            let root = &previous[..=spur_pos];
            // Edges leaving the spur node on any accepted path sharing this root.
            let mut banned_edges: Vec<(NodeIdx, NodeIdx)> = Vec::new();
            for path in &accepted {
                if path.len() > spur_pos + 1 && path[..=spur_pos] == *root {
                    banned_edges.push((spur, path[spur_pos + 1]));
                }
            }
            let banned_nodes = &root[..spur_pos];
            if let Some(spur_path) = lex_shortest_path(t, spur, f.dst, banned_nodes, &banned_edges)
            {
                let mut full = root[..spur_pos].to_vec();
                full.extend(spur_path);
                if known.insert(full.clone()) {
                    candidates.push(std::cmp::Reverse((full.len(), full)));
                }
            }
        }
        match candidates.pop() {
            Some(std::cmp::Reverse((_, path))) => accepted.push(path),
            None => break,
        }
    }
    accepted
}

/// Shortest path from `from` to `to` avoiding `banned_nodes` entirely and
/// not starting with any edge in `banned_first_edges`; among equal-length
/// paths returns the lexicographically smallest node sequence.
fn lex_shortest_path(
    t: &Topology,
    from: NodeIdx,
    to: NodeIdx,
    banned_nodes: &[NodeIdx],
    banned_first_edges: &[(NodeIdx, NodeIdx)],
) -> Option<Vec<NodeIdx>> {
    let n = t.node_count();
    let mut blocked = vec![false; n];
    for &v in banned_nodes {
        blocked[v as usize] = true;
    }
    if blocked[from as usize] || blocked[to as usize] {
        return None;
    }
    // Layered BFS keeping, per node, the lexicographically smallest path of
    // the current depth. Graphs here are small, so storing paths is fine.
    let mut best: Vec<Option<Vec<NodeIdx>>> = vec![None; n];
    best[from as usize] = Some(vec![from]);
    let mut frontier: Vec<NodeIdx> = vec![from];
    let mut depth_of: Vec<i32> = vec![-1; n];
    depth_of[from as usize] = 0;
    let mut depth = 0;
    while !frontier.is_empty() {
        if best[to as usize].is_some() && depth_of[to as usize] == depth {
            return best[to as usize].clone();
        }
        let mut next: Vec<NodeIdx> = Vec::new();
        for &v in &frontier {
            let path = best[v as usize].clone().unwrap();
            for &w in t.neighbors(v) {
                if blocked[w as usize] {
                    continue;
                }
                if depth == 0 && banned_first_edges.contains(&(v, w)) {
                    continue;
                }
                if depth_of[w as usize] >= 0 && depth_of[w as usize] <= depth {
                    continue; // already settled at an earlier or equal layer
                }
                let mut cand = path.clone();
                cand.push(w);
                match &best[w as usize] {
                    Some(existing) if *existing <= cand => {}
                    _ => {
                        if depth_of[w as usize] < 0 {
                            next.push(w);
                        }
                        depth_of[w as usize] = depth + 1;
                        best[w as usize] = Some(cand);
                    }
                }
            }
        }
        frontier = next;
        frontier.sort_unstable();
        frontier.dedup();
        depth += 1;
    }
    None
}

/// Exhaustively enumerate every simple path between the flow endpoints,
/// sorted by (length, lexicographic sequence). Exponential; intended as a
/// verification oracle and for small worked examples.
pub fn simple_paths(t: &Topology, f: Flow) -> Vec<Vec<NodeIdx>> {
    let mut out = Vec::new();
    let mut stack = vec![f.src];
    let mut on_path = vec![false; t.node_count()];
    on_path[f.src as usize] = true;
    fn rec(
        t: &Topology,
        dst: NodeIdx,
        stack: &mut Vec<NodeIdx>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<NodeIdx>>,
    ) {
        let v = *stack.last().unwrap();
        if v == dst {
            out.push(stack.clone());
            return;
        }
        for &w in t.neighbors(v) {
            if !on_path[w as usize] {
                on_path[w as usize] = true;
                stack.push(w);
                rec(t, dst, stack, on_path, out);
                stack.pop();
                on_path[w as usize] = false;
            }
        }
    }
    rec(t, f.dst, &mut stack, &mut on_path, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Topology {
        Topology::new(
            "triangle",
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap()
    }

    fn path3() -> Topology {
        Topology::new(
            "path",
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn builds_triangle() {
        let t = triangle();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edge_count(), 3);
        assert!(t.has_edge(0, 1));
    }

    #[test]
    fn rejects_duplicate_nodes() {
        let err = Topology::new("x", vec!["a".into(), "a".into()], &[("a", "a")]).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateNode(_)));
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let err =
            Topology::new("x", vec!["a".into(), "b".into()], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, GraphError::UnknownNode { .. }));
    }

    #[test]
    fn rejects_disconnected() {
        let err = Topology::new(
            "x",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("c", "d")],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::Disconnected(2)));
    }

    #[test]
    fn parses_minimal_sndlib() {
        let text = "\
?SNDlib native format; type: network; version: 1.0
# network tiny

NODES (
  a ( 0.00 1.00 )
  b ( 1.00 1.00 )
  c ( 2.00 0.00 )
)

LINKS (
  L1 ( a b ) 1.00 0.00 0.00 0.00 ( 1.00 2.00 )
  L2 ( b c ) 1.00 0.00 0.00 0.00 ( 1.00 2.00 )
  L3 ( c a ) 1.00 0.00 0.00 0.00 ( 1.00 2.00 )
  L3b ( a c ) 1.00 0.00 0.00 0.00 ( 1.00 2.00 )
)
";
        let t = parse_topology(text).unwrap();
        assert_eq!(t.name(), "tiny");
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edge_count(), 3); // duplicate a-c merged
    }

    #[test]
    fn parser_ignores_unknown_sections() {
        let text = "\
NODES (
  a
  b
  c
)
DEMANDS (
  D1 ( a c ) 1 100.0 UNLIMITED
)
LINKS (
  L1 ( a b ) 0
  L2 ( b c ) 0
  L3 ( a c ) 0
)
";
        let t = parse_topology(text).unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (3, 3));
    }

    #[test]
    fn parser_rejects_bad_link_line() {
        let text = "NODES (\n a\n b\n)\nLINKS (\n L1 a b\n)\n";
        assert!(matches!(
            parse_topology(text),
            Err(GraphError::Malformed(_))
        ));
    }

    #[test]
    fn parse_serialize_round_trip() {
        let t = triangle();
        let back = parse_topology(&t.to_sndlib()).unwrap();
        assert_eq!(back.node_ids(), t.node_ids());
        assert_eq!(back.edges(), t.edges());
    }

    #[test]
    fn prune_keeps_triangle() {
        let t = triangle();
        let p = prune_degree_one(&t).unwrap();
        assert_eq!(p.node_count(), 3);
        assert_eq!(p.edge_count(), 3);
    }

    #[test]
    fn prune_path_to_single_node() {
        let p = prune_degree_one(&path3()).unwrap();
        assert_eq!(p.node_count(), 1);
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p.node_ids(), ["b"]);
    }

    #[test]
    fn prune_two_node_graph_errors() {
        let t = Topology::new("k2", vec!["a".into(), "b".into()], &[("a", "b")]).unwrap();
        assert!(matches!(
            prune_degree_one(&t),
            Err(GraphError::PrunedToNothing)
        ));
    }

    #[test]
    fn flows_triangle_empty() {
        assert!(enumerate_flows(&triangle()).is_empty());
    }

    #[test]
    fn flows_path3_single() {
        let t = path3();
        let flows = enumerate_flows(&t);
        assert_eq!(flows.len(), 1);
        assert_eq!(flows[0].label(&t), "a-c");
    }

    #[test]
    fn closeness_on_path3() {
        let t = path3();
        let cc = centrality_exact(&t, CentralityKind::Closeness);
        let b = t.index_of("b").unwrap() as usize;
        let a = t.index_of("a").unwrap() as usize;
        assert_eq!(cc[b], BigRational::new(2.into(), 2.into()));
        assert_eq!(cc[a], BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn degree_on_star() {
        let t = Topology::new(
            "star",
            vec!["c".into(), "l1".into(), "l2".into(), "l3".into()],
            &[("c", "l1"), ("c", "l2"), ("c", "l3")],
        )
        .unwrap();
        let nd = centrality(&t, CentralityKind::NodalDegree);
        let c = t.index_of("c").unwrap() as usize;
        assert_eq!(nd[c], 3.0);
        for leaf in ["l1", "l2", "l3"] {
            assert_eq!(nd[t.index_of(leaf).unwrap() as usize], 1.0);
        }
    }

    #[test]
    fn betweenness_on_path3() {
        let t = path3();
        let bw = centrality_exact(&t, CentralityKind::Betweenness);
        let b = t.index_of("b").unwrap() as usize;
        let a = t.index_of("a").unwrap() as usize;
        assert_eq!(bw[b], BigRational::one());
        assert!(bw[a].is_zero());
    }

    #[test]
    fn ksp_path3() {
        let t = path3();
        let f = Flow::new(t.index_of("a").unwrap(), t.index_of("c").unwrap());
        let paths = k_shortest_paths(&t, f, 3);
        assert_eq!(paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn ksp_square_two_paths() {
        let t = Topology::new(
            "square",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        let f = Flow::new(t.index_of("a").unwrap(), t.index_of("c").unwrap());
        let paths = k_shortest_paths(&t, f, 2);
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.len() == 3));
        assert!(paths[0] < paths[1]);
    }

    #[test]
    fn connectivity_respects_alive_set() {
        let t = path3();
        let f = Flow::new(t.index_of("a").unwrap(), t.index_of("c").unwrap());
        assert!(is_connected_subgraph(&t, &[true, true, true], f));
        assert!(!is_connected_subgraph(&t, &[true, false, true], f));
    }

    #[test]
    fn simple_paths_square() {
        let t = Topology::new(
            "square",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        let f = Flow::new(0, 2);
        assert_eq!(simple_paths(&t, f).len(), 2);
    }
}
