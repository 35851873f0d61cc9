//! Exact solver for the manufacturer assignment problem: maximize the worst
//! MCS-CSC score anywhere in the network, then (lexicographically) the sum
//! of all MCS-CSC scores, subject to one manufacturer per node and a total
//! cost budget.
//!
//! The search runs over colorings in restricted-growth (canonical) form:
//! scores are invariant under relabeling manufacturers, so each partition
//! is visited once and the cheapest label permutation is chosen afterwards
//! (largest class buys from the cheapest manufacturer). Phase one finds the
//! optimal worst score by solving a descending chain of decision problems
//! ("can every cut set reach at least z?"); phase two is a branch-and-bound
//! over the same space with the phase-one optimum as a hard floor and an
//! admissible per-set bound (remaining nodes pretend to bring fresh
//! manufacturers). All arithmetic is integer: scores are scaled by the lcm
//! of the cut-set cardinalities, costs by their common denominator.

use crate::cutset::CutSetCatalog;
use crate::graph::{NodeIdx, Topology};
use crate::score::{Assignment, Score};
use num::integer::lcm;
use num::rational::Rational64;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("even the all-cheapest assignment costs {cheapest} > threshold {threshold}")]
    InfeasibleBudget { cheapest: f64, threshold: f64 },
    #[error("market must offer at least one manufacturer")]
    EmptyMarket,
    #[error("manufacturer costs must be positive")]
    NonPositiveCost,
    #[error("cost threshold must be positive")]
    NonPositiveThreshold,
    #[error("{combinations:.3e} assignments exceed the brute-force guard of {cap:.3e}")]
    TooLargeForBruteForce { combinations: f64, cap: f64 },
}

/// Manufacturer market: per-manufacturer node cost and the operator's
/// total budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Market {
    costs: Vec<Rational64>,
    threshold: Rational64,
}

impl Market {
    pub fn new(costs: Vec<Rational64>, threshold: Rational64) -> Result<Self, SolveError> {
        if costs.is_empty() {
            return Err(SolveError::EmptyMarket);
        }
        if costs.iter().any(|c| !c.is_positive()) {
            return Err(SolveError::NonPositiveCost);
        }
        if !threshold.is_positive() {
            return Err(SolveError::NonPositiveThreshold);
        }
        Ok(Market { costs, threshold })
    }

    pub fn manufacturer_count(&self) -> u32 {
        self.costs.len() as u32
    }

    pub fn costs(&self) -> &[Rational64] {
        &self.costs
    }

    pub fn threshold(&self) -> Rational64 {
        self.threshold
    }

    pub fn with_threshold(mut self, threshold: Rational64) -> Self {
        self.threshold = threshold;
        self
    }
}

/// Reference market: node costs spaced linearly from 0.995 down to 0.985
/// across the manufacturers, budget equal to the node count times the mean
/// possible cost per node.
pub fn default_market(t: &Topology, m: u32) -> Market {
    assert!(m >= 1);
    let hi = Rational64::new(995, 1000);
    let lo = Rational64::new(985, 1000);
    let costs: Vec<Rational64> = if m == 1 {
        vec![hi]
    } else {
        (0..m)
            .map(|j| hi - (hi - lo) * Rational64::new(j as i64, m as i64 - 1))
            .collect()
    };
    let mean = (hi + lo) / Rational64::from_integer(2);
    let threshold = Rational64::from_integer(t.node_count() as i64) * mean;
    Market { costs, threshold }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub time_limit: Duration,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: Duration::from_secs(30 * 60),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub assignment: Assignment,
    /// Worst MCS-CSC score across every cut set of every flow.
    pub objective_min: Score,
    /// Sum of the per-flow scores (each flow's worst MCS-CSC).
    pub objective_sum: Score,
    pub total_cost: Rational64,
    pub proved_optimal: bool,
    pub runtime: Duration,
}

/// Deduplicated cut set shared by one or more flows.
struct SetData {
    nodes: Vec<NodeIdx>,
    card: i64,
    /// score scale: `unit = L / card`, so score(distinct) = distinct * unit
    unit: i64,
}

struct Instance {
    n: usize,
    m: u32,
    sets: Vec<SetData>,
    /// per catalog flow, the dedup set indices of its cut sets
    flow_sets: Vec<Vec<u32>>,
    /// per set, the flows it belongs to
    set_flows: Vec<Vec<u32>>,
    /// set indices touching each node
    by_node: Vec<Vec<u32>>,
    /// DFS order over nodes that belong to at least one set
    order: Vec<NodeIdx>,
    free: Vec<NodeIdx>,
    /// score scale L (lcm of cardinalities)
    scale: i64,
    /// costs and threshold scaled to a common integer denominator, sorted
    /// cost list kept ascending alongside original manufacturer ids
    cost_scaled: Vec<i128>,
    cost_sorted: Vec<(i128, u32)>,
    threshold_scaled: i128,
    min_cost: i128,
}

impl Instance {
    fn build(t: &Topology, catalog: &CutSetCatalog, market: &Market) -> Instance {
        let n = t.node_count();
        let m = market.manufacturer_count();

        let mut index: BTreeMap<Vec<NodeIdx>, u32> = BTreeMap::new();
        for mcs in catalog.iter_all() {
            let next = index.len() as u32;
            index.entry(mcs.nodes.clone()).or_insert(next);
        }
        let scale = index
            .keys()
            .map(|s| s.len() as i64)
            .fold(1i64, lcm)
            .max(1);
        let mut sets: Vec<SetData> = index
            .keys()
            .map(|nodes| {
                let card = nodes.len() as i64;
                SetData {
                    nodes: nodes.clone(),
                    card,
                    unit: scale / card,
                }
            })
            .collect();
        // restore index -> position mapping in BTreeMap iteration order
        for (pos, (_, slot)) in index.iter_mut().enumerate() {
            *slot = pos as u32;
        }
        sets.sort_by(|a, b| a.nodes.cmp(&b.nodes));
        let mut flow_sets: Vec<Vec<u32>> = Vec::new();
        let mut set_flows: Vec<Vec<u32>> = vec![Vec::new(); sets.len()];
        for (flow_idx, (_, family)) in catalog.entries().iter().enumerate() {
            if family.is_empty() {
                continue;
            }
            let mut ids: Vec<u32> = family.iter().map(|m| index[&m.nodes]).collect();
            ids.sort_unstable();
            ids.dedup();
            for &si in &ids {
                set_flows[si as usize].push(flow_idx as u32);
            }
            flow_sets.push(ids);
            let _ = flow_idx;
        }
        // flow indices in set_flows refer to positions in flow_sets, so
        // re-number them densely
        let mut dense = 0u32;
        let mut renumber: Vec<u32> = Vec::new();
        for (_, family) in catalog.entries() {
            if family.is_empty() {
                renumber.push(u32::MAX);
            } else {
                renumber.push(dense);
                dense += 1;
            }
        }
        for flows in set_flows.iter_mut() {
            for f in flows.iter_mut() {
                *f = renumber[*f as usize];
            }
        }
        let mut by_node: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, s) in sets.iter().enumerate() {
            for &v in &s.nodes {
                by_node[v as usize].push(i as u32);
            }
        }
        // Constrained nodes first, tightest sets first: nodes in small cut
        // sets leave the bounds the least slack, so settle them early.
        let mut order: Vec<NodeIdx> = Vec::new();
        let mut free: Vec<NodeIdx> = Vec::new();
        for v in 0..n as NodeIdx {
            if by_node[v as usize].is_empty() {
                free.push(v);
            } else {
                order.push(v);
            }
        }
        order.sort_by_key(|&v| {
            let min_card = by_node[v as usize]
                .iter()
                .map(|&s| sets[s as usize].card)
                .min()
                .unwrap();
            let membership = by_node[v as usize].len();
            (min_card, std::cmp::Reverse(membership), v)
        });

        // common denominator for exact integer cost arithmetic
        let mut den: i64 = *market.threshold().denom();
        for c in market.costs() {
            den = lcm(den, *c.denom());
        }
        let scale_cost = |r: &Rational64| -> i128 {
            (*r.numer() as i128) * (den / *r.denom()) as i128
        };
        let cost_scaled: Vec<i128> = market.costs().iter().map(scale_cost).collect();
        let mut cost_sorted: Vec<(i128, u32)> = cost_scaled
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        cost_sorted.sort();
        Instance {
            n,
            m,
            sets,
            flow_sets,
            set_flows,
            by_node,
            order,
            free,
            scale,
            min_cost: cost_sorted[0].0,
            cost_scaled,
            cost_sorted,
            threshold_scaled: scale_cost(&market.threshold()),
        }
    }

    /// Structural ceiling on the worst score: every set pretends all its
    /// nodes come from distinct manufacturers.
    fn max_possible_min(&self) -> i64 {
        self.sets
            .iter()
            .map(|s| {
                let d = s.card.min(self.m as i64);
                if d >= 2 {
                    d * s.unit
                } else {
                    0
                }
            })
            .min()
            .unwrap_or(self.scale)
    }

    /// Candidate values for the worst score, ascending.
    fn min_candidates(&self) -> Vec<i64> {
        let ceiling = self.max_possible_min();
        let mut vals: BTreeSet<i64> = BTreeSet::new();
        vals.insert(0);
        for s in &self.sets {
            for d in 2..=s.card.min(self.m as i64) {
                let v = d * s.unit;
                if v <= ceiling {
                    vals.insert(v);
                }
            }
        }
        vals.into_iter().collect()
    }
}

/// Mutable search state shared by both phases.
struct State {
    color: Vec<u32>,
    assigned: Vec<bool>,
    class_size: Vec<i128>,
    used_labels: u32,
    set_mask: Vec<u64>,
    set_distinct: Vec<i64>,
    set_assigned: Vec<i64>,
    deadline: Instant,
    timed_out: bool,
    tick: u32,
}

impl State {
    fn new(inst: &Instance, deadline: Instant) -> State {
        State {
            color: vec![0; inst.n],
            assigned: vec![false; inst.n],
            class_size: vec![0; inst.m as usize],
            used_labels: 0,
            set_mask: vec![0; inst.sets.len()],
            set_distinct: vec![0; inst.sets.len()],
            set_assigned: vec![0; inst.sets.len()],
            deadline,
            timed_out: false,
            tick: 0,
        }
    }

    fn reset(&mut self) {
        self.color.iter_mut().for_each(|c| *c = 0);
        self.assigned.iter_mut().for_each(|a| *a = false);
        self.class_size.iter_mut().for_each(|s| *s = 0);
        self.used_labels = 0;
        self.set_mask.iter_mut().for_each(|m| *m = 0);
        self.set_distinct.iter_mut().for_each(|d| *d = 0);
        self.set_assigned.iter_mut().for_each(|a| *a = 0);
    }

    fn check_time(&mut self) -> bool {
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 4096 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn assign(&mut self, inst: &Instance, v: NodeIdx, c: u32) -> Vec<(u32, bool)> {
        self.color[v as usize] = c;
        self.assigned[v as usize] = true;
        self.class_size[c as usize] += 1;
        if c == self.used_labels {
            self.used_labels += 1;
        }
        let mut touched = Vec::with_capacity(inst.by_node[v as usize].len());
        for &si in &inst.by_node[v as usize] {
            let s = si as usize;
            let bit = 1u64 << c;
            let fresh = self.set_mask[s] & bit == 0;
            if fresh {
                self.set_mask[s] |= bit;
                self.set_distinct[s] += 1;
            }
            self.set_assigned[s] += 1;
            touched.push((si, fresh));
        }
        touched
    }

    fn undo(&mut self, v: NodeIdx, c: u32, touched: &[(u32, bool)]) {
        self.assigned[v as usize] = false;
        self.class_size[c as usize] -= 1;
        if c + 1 == self.used_labels && self.class_size[c as usize] == 0 {
            self.used_labels -= 1;
        }
        for &(si, fresh) in touched {
            let s = si as usize;
            if fresh {
                self.set_mask[s] &= !(1u64 << c);
                self.set_distinct[s] -= 1;
            }
            self.set_assigned[s] -= 1;
        }
    }

    /// Lower bound on the completed assignment's cost: pair current class
    /// sizes with the cheapest manufacturers, every unassigned node buys at
    /// the minimum price.
    fn cost_lower_bound(&self, inst: &Instance, depth_assigned: usize) -> i128 {
        let mut sizes: Vec<i128> = self
            .class_size
            .iter()
            .copied()
            .filter(|&s| s > 0)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut total: i128 = 0;
        for (i, &sz) in sizes.iter().enumerate() {
            total += sz * inst.cost_sorted[i].0;
        }
        total + (inst.n - depth_assigned) as i128 * inst.min_cost
    }
}

/// Optimistic score for a set: unassigned members all bring manufacturers
/// the set has not seen yet (capped by the market size).
fn set_upper_bound(inst: &Instance, st: &State, s: usize) -> i64 {
    let data = &inst.sets[s];
    let remaining = data.card - st.set_assigned[s];
    let optimistic = (st.set_distinct[s] + remaining).min(inst.m as i64);
    if optimistic >= 2 {
        optimistic * data.unit
    } else {
        0
    }
}

/// Decision search: find any canonical coloring keeping every set's score
/// at least `target`. Returns the first witness in canonical order.
fn sat_search(inst: &Instance, st: &mut State, depth: usize, target: i64) -> Option<Vec<u32>> {
    if st.check_time() {
        return None;
    }
    if depth == inst.order.len() {
        return Some(st.color.clone());
    }
    let v = inst.order[depth];
    let max_label = (st.used_labels).min(inst.m - 1);
    for c in 0..=max_label {
        let touched = st.assign(inst, v, c);
        let mut viable = true;
        for &(si, _) in &touched {
            if set_upper_bound(inst, st, si as usize) < target {
                viable = false;
                break;
            }
        }
        if viable && st.cost_lower_bound(inst, depth + 1) <= inst.threshold_scaled {
            if let Some(hit) = sat_search(inst, st, depth + 1, target) {
                st.undo(v, c, &touched);
                return Some(hit);
            }
        }
        st.undo(v, c, &touched);
        if st.timed_out {
            return None;
        }
    }
    None
}

struct SumBest {
    sum: i64,
    colors: Vec<u32>,
    improved: bool,
}

/// Branch and bound for the secondary objective: maximize the weighted sum
/// of set scores subject to every set staying at or above `floor`.
/// `ub_sum` is the exact weighted sum of per-set upper bounds at this node.
fn sum_search(
    inst: &Instance,
    st: &mut State,
    depth: usize,
    floor: i64,
    ub_sum: i64,
    best: &mut SumBest,
) {
    if st.check_time() {
        return;
    }
    if depth == inst.order.len() {
        // at a leaf all upper bounds are exact
        if ub_sum > best.sum {
            best.sum = ub_sum;
            best.colors = st.color.clone();
            best.improved = true;
        }
        return;
    }
    let v = inst.order[depth];
    let max_label = (st.used_labels).min(inst.m - 1);
    for c in 0..=max_label {
        let before: i64 = inst.by_node[v as usize]
            .iter()
            .map(|&si| set_upper_bound(inst, st, si as usize) * inst.sets[si as usize].weight)
            .sum();
        let touched = st.assign(inst, v, c);
        let mut viable = true;
        let mut after: i64 = 0;
        for &(si, _) in &touched {
            let ub = set_upper_bound(inst, st, si as usize);
            if ub < floor {
                viable = false;
                break;
            }
            after += ub * inst.sets[si as usize].weight;
        }
        if viable {
            let next_ub = ub_sum - before + after;
            if next_ub > best.sum
                && st.cost_lower_bound(inst, depth + 1) <= inst.threshold_scaled
            {
                sum_search(inst, st, depth + 1, floor, next_ub, best);
            }
        }
        st.undo(v, c, &touched);
        if st.timed_out {
            return;
        }
    }
}

/// Turn a canonical coloring into a concrete assignment: the largest class
/// buys from the cheapest manufacturer, free nodes join the cheapest class.
/// Returns the assignment and its exact total cost.
fn materialize(
    inst: &Instance,
    market: &Market,
    colors: &[u32],
) -> (Assignment, Rational64) {
    let m = inst.m as usize;
    let mut sizes: Vec<(i64, u32)> = vec![(0, 0); m];
    for (label, slot) in sizes.iter_mut().enumerate() {
        slot.1 = label as u32;
    }
    for &v in &inst.order {
        sizes[colors[v as usize] as usize].0 += 1;
    }
    // stable pairing: larger classes first, ties by label
    sizes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut label_to_manu = vec![0u32; m];
    for (rank, &(_, label)) in sizes.iter().enumerate() {
        label_to_manu[label as usize] = inst.cost_sorted[rank].1;
    }
    let cheapest_manu = inst.cost_sorted[0].1;
    let mut out = vec![0u32; inst.n];
    for &v in &inst.order {
        out[v as usize] = label_to_manu[colors[v as usize] as usize];
    }
    for &v in &inst.free {
        out[v as usize] = cheapest_manu;
    }
    let assignment = Assignment::new(out, inst.m).expect("labels in range");
    let cost = crate::score::assignment_cost(&assignment, market.costs());
    (assignment, cost)
}

fn evaluate_colors(inst: &Instance, colors: &[u32]) -> (i64, i64) {
    let mut min_score = i64::MAX;
    let mut sum = 0i64;
    for s in &inst.sets {
        let mut mask = 0u64;
        for &v in &s.nodes {
            mask |= 1 << colors[v as usize];
        }
        let d = mask.count_ones() as i64;
        let score = if d >= 2 { d * s.unit } else { 0 };
        min_score = min_score.min(score);
        sum += score * s.weight;
    }
    if inst.sets.is_empty() {
        min_score = inst.scale;
    }
    (min_score, sum)
}

/// Exact two-phase lexicographic solve. Requires the all-cheapest
/// assignment to fit the budget. On timeout the best incumbent is returned
/// with `proved_optimal = false`.
pub fn solve(
    t: &Topology,
    catalog: &CutSetCatalog,
    market: &Market,
    opts: SolveOptions,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let inst = Instance::build(t, catalog, market);
    let cheapest_total = inst.min_cost * inst.n as i128;
    if cheapest_total > inst.threshold_scaled {
        return Err(SolveError::InfeasibleBudget {
            cheapest: cheapest_total as f64 / scaled_cost_unit(&inst, market),
            threshold: rational_to_f64(market.threshold()),
        });
    }
    let deadline = started + opts.time_limit;
    let mut st = State::new(&inst, deadline);

    // Seed with the baselines so the decision chain starts near the answer.
    let mut incumbent: Vec<u32> = seed_colors(t, catalog, &inst);
    let (mut best_min, _) = evaluate_colors(&inst, &incumbent);

    // Phase one: raise the worst score candidate by candidate.
    let candidates = inst.min_candidates();
    let ceiling = inst.max_possible_min();
    let mut proved = true;
    loop {
        let next = candidates.iter().copied().find(|&z| z > best_min);
        let Some(target) = next else { break };
        if best_min >= ceiling {
            break;
        }
        st.reset();
        match sat_search(&inst, &mut st, 0, target) {
            Some(witness) => {
                let (z, _) = evaluate_colors(&inst, &witness);
                debug_assert!(z >= target);
                best_min = z;
                incumbent = witness;
            }
            None => {
                if st.timed_out {
                    proved = false;
                }
                break;
            }
        }
        if st.timed_out {
            proved = false;
            break;
        }
    }

    // Phase two: with the worst score fixed as a floor, maximize the sum.
    let (_, seed_sum) = evaluate_colors(&inst, &incumbent);
    let mut best = SumBest {
        sum: seed_sum,
        colors: incumbent,
        improved: false,
    };
    if proved {
        st.reset();
        let root_ub: i64 = (0..inst.sets.len())
            .map(|s| set_upper_bound(&inst, &st, s) * inst.sets[s].weight)
            .sum();
        sum_search(&inst, &mut st, 0, best_min, root_ub, &mut best);
        if st.timed_out {
            proved = false;
        }
    }

    let (final_min, final_sum) = evaluate_colors(&inst, &best.colors);
    debug_assert!(final_min >= best_min, "phase two degraded the optimum");
    let (assignment, total_cost) = materialize(&inst, market, &best.colors);
    debug_assert!(total_cost <= market.threshold());
    Ok(SolveResult {
        assignment,
        objective_min: Score::new(final_min, inst.scale),
        objective_sum: Score::new(final_sum, inst.scale),
        total_cost,
        proved_optimal: proved,
        runtime: started.elapsed(),
    })
}

fn scaled_cost_unit(inst: &Instance, market: &Market) -> f64 {
    // scale factor between scaled integer costs and rational costs
    let c0 = market.costs()[0];
    inst.cost_scaled[0] as f64 / (*c0.numer() as f64 / *c0.denom() as f64)
}

fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Best canonicalized baseline: min-cut-set greedy and the three centrality
/// round-robins, filtered by budget, judged lexicographically.
fn seed_colors(t: &Topology, catalog: &CutSetCatalog, inst: &Instance) -> Vec<u32> {
    use crate::graph::CentralityKind;
    let mut best: Option<(i64, i64, Vec<u32>)> = None;
    let mut consider = |assignment: Assignment| {
        let canonical = canonicalize(inst, assignment.colors());
        let (_, cost) = materialize_cost_only(inst, &canonical);
        if cost > inst.threshold_scaled {
            return;
        }
        let (z, sum) = evaluate_colors(inst, &canonical);
        if best
            .as_ref()
            .map(|(bz, bs, _)| (z, sum) > (*bz, *bs))
            .unwrap_or(true)
        {
            best = Some((z, sum, canonical));
        }
    };
    consider(crate::strategy::min_cutset_greedy(t, catalog, inst.m));
    for kind in [
        CentralityKind::NodalDegree,
        CentralityKind::Betweenness,
        CentralityKind::Closeness,
    ] {
        consider(crate::strategy::centrality_assignment(t, kind, inst.m));
    }
    match best {
        Some((_, _, colors)) => colors,
        // all-one-color is always budget-feasible (checked by caller)
        None => vec![0; inst.n],
    }
}

/// Relabel a coloring into restricted-growth form over the DFS node order.
fn canonicalize(inst: &Instance, colors: &[u32]) -> Vec<u32> {
    let mut map: Vec<Option<u32>> = vec![None; inst.m as usize];
    let mut next = 0u32;
    let mut out = vec![0u32; colors.len()];
    for &v in inst.order.iter().chain(inst.free.iter()) {
        let old = colors[v as usize];
        let new = *map[old as usize].get_or_insert_with(|| {
            let label = next;
            next += 1;
            label
        });
        out[v as usize] = new;
    }
    out
}

fn materialize_cost_only(inst: &Instance, colors: &[u32]) -> (Vec<i128>, i128) {
    let mut sizes = vec![0i128; inst.m as usize];
    for &v in inst.order.iter().chain(inst.free.iter()) {
        sizes[colors[v as usize] as usize] += 1;
    }
    let mut sorted = sizes.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let total = sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| s * inst.cost_sorted[i].0)
        .sum();
    (sizes, total)
}

/// Exhaustive oracle: score every assignment under the budget and keep the
/// lexicographically best (worst score, then sum). Guarded at 10^7
/// combinations.
pub fn brute_force_solve(
    t: &Topology,
    catalog: &CutSetCatalog,
    market: &Market,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let inst = Instance::build(t, catalog, market);
    let m = inst.m as u64;
    let combos = (m as f64).powi(inst.n as i32);
    const CAP: f64 = 1e7;
    if combos > CAP {
        return Err(SolveError::TooLargeForBruteForce {
            combinations: combos,
            cap: CAP,
        });
    }
    let cheapest_total = inst.min_cost * inst.n as i128;
    if cheapest_total > inst.threshold_scaled {
        return Err(SolveError::InfeasibleBudget {
            cheapest: cheapest_total as f64 / scaled_cost_unit(&inst, market),
            threshold: rational_to_f64(market.threshold()),
        });
    }

    let mut colors = vec![0u32; inst.n];
    let mut best: Option<(i64, i64, Vec<u32>)> = None;
    loop {
        let cost: i128 = colors
            .iter()
            .map(|&c| inst.cost_scaled[c as usize])
            .sum();
        if cost <= inst.threshold_scaled {
            let (z, sum) = evaluate_colors(&inst, &colors);
            if best
                .as_ref()
                .map(|(bz, bs, _)| (z, sum) > (*bz, *bs))
                .unwrap_or(true)
            {
                best = Some((z, sum, colors.clone()));
            }
        }
        // odometer
        let mut i = inst.n;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < inst.m {
                break;
            }
            colors[i] = 0;
        }
        if colors.iter().all(|&c| c == 0) {
            break;
        }
    }
    let (z, sum, cols) = best.expect("all-cheapest is feasible");
    let assignment = Assignment::new(cols, inst.m).expect("in range");
    let total_cost = crate::score::assignment_cost(&assignment, market.costs());
    Ok(SolveResult {
        assignment,
        objective_min: Score::new(z, inst.scale),
        objective_sum: Score::new(sum, inst.scale),
        total_cost,
        proved_optimal: true,
        runtime: started.elapsed(),
    })
}

/// Worst and summed MCS-CSC of an arbitrary assignment, for reports.
pub fn objectives_of(
    catalog: &CutSetCatalog,
    a: &Assignment,
) -> Result<(Score, Score), crate::score::ScoreError> {
    let mut min = Score::one();
    let mut sum = Score::zero();
    let mut any = false;
    for mcs in catalog.iter_all() {
        let s = crate::score::mcs_csc_score(mcs, a)?;
        if s < min {
            min = s;
        }
        sum += s;
        any = true;
    }
    if !any {
        min = Score::one();
    }
    Ok((min, sum))
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
    fn default_market_matches_reference_costs() {
        let t = path5();
        let m3 = default_market(&t, 3);
        assert_eq!(
            m3.costs(),
            &[
                Rational64::new(199, 200),
                Rational64::new(99, 100),
                Rational64::new(197, 200)
            ]
        );
        let m2 = default_market(&t, 2);
        assert_eq!(
            m2.costs(),
            &[Rational64::new(199, 200), Rational64::new(197, 200)]
        );
        // 5 nodes -> threshold 5 * 0.99 = 4.95
        assert_eq!(m2.threshold(), Rational64::new(99, 20));
    }

    #[test]
    fn polska_style_threshold() {
        let nodes: Vec<String> = (0..12).map(|i| format!("n{i:02}")).collect();
        let edges: Vec<(String, String)> = (0..11)
            .map(|i| (format!("n{i:02}"), format!("n{:02}", i + 1)))
            .chain(std::iter::once(("n11".to_string(), "n00".to_string())))
            .collect();
        let t = Topology::new("ring12", nodes, &edges).unwrap();
        let market = default_market(&t, 5);
        assert_eq!(market.threshold(), Rational64::new(297, 25)); // 11.88
    }

    #[test]
    fn single_manufacturer_scores_zero() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        // the default budget (|V| x 0.99) cannot pay 0.995 per node, so a
        // one-manufacturer market needs an explicit threshold
        let market = Market::new(
            vec![Rational64::new(199, 200)],
            Rational64::new(199, 200) * Rational64::from_integer(5),
        )
        .unwrap();
        let r = solve(&t, &catalog, &market, SolveOptions::default()).unwrap();
        assert_eq!(r.objective_min, Score::zero());
        assert!(r.proved_optimal);
    }

    #[test]
    fn single_manufacturer_default_market_is_infeasible() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let market = default_market(&t, 1);
        assert!(matches!(
            solve(&t, &catalog, &market, SolveOptions::default()),
            Err(SolveError::InfeasibleBudget { .. })
        ));
    }

    #[test]
    fn matches_brute_force_on_path5() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        for m in [2u32, 3] {
            let market = default_market(&t, m);
            let fast = solve(&t, &catalog, &market, SolveOptions::default()).unwrap();
            let slow = brute_force_solve(&t, &catalog, &market).unwrap();
            assert_eq!(fast.objective_min, slow.objective_min, "m={m}");
            assert_eq!(fast.objective_sum, slow.objective_sum, "m={m}");
            assert!(fast.total_cost <= market.threshold());
        }
    }

    #[test]
    fn infeasible_budget_detected() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let market = Market::new(
            vec![Rational64::new(199, 200), Rational64::new(197, 200)],
            Rational64::new(1, 1), // five nodes can never fit in budget 1
        )
        .unwrap();
        assert!(matches!(
            solve(&t, &catalog, &market, SolveOptions::default()),
            Err(SolveError::InfeasibleBudget { .. })
        ));
        assert!(matches!(
            brute_force_solve(&t, &catalog, &market),
            Err(SolveError::InfeasibleBudget { .. })
        ));
    }

    #[test]
    fn brute_force_guard() {
        let nodes: Vec<String> = (0..30).map(|i| format!("n{i:02}")).collect();
        let edges: Vec<(String, String)> = (0..29)
            .map(|i| (format!("n{i:02}"), format!("n{:02}", i + 1)))
            .chain(std::iter::once(("n29".to_string(), "n00".to_string())))
            .collect();
        let t = Topology::new("ring30", nodes, &edges).unwrap();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let market = default_market(&t, 3);
        assert!(matches!(
            brute_force_solve(&t, &catalog, &market),
            Err(SolveError::TooLargeForBruteForce { .. })
        ));
    }

    #[test]
    fn result_cost_within_threshold() {
        let t = path5();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        for m in 2..=4 {
            let market = default_market(&t, m);
            let r = solve(&t, &catalog, &market, SolveOptions::default()).unwrap();
            assert!(r.total_cost <= market.threshold(), "m={m}");
            // objective values recomputable from the assignment
            let (z, sum) = objectives_of(&catalog, &r.assignment).unwrap();
            assert_eq!(z, r.objective_min, "m={m}");
            assert_eq!(sum, r.objective_sum, "m={m}");
        }
    }
}
