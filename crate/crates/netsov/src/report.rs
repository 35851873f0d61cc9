//! Report artifacts: deterministic JSON/CSV renderings of catalogs,
//! score distributions, solve results and availability sweeps, plus the
//! pipeline driver that runs every strategy and produces a comparison
//! summary. Given identical inputs the emitted artifacts are byte-identical
//! (the one exception is the solver's runtime field).

use crate::cutset::{CatalogStats, CutSetCatalog};
use crate::graph::{enumerate_flows, Flow, Topology};
use crate::score::{
    network_csc_score, score_to_f64, Assignment, Score, ScoreDistribution, ScoreError,
};
use crate::sim::{full_sweep, AttaReport};
use crate::solve::{SolveResult, SolveError, Market};
use crate::strategy::{save_assignment, StrategyKind};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

fn rational_json(s: Score) -> serde_json::Value {
    json!({
        "num": s.numer(),
        "den": s.denom(),
        "decimal": format!("{:.6}", score_to_f64(s)),
    })
}

/// Catalog export: one entry per flow with its cut sets as node-ID lists.
pub fn catalog_json(t: &Topology, catalog: &CutSetCatalog) -> String {
    let entries: Vec<serde_json::Value> = catalog
        .entries()
        .iter()
        .map(|(flow, sets)| {
            json!({
                "flow": {"src": t.node_id(flow.src), "dst": t.node_id(flow.dst)},
                "mcs": sets.iter().map(|s| s.labels(t)).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("catalog serializes")
}

pub fn stats_json(stats: &CatalogStats) -> String {
    serde_json::to_string_pretty(stats).expect("stats serialize")
}

/// Human-oriented rendering of the catalog statistics.
pub fn stats_table(stats: &CatalogStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "flows                     {}", stats.flow_count);
    let _ = writeln!(out, "cut sets (per-flow)       {}", stats.total_per_flow);
    let _ = writeln!(out, "cut sets (deduplicated)   {}", stats.total_dedup);
    let _ = writeln!(
        out,
        "mean cardinality          {:.4} per-flow / {:.4} dedup",
        stats.mean_cardinality_per_flow, stats.mean_cardinality_dedup
    );
    let _ = writeln!(out, "max cardinality           {}", stats.max_cardinality);
    let _ = writeln!(out, "cardinality histogram (per-flow / dedup):");
    for (card, n) in &stats.histogram_per_flow {
        let dedup = stats.histogram_dedup.get(card).copied().unwrap_or(0);
        let _ = writeln!(out, "  |S| = {card:<3} {n:>6} / {dedup}");
    }
    out
}

/// Score report: per-flow exact rationals plus the distribution summary.
pub fn score_report_json(t: &Topology, dist: &ScoreDistribution) -> String {
    let per_flow: Vec<serde_json::Value> = dist
        .per_flow
        .iter()
        .map(|(f, s)| {
            json!({
                "src": t.node_id(f.src),
                "dst": t.node_id(f.dst),
                "score": rational_json(*s),
            })
        })
        .collect();
    let s = &dist.summary;
    let doc = json!({
        "per_flow": per_flow,
        "summary": {
            "min": rational_json(s.min),
            "q1": rational_json(s.q1),
            "median": rational_json(s.median),
            "q3": rational_json(s.q3),
            "max": rational_json(s.max),
            "mean": rational_json(s.mean),
            "whisker_low": rational_json(s.whisker_low),
            "whisker_high": rational_json(s.whisker_high),
            "outliers": dist.outliers.iter()
                .map(|(f, v)| json!({
                    "src": t.node_id(f.src),
                    "dst": t.node_id(f.dst),
                    "score": rational_json(*v),
                }))
                .collect::<Vec<_>>(),
        },
    });
    serde_json::to_string_pretty(&doc).expect("score report serializes")
}

/// CSV companion, one row per flow.
pub fn score_report_csv(t: &Topology, dist: &ScoreDistribution) -> String {
    let mut out = String::from("src,dst,score_num,score_den,score\n");
    for (f, s) in &dist.per_flow {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6}",
            t.node_id(f.src),
            t.node_id(f.dst),
            s.numer(),
            s.denom(),
            score_to_f64(*s)
        );
    }
    out
}

/// Solve result with the assignment embedded as CSV.
pub fn solve_json(t: &Topology, r: &SolveResult) -> String {
    let doc = json!({
        "objective_min": rational_json(r.objective_min),
        "objective_sum": rational_json(r.objective_sum),
        "total_cost": format!("{:.6}", score_to_f64(r.total_cost)),
        "proved_optimal": r.proved_optimal,
        "runtime_ms": r.runtime.as_millis() as u64,
        "assignment_csv": save_assignment(t, &r.assignment),
    });
    serde_json::to_string_pretty(&doc).expect("solve result serializes")
}

/// ATTA sweep as CSV: scenario, failed manufacturer count, exact fraction.
pub fn atta_csv(report: &AttaReport) -> String {
    let mut out = String::from("scenario,failed_count,fraction_num,fraction_den,fraction\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6}",
            row.scenario,
            row.failed_count,
            row.fraction.numer(),
            row.fraction.denom(),
            score_to_f64(row.fraction)
        );
    }
    out
}

/// JSON mirror of the sweep with per-group descending fractions.
pub fn atta_json(report: &AttaReport) -> String {
    let doc = json!({
        "rows": report.rows.iter().map(|r| json!({
            "scenario": r.scenario,
            "failed_count": r.failed_count,
            "fraction": rational_json(r.fraction),
        })).collect::<Vec<_>>(),
        "by_group": report.by_group.iter().map(|(size, fracs)| json!({
            "failed_count": size,
            "fractions_desc": fracs.iter()
                .map(|f| format!("{:.6}", score_to_f64(*f)))
                .collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "fully_sovereign": report.fully_sovereign,
    });
    serde_json::to_string_pretty(&doc).expect("atta serializes")
}

/// One evaluated strategy in the pipeline comparison.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub strategy: String,
    pub manufacturers: u32,
    pub min_flow_csc: Score,
    pub mean_flow_csc: Score,
    /// Worst ATTA per failed-manufacturer count.
    pub worst_atta: Vec<(usize, Score)>,
    pub total_cost: Score,
    pub within_budget: bool,
}

/// Comparison table across strategies and market sizes.
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let max_groups = rows.iter().map(|r| r.worst_atta.len()).max().unwrap_or(0);
    let mut out = String::from("strategy,manufacturers,min_flow_csc,mean_flow_csc,total_cost,within_budget");
    for g in 1..=max_groups {
        let _ = write!(out, ",worst_atta_fail{g}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{:.6},{:.6},{:.6},{}",
            r.strategy,
            r.manufacturers,
            score_to_f64(r.min_flow_csc),
            score_to_f64(r.mean_flow_csc),
            score_to_f64(r.total_cost),
            r.within_budget
        );
        for g in 1..=max_groups {
            match r.worst_atta.iter().find(|(c, _)| *c == g) {
                Some((_, v)) => {
                    let _ = write!(out, ",{:.6}", score_to_f64(*v));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>2}  {:>12} {:>13} {:>10}  worst ATTA by #failed",
        "strategy", "m", "min FlowCSC", "mean FlowCSC", "cost"
    );
    for r in rows {
        let atta: Vec<String> = r
            .worst_atta
            .iter()
            .map(|(c, v)| format!("{c}:{:.3}", score_to_f64(*v)))
            .collect();
        let budget_mark = if r.within_budget { "" } else { " (over budget)" };
        let _ = writeln!(
            out,
            "{:<10} {:>2}  {:>12.4} {:>13.4} {:>10.4}  {}{}",
            r.strategy,
            r.manufacturers,
            score_to_f64(r.min_flow_csc),
            score_to_f64(r.mean_flow_csc),
            score_to_f64(r.total_cost),
            atta.join(" "),
            budget_mark,
        );
    }
    out
}

/// Evaluate one concrete assignment into a summary row.
pub fn evaluate_assignment(
    t: &Topology,
    atta_flows: &[Flow],
    catalog: &CutSetCatalog,
    market: &Market,
    label: &str,
    a: &Assignment,
) -> Result<(SummaryRow, ScoreDistribution, AttaReport), ReportError> {
    let dist = network_csc_score(catalog, a)?;
    let sweep = full_sweep(t, atta_flows, a, market.manufacturer_count())?;
    let cost = crate::score::assignment_cost(a, market.costs());
    let worst_atta: Vec<(usize, Score)> = sweep
        .by_group
        .iter()
        .filter_map(|(size, fracs)| fracs.last().map(|f| (*size, *f)))
        .collect();
    let row = SummaryRow {
        strategy: label.to_string(),
        manufacturers: market.manufacturer_count(),
        min_flow_csc: dist.min(),
        mean_flow_csc: dist.mean(),
        worst_atta,
        total_cost: cost,
        within_budget: cost <= market.threshold(),
    };
    Ok((row, dist, sweep))
}

/// Pipeline configuration, loadable from JSON; every field has a flag
/// counterpart on the command line.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub topology: String,
    pub strategies: Vec<StrategyKind>,
    pub manufacturers: Vec<u32>,
    pub psd_k: usize,
    pub prune_degree_one: bool,
    pub include_one_hop_in_atta: bool,
    pub cost_threshold: Option<String>,
    pub output_dir: String,
    pub time_limit_secs: u64,
    pub solve: bool,
    /// Externally produced assignments to compare, as `label=path` pairs.
    pub loaded_assignments: Vec<(String, String)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            topology: String::new(),
            strategies: StrategyKind::BUILTIN.to_vec(),
            manufacturers: vec![2, 3, 4, 5],
            psd_k: 10,
            prune_degree_one: false,
            include_one_hop_in_atta: false,
            cost_threshold: None,
            output_dir: "out".into(),
            time_limit_secs: 30 * 60,
            solve: true,
            loaded_assignments: Vec::new(),
        }
    }
}

/// Flow set used in availability sweeps: optionally widened to include
/// adjacent pairs, so both readings of the published percentages are
/// reproducible.
pub fn atta_flow_set(t: &Topology, include_one_hop: bool) -> Vec<Flow> {
    if !include_one_hop {
        return enumerate_flows(t);
    }
    let n = t.node_count() as u32;
    let mut flows = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            flows.push(Flow { src: a, dst: b });
        }
    }
    flows
}

/// Parse a decimal string (e.g. `11.88`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Score> {
    let text = text.trim();
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if frac_part.len() > 12 {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac_part.len() as u32)?;
    Some(Score::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_flows;

    fn path4() -> Topology {
        Topology::new(
            "path4",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .unwrap()
    }

    #[test]
    fn catalog_json_shape() {
        let t = path4();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let text = catalog_json(&t, &catalog);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(parsed.as_array().unwrap().len() == flows.len());
        assert!(parsed[0]["flow"]["src"].is_string());
        assert!(parsed[0]["mcs"].is_array());
    }

    #[test]
    fn deterministic_artifacts() {
        let t = path4();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        let a = Assignment::new(vec![0, 1, 0, 1], 2).unwrap();
        let d1 = network_csc_score(&catalog, &a).unwrap();
        let d2 = network_csc_score(&catalog, &a).unwrap();
        assert_eq!(score_report_json(&t, &d1), score_report_json(&t, &d2));
        assert_eq!(score_report_csv(&t, &d1), score_report_csv(&t, &d2));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("11.88"), Some(Score::new(1188, 100)));
        assert_eq!(parse_decimal("3"), Some(Score::new(3, 1)));
        assert_eq!(parse_decimal("0.995"), Some(Score::new(199, 200)));
        assert_eq!(parse_decimal("abc"), None);
    }

    #[test]
    fn atta_flow_set_widens() {
        let t = path4();
        assert_eq!(atta_flow_set(&t, false).len(), 3);
        assert_eq!(atta_flow_set(&t, true).len(), 6);
    }
}
