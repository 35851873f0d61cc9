use netsov::cutset::CutSetCatalog;
use netsov::graph::{enumerate_flows, parse_topology};
use netsov::score::{network_csc_score, score_to_f64};
use netsov::sim::full_sweep;
use netsov::solve::{brute_force_solve, default_market, solve, SolveOptions};

#[test]
fn compare_polska_variants() {
    for (label, path) in [
        ("hit2", concat!(env!("CARGO_MANIFEST_DIR"), "/data/polska.txt").to_string()),
        ("hit4", "/tmp/polska_hit4.txt".to_string()),
    ] {
        let text = std::fs::read_to_string(&path).unwrap();
        let t = parse_topology(&text).unwrap();
        let flows = enumerate_flows(&t);
        let catalog = CutSetCatalog::build(&t, &flows);
        for m in [2u32, 3, 4, 5] {
            let market = default_market(&t, m);
            let r = solve(&t, &catalog, &market, SolveOptions::default()).unwrap();
            let dist = network_csc_score(&catalog, &r.assignment).unwrap();
            let sweep = full_sweep(&t, &flows, &r.assignment, m).unwrap();
            let worst2 = sweep.worst_in_group(2);
            eprintln!(
                "{label} m={m}: z*={} mean_flow_csc={:.4} worst2atta={:?} ({} ms)",
                r.objective_min,
                score_to_f64(dist.mean()),
                worst2.map(score_to_f64),
                r.runtime.as_millis()
            );
            if m == 2 {
                let slow = brute_force_solve(&t, &catalog, &market).unwrap();
                assert_eq!(r.objective_min, slow.objective_min, "{label} m=2");
            }
        }
    }
}
