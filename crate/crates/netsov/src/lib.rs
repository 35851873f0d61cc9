//! netsov — a toolkit for quantifying network sovereignty.
//!
//! A network operator that buys most equipment from one manufacturer is one
//! manufacturer failure away from losing traffic. This crate measures that
//! exposure and helps reduce it:
//!
//! * [`graph`] — topology model, SNDlib-subset ingestion, flow enumeration,
//!   centralities, paths and connectivity;
//! * [`cutset`] — enumeration of every minimal vertex cut set per flow,
//!   with a brute-force oracle;
//! * [`score`] — the cut-set coloring (CSC) scores and the older path-set
//!   diversity (PSD) score, all in exact rational arithmetic;
//! * [`strategy`] — baseline manufacturer assignments (centrality
//!   round-robin, min-cut-set greedy, CSV-loaded);
//! * [`solve`] — exact lexicographic max-min optimizer for the manufacturer
//!   assignment problem under a cost budget;
//! * [`sim`] — manufacturer-failure simulation and two-terminal
//!   availability sweeps;
//! * [`rbd`] — series/parallel reliability block diagram evaluation;
//! * [`report`] — artifact schemas (JSON/CSV) and the pipeline driver;
//! * [`cli`] — the thin command-line front end.
//!
//! Start with the runnable examples (`cargo run --example ...`); each one
//! exercises one capability end to end on the bundled topologies.

pub mod cli;
pub mod cutset;
pub mod graph;
pub mod rbd;
pub mod report;
pub mod score;
pub mod sim;
pub mod solve;
pub mod strategy;

pub use cutset::{CutSetCatalog, MinimalCutSet};
pub use graph::{CentralityKind, Flow, NodeIdx, Topology};
pub use score::{Assignment, Score};
pub use solve::{Market, SolveResult};
