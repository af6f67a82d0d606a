//! Shared fixtures for the benchmarks.

use fiapower_core::config::ExperimentConfig;
use fiapower_core::experiments::{build_model, build_trace};
use fiapower_core::topology::NetworkModel;
use fiapower_core::workload::QueryTrace;

/// A mid-sized synthetic network and trace.
pub fn fixture(n_pops: usize, queries: usize) -> (ExperimentConfig, NetworkModel, QueryTrace) {
    let mut cfg = ExperimentConfig::default();
    cfg.topology.synth.n_pops = n_pops;
    cfg.workload.queries = queries;
    cfg.workload.catalog.num_contents = 10_000;
    let model = build_model(&cfg, 0).expect("synthetic model");
    let trace = build_trace(&cfg, &model, cfg.workload.alpha).expect("trace");
    (cfg, model, trace)
}
