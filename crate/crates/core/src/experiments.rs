//! Named experiments: the analytical figures, the network-wide comparisons
//! and the three sensitivity sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cache::{DiscoveryStrategy, Placement};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::plot::{bar_chart, line_chart, Series};
use crate::power::{energy_per_bit, fwd_power, HardwareConfig};
use crate::sim::{simulate, EnergyReport, Scenario};
use crate::topology::{assign_origins, attach_access_trees, load_pop_graph, synth_pop_graph, NetworkModel, PopGraph};
use crate::types::{Architecture, Role};
use crate::workload::{generate_trace, read_trace, QueryTrace};

const TOPOLOGY_STREAM: u64 = 1;
const ORIGIN_STREAM: u64 = 2;
const TRACE_STREAM: u64 = 3;

pub const SUMMARY_HEADER: &str = "arch,deployment,strategy,c,alpha,total_J,base_J,fwd_J,cache_J,tx_J,hit_rate,normalized";

/// One line of a summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub arch: Architecture,
    pub deployment: Placement,
    pub strategy: String,
    pub c: f64,
    pub alpha: f64,
    pub total_j: f64,
    pub base_j: f64,
    pub fwd_j: f64,
    pub cache_j: f64,
    pub tx_j: f64,
    pub hit_rate: f64,
    pub normalized: f64,
}

impl SummaryRow {
    pub fn new(report: &EnergyReport, normalized: f64) -> Self {
        let t = &report.totals;
        Self {
            arch: report.arch,
            deployment: report.deployment,
            strategy: report.strategy.clone(),
            c: report.budget_ratio,
            alpha: report.alpha,
            total_j: t.total_j,
            base_j: t.baseline_j,
            fwd_j: t.forwarding_j,
            cache_j: t.cache_j,
            tx_j: t.transmission_j,
            hit_rate: report.hit_rate,
            normalized,
        }
    }

    /// `ARCH-deployment`, e.g. `NDN-pervasive`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.arch, self.deployment)
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6},{:.6}",
            r.arch, r.deployment, r.strategy, r.c, r.alpha, r.total_j, r.base_j, r.fwd_j, r.cache_j, r.tx_j, r.hit_rate,
            r.normalized
        );
    }
    out
}

/// Runs that share one baseline.
#[derive(Debug, Clone)]
pub struct RunGroup {
    pub name: String,
    pub rows: Vec<SummaryRow>,
    pub reports: Vec<EnergyReport>,
    /// Index of the baseline run in `rows`.
    pub baseline: usize,
}

impl RunGroup {
    fn new(name: String, reports: Vec<EnergyReport>, baseline: usize) -> Result<Self> {
        let base = reports[baseline].total_j();
        if !(base > 0.0) {
            return Err(Error::Model(format!("baseline of {name} has no energy")));
        }
        let rows = reports.iter().map(|r| SummaryRow::new(r, r.total_j() / base)).collect();
        Ok(Self {
            name,
            rows,
            reports,
            baseline,
        })
    }

    pub fn find(&self, arch: Architecture, placement: Placement) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.arch == arch && r.deployment == placement)
    }
}

/// Normalized series of a sweep, one value per axis point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub label: String,
    pub normalized: Vec<f64>,
    pub total_j: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub name: String,
    pub axis_name: String,
    pub axis: Vec<f64>,
    /// Display labels of axis points (strategy names for the discovery sweep).
    pub axis_labels: Vec<String>,
    pub series: Vec<SweepSeries>,
    pub rows: Vec<SummaryRow>,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> Option<&SweepSeries> {
        self.series.iter().find(|s| s.label == label)
    }

    pub fn series_csv(&self) -> String {
        let mut out = self.axis_name.clone();
        for s in &self.series {
            let _ = write!(out, ",{}", s.label);
        }
        out.push('\n');
        for (i, label) in self.axis_labels.iter().enumerate() {
            out.push_str(label);
            for s in &self.series {
                let _ = write!(out, ",{:.6}", s.normalized[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the router-level network of topology variant `variant` (0 is the
/// configured topology) with origins assigned.
pub fn build_model(cfg: &ExperimentConfig, variant: usize) -> Result<NetworkModel> {
    let graph: PopGraph = if !cfg.fig8.files.is_empty() && variant > 0 {
        load_pop_graph(&cfg.fig8.files[variant - 1])?
    } else if variant == 0 && cfg.topology.file.is_some() {
        load_pop_graph(cfg.topology.file.as_ref().expect("checked"))?
    } else {
        synth_pop_graph(&cfg.topology.synth, cfg.sub_seed(TOPOLOGY_STREAM) + variant as u64)?
    };
    let profiles = [Role::Core, Role::Edge, Role::Leaf]
        .into_iter()
        .map(|r| (r, cfg.hardware.profile(r)))
        .collect();
    let mut model = attach_access_trees(graph, cfg.topology.tree, profiles, &cfg.topology.links)?;
    assign_origins(&mut model, cfg.workload.catalog.num_contents, cfg.sub_seed(ORIGIN_STREAM))?;
    Ok(model)
}

/// Loads the configured trace file or generates one at `alpha`.
pub fn build_trace(cfg: &ExperimentConfig, model: &NetworkModel, alpha: f64) -> Result<QueryTrace> {
    let trace = match &cfg.workload.trace_file {
        Some(path) => read_trace(path)?,
        None => generate_trace(
            model,
            &cfg.workload.catalog,
            alpha,
            cfg.workload.queries,
            cfg.sub_seed(TRACE_STREAM),
        )?,
    };
    trace.validate(model)?;
    Ok(trace)
}

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::config(format!("cannot start {} worker threads: {e}", cfg.jobs)))
}

struct Job<'a> {
    model: &'a NetworkModel,
    trace: &'a QueryTrace,
    scenario: Scenario,
}

/// Runs independent simulations in parallel; results keep job order.
fn run_jobs(cfg: &ExperimentConfig, jobs: &[Job]) -> Result<Vec<EnergyReport>> {
    let hash = cfg.hash()?;
    pool(cfg)?.install(|| {
        jobs.par_iter()
            .map(|job| {
                let mut r = simulate(job.model, job.trace, &job.scenario, &cfg.hardware, &cfg.sim)?;
                r.config_hash = hash.clone();
                Ok(r)
            })
            .collect()
    })
}

fn cached_scenario(cfg: &ExperimentConfig, arch: Architecture, budget: f64) -> Scenario {
    let strategy = match arch {
        Architecture::Ndn => cfg.caching.pervasive_strategy,
        _ => cfg.caching.edge_strategy,
    };
    Scenario::cached(arch, strategy, budget)
}

// ---------------------------------------------------------------- fig3

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Table {
    pub columns: Vec<String>,
    pub link_gbps: Vec<f64>,
    /// `power[i][j]`: watts of column `j` at link speed `i`.
    pub power: Vec<Vec<f64>>,
}

impl Fig3Table {
    pub fn value(&self, column: &str, gbps: f64) -> Option<f64> {
        let j = self.columns.iter().position(|c| c == column)?;
        let i = self.link_gbps.iter().position(|&g| g == gbps)?;
        Some(self.power[i][j])
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("link_gbps,{}\n", self.columns.join(","));
        for (g, row) in self.link_gbps.iter().zip(&self.power) {
            out.push_str(&g.to_string());
            for v in row {
                let _ = write!(out, ",{v:.6e}");
            }
            out.push('\n');
        }
        out
    }
}

fn prefix_label(n: f64) -> String {
    if n >= 1e6 {
        format!("{}M", n / 1e6)
    } else {
        format!("{}K", n / 1e3)
    }
}

/// Hardware config for an NDN router holding `prefixes` FIB entries, with
/// Bloom filters sized at `bits_per_prefix` up to the SRAM device limit.
pub fn ndn_variant(hw: &HardwareConfig, prefixes: f64, bits_per_prefix: f64) -> HardwareConfig {
    let mut hw = hw.clone();
    hw.lpmbf.num_prefixes = prefixes;
    hw.lpmbf.sram_bits = (prefixes * bits_per_prefix).min(hw.sram_tech.max_capacity);
    hw
}

/// Forwarding power of one border line card versus link speed.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Fig3Table> {
    let hw = &cfg.hardware;
    let mut columns = vec!["IP".to_string()];
    let mut variants = vec![(Architecture::Ip, hw.clone())];
    for &n in &cfg.fig3.ndn_prefixes {
        columns.push(format!("NDN-{}", prefix_label(n)));
        variants.push((Architecture::Ndn, ndn_variant(hw, n, cfg.fig3.bloom_bits_per_prefix)));
    }
    for arch in [Architecture::Nebula, Architecture::Scion] {
        columns.push(arch.to_string());
        variants.push((arch, hw.clone()));
    }
    let power = cfg
        .fig3
        .link_gbps
        .iter()
        .map(|&g| {
            variants
                .iter()
                .map(|(arch, hw)| fwd_power(*arch, hw.packet_rate(g * 1e9), &hw.forwarding_models()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fig3Table {
        columns,
        link_gbps: cfg.fig3.link_gbps.clone(),
        power,
    })
}

// ---------------------------------------------------------------- fig6

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig6Row {
    pub arch: Architecture,
    pub role: Role,
    /// J/bit.
    pub base: f64,
    pub fwd: f64,
    pub cache: f64,
    pub total: f64,
}

pub fn fig6_csv(rows: &[Fig6Row]) -> String {
    let mut out = String::from("arch,role,base_nJ_per_bit,fwd_nJ_per_bit,cache_nJ_per_bit,total_nJ_per_bit\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6},{:.6}",
            r.arch,
            r.role,
            r.base * 1e9,
            r.fwd * 1e9,
            r.cache * 1e9,
            r.total * 1e9
        );
    }
    out
}

/// Per-bit energy of core and edge routers of every architecture.
pub fn run_fig6(cfg: &ExperimentConfig) -> Result<Vec<Fig6Row>> {
    let f = &cfg.fig6;
    let mut rows = Vec::new();
    for role in [Role::Core, Role::Edge] {
        for arch in Architecture::ALL {
            let cache_bytes = match (arch, role) {
                (Architecture::Ndn, Role::Core) => f.core_cache_bytes,
                (Architecture::Ndn, _) => f.edge_cache_bytes,
                _ => 0.0,
            };
            let e = energy_per_bit(arch, role, &cfg.hardware, cache_bytes, f.object_size, f.utilization)?;
            rows.push(Fig6Row {
                arch,
                role,
                base: e.base,
                fwd: e.fwd,
                cache: e.cache,
                total: e.total(),
            });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- fig8

/// No-cache comparison on each topology, normalized by IP.
pub fn run_fig8(cfg: &ExperimentConfig) -> Result<Vec<RunGroup>> {
    let variants = if cfg.fig8.files.is_empty() {
        (0..cfg.fig8.topologies).collect::<Vec<_>>()
    } else {
        (1..=cfg.fig8.files.len()).collect()
    };
    let mut archs = cfg.archs.clone();
    if !archs.contains(&Architecture::Ip) {
        archs.insert(0, Architecture::Ip);
    }
    let setups = variants
        .iter()
        .map(|&v| {
            let model = build_model(cfg, v)?;
            let trace = build_trace(cfg, &model, cfg.workload.alpha)?;
            Ok((model, trace))
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<Job> = setups
        .iter()
        .flat_map(|(model, trace)| {
            archs.iter().map(move |&arch| Job {
                model,
                trace,
                scenario: Scenario::no_cache(arch),
            })
        })
        .collect();
    let mut reports = run_jobs(cfg, &jobs)?.into_iter();
    let baseline = archs.iter().position(|&a| a == Architecture::Ip).expect("IP is present");
    variants
        .iter()
        .map(|&v| {
            let group: Vec<EnergyReport> = reports.by_ref().take(archs.len()).collect();
            RunGroup::new(format!("topology{v}"), group, baseline)
        })
        .collect()
}

// ---------------------------------------------------------------- fig9

fn caching_archs(cfg: &ExperimentConfig) -> Vec<Architecture> {
    Architecture::ALL.into_iter().filter(|a| cfg.archs.contains(a)).collect()
}

/// Every architecture with and without its native caching, normalized by
/// SCION without caching.
pub fn run_fig9(cfg: &ExperimentConfig) -> Result<RunGroup> {
    let model = build_model(cfg, 0)?;
    let trace = build_trace(cfg, &model, cfg.workload.alpha)?;
    let mut scenarios = vec![Scenario::no_cache(Architecture::Scion)];
    for arch in caching_archs(cfg) {
        if arch != Architecture::Scion {
            scenarios.push(Scenario::no_cache(arch));
        }
        scenarios.push(cached_scenario(cfg, arch, cfg.caching.budget));
    }
    let jobs: Vec<Job> = scenarios
        .into_iter()
        .map(|scenario| Job {
            model: &model,
            trace: &trace,
            scenario,
        })
        .collect();
    RunGroup::new("fig9".into(), run_jobs(cfg, &jobs)?, 0)
}

// ---------------------------------------------------------------- sweeps

fn series_from(rows: &[SummaryRow], labels: &[String], points: usize, key: impl Fn(&SummaryRow) -> String) -> Vec<SweepSeries> {
    labels
        .iter()
        .map(|label| {
            let picked: Vec<&SummaryRow> = rows.iter().filter(|r| key(r) == *label).collect();
            debug_assert_eq!(picked.len(), points);
            SweepSeries {
                label: label.clone(),
                normalized: picked.iter().map(|r| r.normalized).collect(),
                total_j: picked.iter().map(|r| r.total_j).collect(),
            }
        })
        .collect()
}

/// Cached configurations over the cache budget ratio, normalized by SCION
/// without caching.
pub fn sweep_cache_budget(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let model = build_model(cfg, 0)?;
    let trace = build_trace(cfg, &model, cfg.workload.alpha)?;
    let mut budgets = cfg.sweeps.budgets.clone();
    budgets.sort_by(f64::total_cmp);
    let archs = caching_archs(cfg);
    let mut scenarios = Vec::new();
    for &c in &budgets {
        for &arch in &archs {
            scenarios.push(cached_scenario(cfg, arch, c));
        }
    }
    // Edge caching with no budget is the no-cache run; reuse it as the
    // baseline when the grid has it.
    let zero_scion = scenarios
        .iter()
        .position(|s| s.arch == Architecture::Scion && s.deployment.budget_ratio == 0.0);
    let extra = zero_scion.is_none();
    if extra {
        scenarios.push(Scenario::no_cache(Architecture::Scion));
    }
    let baseline = zero_scion.unwrap_or(scenarios.len() - 1);
    let jobs: Vec<Job> = scenarios
        .into_iter()
        .map(|scenario| Job {
            model: &model,
            trace: &trace,
            scenario,
        })
        .collect();
    let group = RunGroup::new("sweep_budget".into(), run_jobs(cfg, &jobs)?, baseline)?;
    let cached = &group.rows[..group.rows.len() - usize::from(extra)];
    let labels: Vec<String> = cached[..archs.len()].iter().map(SummaryRow::label).collect();
    Ok(SweepResult {
        name: "sweep_budget".into(),
        axis_name: "c".into(),
        axis_labels: budgets.iter().map(f64::to_string).collect(),
        series: series_from(cached, &labels, budgets.len(), SummaryRow::label),
        axis: budgets,
        rows: group.rows,
    })
}

/// Cached configurations and SCION without caching over the Zipf exponent;
/// each exponent is normalized by its own SCION-without-caching run.
pub fn sweep_zipf(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let model = build_model(cfg, 0)?;
    let mut alphas = cfg.sweeps.alphas.clone();
    alphas.sort_by(f64::total_cmp);
    let traces = alphas
        .iter()
        .map(|&a| build_trace(cfg, &model, a))
        .collect::<Result<Vec<_>>>()?;
    let archs = caching_archs(cfg);
    let per_alpha = 1 + archs.len();
    let jobs: Vec<Job> = traces
        .iter()
        .flat_map(|trace| {
            std::iter::once(Scenario::no_cache(Architecture::Scion))
                .chain(archs.iter().map(|&a| cached_scenario(cfg, a, cfg.caching.budget)))
                .map(|scenario| Job {
                    model: &model,
                    trace,
                    scenario,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let reports = run_jobs(cfg, &jobs)?;
    let mut rows = Vec::with_capacity(reports.len());
    for (chunk, alpha) in reports.chunks(per_alpha).zip(&alphas) {
        let group = RunGroup::new(format!("alpha={alpha}"), chunk.to_vec(), 0)?;
        rows.extend(group.rows);
    }
    let labels: Vec<String> = rows[..per_alpha].iter().map(SummaryRow::label).collect();
    Ok(SweepResult {
        name: "sweep_zipf".into(),
        axis_name: "alpha".into(),
        axis_labels: alphas.iter().map(f64::to_string).collect(),
        series: series_from(&rows, &labels, alphas.len(), SummaryRow::label),
        axis: alphas,
        rows,
    })
}

/// All four discovery strategies at the configured budget, normalized by
/// SCION with simple edge caching.
pub fn sweep_discovery(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let model = build_model(cfg, 0)?;
    let trace = build_trace(cfg, &model, cfg.workload.alpha)?;
    let archs = caching_archs(cfg);
    let mut scenarios = Vec::new();
    for strategy in DiscoveryStrategy::ALL {
        for &arch in &archs {
            let native = if arch == Architecture::Ndn {
                Placement::Pervasive
            } else {
                Placement::Edge
            };
            if strategy.placement() == native {
                scenarios.push(Scenario::cached(arch, strategy, cfg.caching.budget));
            }
        }
    }
    let is_base = |s: &Scenario| s.arch == Architecture::Scion && s.strategy == Some(DiscoveryStrategy::SimpleEdge);
    let baseline = match scenarios.iter().position(is_base) {
        Some(i) => i,
        None => {
            scenarios.push(Scenario::cached(Architecture::Scion, DiscoveryStrategy::SimpleEdge, cfg.caching.budget));
            scenarios.len() - 1
        }
    };
    let jobs: Vec<Job> = scenarios
        .into_iter()
        .map(|scenario| Job {
            model: &model,
            trace: &trace,
            scenario,
        })
        .collect();
    let group = RunGroup::new("sweep_discovery".into(), run_jobs(cfg, &jobs)?, baseline)?;
    let rows = group.rows.clone();
    let strategies: Vec<String> = DiscoveryStrategy::ALL.iter().map(|s| s.name().to_string()).collect();
    let mut by_arch: BTreeMap<Architecture, Vec<f64>> = BTreeMap::new();
    let mut totals: BTreeMap<Architecture, Vec<f64>> = BTreeMap::new();
    for s in &strategies {
        for &arch in &archs {
            let row = rows.iter().find(|r| r.arch == arch && &r.strategy == s);
            by_arch.entry(arch).or_default().push(row.map_or(f64::NAN, |r| r.normalized));
            totals.entry(arch).or_default().push(row.map_or(f64::NAN, |r| r.total_j));
        }
    }
    let series = archs
        .iter()
        .map(|a| SweepSeries {
            label: a.to_string(),
            normalized: by_arch[a].clone(),
            total_j: totals[a].clone(),
        })
        .collect();
    Ok(SweepResult {
        name: "sweep_discovery".into(),
        axis_name: "strategy".into(),
        axis: (0..strategies.len()).map(|i| i as f64).collect(),
        axis_labels: strategies,
        series,
        rows: group.rows,
    })
}

// ---------------------------------------------------------------- output

/// Rendered files of one experiment, relative to its output directory.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    fn add_reports(&mut self, cfg: &ExperimentConfig, prefix: &str, reports: &[EnergyReport]) -> Result<()> {
        if !cfg.output.json_reports {
            return Ok(());
        }
        for r in reports {
            let name = format!(
                "reports/{prefix}{}-{}-{}-c{}-a{}.json",
                r.arch, r.deployment, r.strategy, r.budget_ratio, r.alpha
            );
            self.add(name, r.to_json()?);
        }
        Ok(())
    }
}

fn sweep_outcome(cfg: &ExperimentConfig, sweep: &SweepResult, title: &str, out: &mut Outcome) {
    out.add("summary.csv", summary_csv(&sweep.rows));
    out.add("series.csv", sweep.series_csv());
    if cfg.output.svg {
        let series: Vec<Series> = sweep
            .series
            .iter()
            .map(|s| Series {
                label: &s.label,
                values: &s.normalized,
            })
            .collect();
        out.add(
            format!("{}.svg", sweep.name),
            line_chart(title, &sweep.axis_name, "normalized energy", &sweep.axis, &series, false),
        );
    }
}

fn group_chart(group: &RunGroup, title: &str) -> String {
    let labels: Vec<String> = group.rows.iter().map(SummaryRow::label).collect();
    let values: Vec<f64> = group.rows.iter().map(|r| r.normalized).collect();
    bar_chart(title, "normalized energy", &labels, &values)
}

/// Runs one experiment and renders its files without touching the disk.
pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut out = Outcome::default();
    match kind {
        ExperimentKind::Fig3 => {
            let t = run_fig3(cfg)?;
            out.add("fig3.csv", t.to_csv());
            if cfg.output.svg {
                let cols: Vec<Vec<f64>> = (0..t.columns.len())
                    .map(|j| t.power.iter().map(|row| row[j]).collect())
                    .collect();
                let series: Vec<Series> = t
                    .columns
                    .iter()
                    .zip(&cols)
                    .map(|(c, v)| Series { label: c, values: v })
                    .collect();
                out.add(
                    "fig3.svg",
                    line_chart("Forwarding power per line card", "link speed (Gbps)", "W", &t.link_gbps, &series, true),
                );
            }
        }
        ExperimentKind::Fig6 => {
            let rows = run_fig6(cfg)?;
            out.add("fig6.csv", fig6_csv(&rows));
            if cfg.output.svg {
                let labels: Vec<String> = rows.iter().map(|r| format!("{}-{}", r.arch, r.role)).collect();
                let values: Vec<f64> = rows.iter().map(|r| r.total * 1e9).collect();
                out.add("fig6.svg", bar_chart("Router energy per bit", "nJ/bit", &labels, &values));
            }
        }
        ExperimentKind::Fig8 => {
            for group in run_fig8(cfg)? {
                out.add(format!("summary_{}.csv", group.name), summary_csv(&group.rows));
                if cfg.output.svg {
                    out.add(
                        format!("{}.svg", group.name),
                        group_chart(&group, &format!("No caching, {}", group.name)),
                    );
                }
                out.add_reports(cfg, &format!("{}-", group.name), &group.reports)?;
            }
        }
        ExperimentKind::Fig9 => {
            let group = run_fig9(cfg)?;
            out.add("summary.csv", summary_csv(&group.rows));
            if cfg.output.svg {
                out.add("fig9.svg", group_chart(&group, "Caching at the baseline budget"));
            }
            out.add_reports(cfg, "", &group.reports)?;
        }
        ExperimentKind::SweepBudget => {
            let sweep = sweep_cache_budget(cfg)?;
            sweep_outcome(cfg, &sweep, "Cache budget ratio", &mut out);
        }
        ExperimentKind::SweepZipf => {
            let sweep = sweep_zipf(cfg)?;
            sweep_outcome(cfg, &sweep, "Zipf exponent", &mut out);
        }
        ExperimentKind::SweepDiscovery => {
            let sweep = sweep_discovery(cfg)?;
            sweep_outcome(cfg, &sweep, "Cache discovery strategy", &mut out);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub config_hash: String,
    pub files: Vec<ManifestEntry>,
}

/// Writes an experiment's files, the resolved config and a manifest into
/// `dir`. Returns the manifest path.
pub fn write_outcome(kind: ExperimentKind, cfg: &ExperimentConfig, outcome: &Outcome, dir: &Path) -> Result<PathBuf> {
    let mut files = outcome.files.clone();
    files.push(("config.toml".into(), cfg.to_toml()?));
    files.sort_by(|a, b| a.0.cmp(&b.0));
    let mut entries = Vec::with_capacity(files.len());
    for (name, contents) in &files {
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        entries.push(ManifestEntry {
            path: name.clone(),
            bytes: contents.len() as u64,
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
        });
    }
    let manifest = Manifest {
        experiment: kind,
        seed: cfg.seed,
        config_hash: cfg.hash()?,
        files: entries,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
