//! Trace-driven energy accounting.
//!
//! Every packet is charged at each router that transmits it: per-bit energy
//! from the router's power profile at the configured utilization, plus the
//! architecture's per-packet forwarding-decision energy. Caches add serving
//! energy and static storage power over the run's duration.

use serde::{Deserialize, Serialize};

use crate::cache::{place_caches, resolve_query, CacheDeployment, DiscoveryStrategy, Placement, ResolveOptions};
use crate::error::{Error, Result};
use crate::power::{cache_power, HardwareConfig, BITS_PER_BYTE};
use crate::topology::NetworkModel;
use crate::types::{Architecture, NodeId, Role};
use crate::workload::QueryTrace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeaderModel {
    pub fixed_bytes: f64,
    /// Packet-carried state per router hop.
    #[serde(default)]
    pub per_hop_bytes: f64,
    /// Packet-carried state per AS hop.
    #[serde(default)]
    pub per_as_hop_bytes: f64,
}

impl HeaderModel {
    pub fn default_for(arch: Architecture) -> Self {
        let (fixed_bytes, per_as_hop_bytes) = match arch {
            Architecture::Ip => (20.0, 0.0),
            Architecture::Ndn => (48.0, 0.0),
            Architecture::Scion => (8.0, 8.0),
            Architecture::Nebula => (16.0, 42.0),
        };
        Self {
            fixed_bytes,
            per_hop_bytes: 0.0,
            per_as_hop_bytes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fixed_bytes >= 0.0 && self.per_hop_bytes >= 0.0 && self.per_as_hop_bytes >= 0.0) {
            return Err(Error::config("header sizes must be non-negative"));
        }
        Ok(())
    }
}

pub fn header_bytes(header: &HeaderModel, router_hops: u32, as_hops: u32) -> f64 {
    header.fixed_bytes + header.per_hop_bytes * f64::from(router_hops) + header.per_as_hop_bytes * f64::from(as_hops)
}

/// Per-architecture header overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeaderTable {
    pub ip: HeaderModel,
    pub ndn: HeaderModel,
    pub nebula: HeaderModel,
    pub scion: HeaderModel,
}

impl Default for HeaderTable {
    fn default() -> Self {
        Self {
            ip: HeaderModel::default_for(Architecture::Ip),
            ndn: HeaderModel::default_for(Architecture::Ndn),
            nebula: HeaderModel::default_for(Architecture::Nebula),
            scion: HeaderModel::default_for(Architecture::Scion),
        }
    }
}

impl HeaderTable {
    pub fn get(&self, arch: Architecture) -> HeaderModel {
        match arch {
            Architecture::Ip => self.ip,
            Architecture::Ndn => self.ndn,
            Architecture::Nebula => self.nebula,
            Architecture::Scion => self.scion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ForwardingKind {
    RtlTcam,
    RtlLpmbf,
    Pcs,
}

/// One architecture's forwarding method, header model and caching modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchSpec {
    pub arch: Architecture,
    pub forwarding: ForwardingKind,
    pub header: HeaderModel,
    /// Joules per forwarding decision.
    pub per_packet_fwd_energy: f64,
    pub caching: Vec<Placement>,
}

impl ArchSpec {
    pub fn new(arch: Architecture, hw: &HardwareConfig, params: &SimParams) -> Result<Self> {
        let header = params.headers.get(arch);
        header.validate()?;
        let (forwarding, cached) = match arch {
            Architecture::Ip => (ForwardingKind::RtlTcam, Placement::Edge),
            Architecture::Ndn => (ForwardingKind::RtlLpmbf, Placement::Pervasive),
            Architecture::Nebula | Architecture::Scion => (ForwardingKind::Pcs, Placement::Edge),
        };
        Ok(Self {
            arch,
            forwarding,
            header,
            per_packet_fwd_energy: hw.per_packet_fwd_energy(arch, params.utilization)?,
            caching: vec![Placement::None, cached],
        })
    }

    pub fn supports(&self, placement: Placement) -> bool {
        self.caching.contains(&placement)
    }

    /// Forwarding energy for one packet sent from `from` to `to`. Packet-
    /// carried state is checked only where a packet crosses between PoPs.
    fn hop_fwd_energy(&self, from: Role, to: Role) -> f64 {
        match self.forwarding {
            ForwardingKind::Pcs if !(from == Role::Core && to == Role::Core) => 0.0,
            _ => self.per_packet_fwd_energy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketizationSpec {
    pub payload_bytes: u64,
    pub query_bytes: u64,
}

impl Default for PacketizationSpec {
    fn default() -> Self {
        Self {
            payload_bytes: 1350,
            query_bytes: 40,
        }
    }
}

pub fn packetize(content_bytes: u64, spec: &PacketizationSpec) -> Result<u64> {
    if content_bytes == 0 {
        return Err(Error::NonPositive("content size"));
    }
    if spec.payload_bytes == 0 {
        return Err(Error::NonPositive("payload_bytes"));
    }
    Ok(content_bytes.div_ceil(spec.payload_bytes))
}

/// Simulation knobs shared by every run of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    /// Router load used for per-bit baseline energy and per-packet
    /// forwarding energy.
    pub utilization: f64,
    /// Leading share of the trace that only warms caches.
    pub warmup_fraction: f64,
    /// Network-wide queries per second; converts static cache watts into
    /// joules.
    pub aggregate_rate: f64,
    /// Charge edge caches the static power of their storage, like
    /// in-router content stores.
    pub edge_static_power: bool,
    pub packets: PacketizationSpec,
    pub headers: HeaderTable,
    pub resolve: ResolveOptions,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            utilization: 0.15,
            warmup_fraction: 0.2,
            aggregate_rate: 22.5,
            edge_static_power: true,
            packets: PacketizationSpec::default(),
            headers: HeaderTable::default(),
            resolve: ResolveOptions::default(),
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.utilization > 0.0 && self.utilization <= 1.0) {
            return Err(Error::config("utilization must lie in (0, 1]"));
        }
        if !(0.0..1.0).contains(&self.warmup_fraction) {
            return Err(Error::config("warmup_fraction must lie in [0, 1)"));
        }
        if !(self.aggregate_rate > 0.0) {
            return Err(Error::NonPositive("aggregate_rate"));
        }
        if self.packets.payload_bytes == 0 {
            return Err(Error::NonPositive("payload_bytes"));
        }
        for arch in Architecture::ALL {
            self.headers.get(arch).validate()?;
        }
        Ok(())
    }

    pub fn warmup_queries(&self, n: usize) -> usize {
        (n as f64 * self.warmup_fraction).floor() as usize
    }
}

/// The (architecture, deployment, discovery strategy) triple of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub arch: Architecture,
    pub deployment: CacheDeployment,
    pub strategy: Option<DiscoveryStrategy>,
}

impl Scenario {
    pub fn no_cache(arch: Architecture) -> Self {
        Self {
            arch,
            deployment: CacheDeployment::none(),
            strategy: None,
        }
    }

    pub fn cached(arch: Architecture, strategy: DiscoveryStrategy, budget_ratio: f64) -> Self {
        Self {
            arch,
            deployment: CacheDeployment {
                placement: strategy.placement(),
                budget_ratio,
            },
            strategy: Some(strategy),
        }
    }

    pub fn strategy_name(&self) -> &'static str {
        self.strategy.map_or("none", DiscoveryStrategy::name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeEnergy {
    pub node: NodeId,
    pub role: Role,
    pub baseline_j: f64,
    pub forwarding_j: f64,
    pub cache_j: f64,
    pub transmission_j: f64,
    pub bits: u64,
    pub packets: u64,
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
    pub bytes_served: u64,
}

impl NodeEnergy {
    fn new(node: NodeId, role: Role) -> Self {
        Self {
            node,
            role,
            baseline_j: 0.0,
            forwarding_j: 0.0,
            cache_j: 0.0,
            transmission_j: 0.0,
            bits: 0,
            packets: 0,
            hits: 0,
            misses: 0,
            evictions: 0,
            bytes_served: 0,
        }
    }

    pub fn total_j(&self) -> f64 {
        self.baseline_j + self.forwarding_j + self.cache_j + self.transmission_j
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyTotals {
    pub baseline_j: f64,
    pub forwarding_j: f64,
    pub cache_j: f64,
    pub transmission_j: f64,
    pub total_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub arch: Architecture,
    pub deployment: Placement,
    pub strategy: String,
    pub budget_ratio: f64,
    pub alpha: f64,
    pub seed: u64,
    pub config_hash: String,
    pub queries: u64,
    pub measured_queries: u64,
    pub duration_s: f64,
    pub hit_rate: f64,
    pub total_bits: u64,
    pub total_packets: u64,
    pub totals: EnergyTotals,
    pub nodes: Vec<NodeEnergy>,
}

impl EnergyReport {
    pub fn total_j(&self) -> f64 {
        self.totals.total_j
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Per-role per-bit energies split into the idle share (baseline) and the
/// load-proportional share (transmission).
#[derive(Debug, Clone, Copy)]
struct BitCosts {
    idle: [f64; 3],
    load: [f64; 3],
}

fn role_slot(role: Role) -> usize {
    match role {
        Role::Core => 0,
        Role::Edge => 1,
        Role::Leaf => 2,
    }
}

impl BitCosts {
    fn new(hw: &HardwareConfig, utilization: f64) -> Self {
        let mut costs = Self {
            idle: [0.0; 3],
            load: [0.0; 3],
        };
        for role in [Role::Core, Role::Edge, Role::Leaf] {
            let p = hw.profile(role);
            let i = role_slot(role);
            costs.idle[i] = p.idle_power / (utilization * p.max_throughput);
            costs.load[i] = (p.nameplate_power - p.idle_power) / p.max_throughput;
        }
        costs
    }
}

struct Ledger<'a> {
    model: &'a NetworkModel,
    arch: &'a ArchSpec,
    bits: BitCosts,
    nodes: Vec<NodeEnergy>,
}

impl Ledger<'_> {
    /// Charges `packets` packets of `packet_bits` bits each to the router
    /// `from` sending them to `to` (or out of the network when `to` is None).
    fn transmit(&mut self, from: NodeId, to: Option<NodeId>, packets: u64, packet_bits: u64) {
        let role = self.model.role(from);
        let bits = packets * packet_bits;
        let slot = role_slot(role);
        let fwd = match to {
            Some(to) => self.arch.hop_fwd_energy(role, self.model.role(to)),
            None => self.arch.hop_fwd_energy(role, Role::Leaf),
        };
        let n = &mut self.nodes[from.index()];
        n.baseline_j += bits as f64 * self.bits.idle[slot];
        n.transmission_j += bits as f64 * self.bits.load[slot];
        n.forwarding_j += packets as f64 * fwd;
        n.bits += bits;
        n.packets += packets;
    }

    fn along(&mut self, path: &[NodeId], packets: u64, packet_bits: u64) {
        for w in path.windows(2) {
            self.transmit(w[0], Some(w[1]), packets, packet_bits);
        }
    }
}

fn packet_bits(bytes: f64) -> u64 {
    (bytes * BITS_PER_BYTE).round() as u64
}

/// Static power of each caching router's content store.
fn static_cache_power(
    hw: &HardwareConfig,
    capacity_bytes: u64,
    object_size: u64,
) -> Result<f64> {
    cache_power(
        &hw.kv_scheme(),
        &hw.cache_hardware(capacity_bytes as f64, object_size as f64),
    )
}

/// Runs one scenario over a trace.
pub fn simulate(
    model: &NetworkModel,
    trace: &QueryTrace,
    scenario: &Scenario,
    hw: &HardwareConfig,
    params: &SimParams,
) -> Result<EnergyReport> {
    params.validate()?;
    hw.validate()?;
    let arch = ArchSpec::new(scenario.arch, hw, params)?;
    let deployment = scenario.deployment;
    deployment.validate()?;
    if !arch.supports(deployment.placement) {
        return Err(Error::config(format!(
            "{} does not support {} caching",
            scenario.arch, deployment.placement
        )));
    }
    let strategy = match (deployment.placement, scenario.strategy) {
        (Placement::None, _) => None,
        (placement, Some(s)) if s.placement() == placement => Some(s),
        (placement, Some(s)) => {
            return Err(Error::config(format!("{s} discovery needs {} caching, not {placement}", s.placement())))
        }
        (placement, None) => {
            return Err(Error::config(format!("{placement} caching needs a discovery strategy")))
        }
    };
    let catalog = trace.catalog();
    catalog.validate()?;
    if model.origin_of.len() < catalog.num_contents as usize {
        return Err(Error::Model("not every content has an origin".into()));
    }
    trace.validate(model)?;

    let mut caches = place_caches(model, &deployment, &catalog)?;
    let response_packets = packetize(catalog.content_size, &params.packets)?;
    let payload = params.packets.payload_bytes as f64;
    let query = params.packets.query_bytes as f64;
    let edge_energy = hw.edge_cache.energy_per_bit();

    let mut ledger = Ledger {
        model,
        arch: &arch,
        bits: BitCosts::new(hw, params.utilization),
        nodes: model
            .nodes
            .iter()
            .map(|n| NodeEnergy::new(n.id, n.role))
            .collect(),
    };

    let warmup = params.warmup_queries(trace.len());
    let mut cache_hits = 0u64;
    for (seq, q) in trace.events.iter().enumerate() {
        let measured = seq >= warmup;
        let (query_path, response_path, hit) = match strategy {
            None => {
                let path = model.shortest_path(q.leaf, model.origin(q.content)?)?;
                let mut back = path.clone();
                back.reverse();
                (path, back, false)
            }
            Some(s) => {
                let d = resolve_query(s, model, &mut caches, q.leaf, q.content, &params.resolve)?;
                (d.query_path, d.response_path, d.cache_hit)
            }
        };
        if !measured {
            continue;
        }
        cache_hits += u64::from(hit);
        let router_hops = (query_path.len() - 1) as u32;
        let as_hops = model.as_hops(&query_path);
        let header = header_bytes(&arch.header, router_hops, as_hops);
        let query_bits = packet_bits(query + header);
        let response_bits = packet_bits(payload + header);

        ledger.along(&query_path, 1, query_bits);
        ledger.along(&response_path, response_packets, response_bits);
        // Last hop from the requesting leaf to the host, hit or miss.
        ledger.transmit(q.leaf, None, response_packets, response_bits);
        if hit && deployment.placement == Placement::Edge {
            let served = (response_packets * response_bits) as f64;
            ledger.nodes[response_path[0].index()].cache_j += served * edge_energy;
        }
    }

    let measured_queries = (trace.len() - warmup) as u64;
    let duration_s = measured_queries as f64 / params.aggregate_rate;
    let charge_static = match deployment.placement {
        Placement::None => false,
        Placement::Edge => params.edge_static_power,
        Placement::Pervasive => true,
    };
    if charge_static && caches.per_node_capacity() > 0 && duration_s > 0.0 {
        let power = static_cache_power(hw, caches.per_node_capacity(), catalog.content_size)?;
        for node in caches.caching_nodes().collect::<Vec<_>>() {
            ledger.nodes[node.index()].cache_j += power * duration_s;
        }
    }
    for node in caches.caching_nodes().collect::<Vec<_>>() {
        let s = caches.stats(node);
        let n = &mut ledger.nodes[node.index()];
        n.hits = s.hits;
        n.misses = s.misses;
        n.evictions = s.evictions;
        n.bytes_served = s.bytes_served;
    }

    let nodes = ledger.nodes;
    let mut totals = EnergyTotals::default();
    let mut total_bits = 0;
    let mut total_packets = 0;
    for n in &nodes {
        totals.baseline_j += n.baseline_j;
        totals.forwarding_j += n.forwarding_j;
        totals.cache_j += n.cache_j;
        totals.transmission_j += n.transmission_j;
        total_bits += n.bits;
        total_packets += n.packets;
    }
    totals.total_j = totals.baseline_j + totals.forwarding_j + totals.cache_j + totals.transmission_j;

    Ok(EnergyReport {
        arch: scenario.arch,
        deployment: deployment.placement,
        strategy: scenario.strategy_name().to_string(),
        budget_ratio: deployment.budget_ratio,
        alpha: trace.meta.alpha,
        seed: trace.meta.seed,
        config_hash: String::new(),
        queries: trace.len() as u64,
        measured_queries,
        duration_s,
        hit_rate: if measured_queries > 0 {
            cache_hits as f64 / measured_queries as f64
        } else {
            0.0
        },
        total_bits,
        total_packets,
        totals,
        nodes,
    })
}

/// Ratio of each report's total to the baseline's.
pub fn normalize(reports: &[EnergyReport], baseline: &EnergyReport) -> Result<Vec<f64>> {
    let base = baseline.total_j();
    if !(base > 0.0) {
        return Err(Error::Model("baseline energy must be positive".into()));
    }
    Ok(reports.iter().map(|r| r.total_j() / base).collect())
}
