//! Closed-form router power models.
//!
//! A router's power is split into a load-dependent baseline, the power spent
//! on forwarding decisions (TCAM lookups, Bloom-filter longest-prefix match or
//! packet-carried-state verification) and the power of an optional content
//! cache. All quantities are SI: watts, joules, bits, bits per second.
//!
//! Every function here is pure; the hardware constants live in
//! [`HardwareConfig`] so they can be overridden from a config file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Architecture, Role};

pub const BITS_PER_BYTE: f64 = 8.0;

/// Per-bit power, capacity and access-rate limits of a memory technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageTech {
    pub name: String,
    /// Static power, W/bit.
    pub power_per_bit: f64,
    /// Largest available device, bits.
    pub max_capacity: f64,
    /// Accesses per second. `None` means the rate is unspecified and any
    /// non-zero demand fails a rate check.
    pub max_rate: Option<f64>,
}

impl StorageTech {
    pub fn tcam() -> Self {
        Self::preset("TCAM", 3e-6, 32e6, Some(360e6))
    }

    pub fn sram() -> Self {
        Self::preset("SRAM", 40e-9, 200e6, Some(633e6))
    }

    pub fn dram() -> Self {
        Self::preset("DRAM", 250e-12, 64e9 * BITS_PER_BYTE, Some(1333e6))
    }

    pub fn flash() -> Self {
        Self::preset("Flash", 0.3e-12, 2e12 * BITS_PER_BYTE, None)
    }

    fn preset(name: &str, power_per_bit: f64, max_capacity: f64, max_rate: Option<f64>) -> Self {
        Self {
            name: name.to_string(),
            power_per_bit,
            max_capacity,
            max_rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power_per_bit > 0.0) {
            return Err(Error::config(format!("{}: power_per_bit must be > 0", self.name)));
        }
        if !(self.max_capacity > 0.0) {
            return Err(Error::config(format!("{}: max_capacity must be > 0", self.name)));
        }
        if let Some(rate) = self.max_rate {
            if !(rate > 0.0) {
                return Err(Error::config(format!("{}: max_rate must be > 0", self.name)));
            }
        }
        Ok(())
    }
}

/// Nameplate power, idle power and switching capacity of one router model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouterProfile {
    pub name: String,
    /// P_N, watts.
    pub nameplate_power: f64,
    /// P_idle, watts.
    pub idle_power: f64,
    /// I_max, bit/s.
    pub max_throughput: f64,
}

impl RouterProfile {
    pub fn new(name: &str, nameplate_power: f64, idle_power: f64, max_throughput: f64) -> Result<Self> {
        let profile = Self {
            name: name.to_string(),
            nameplate_power,
            idle_power,
            max_throughput,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Cisco CRS-1: 16.8 kW nameplate, 6.40 Tbit/s.
    pub fn crs1(idle_fraction: f64) -> Self {
        Self {
            name: "CRS-1".into(),
            nameplate_power: 16.8e3,
            idle_power: idle_fraction * 16.8e3,
            max_throughput: 6.4e12,
        }
    }

    /// ARS-1013: 4.0 kW nameplate, 0.28 Tbit/s.
    pub fn ars1013(idle_fraction: f64) -> Self {
        Self {
            name: "ARS-1013".into(),
            nameplate_power: 4.0e3,
            idle_power: idle_fraction * 4.0e3,
            max_throughput: 0.28e12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.idle_power >= 0.0 && self.idle_power <= self.nameplate_power) {
            return Err(Error::config(format!(
                "{}: idle power must lie in [0, nameplate]",
                self.name
            )));
        }
        if !(self.max_throughput > 0.0) {
            return Err(Error::config(format!("{}: max_throughput must be > 0", self.name)));
        }
        Ok(())
    }
}

/// Baseline power at a given throughput: idle power plus the load-proportional
/// share of the nameplate headroom.
pub fn baseline_power(profile: &RouterProfile, throughput: f64) -> Result<f64> {
    if throughput > profile.max_throughput {
        return Err(Error::OverCapacity {
            throughput,
            max: profile.max_throughput,
        });
    }
    if !(throughput >= 0.0) {
        return Err(Error::config("throughput must be non-negative"));
    }
    let load = throughput / profile.max_throughput;
    Ok(profile.idle_power + load * (profile.nameplate_power - profile.idle_power))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcamConfig {
    /// Bits per prefix record.
    pub entry_bits: f64,
    pub num_entries: f64,
    pub tech: StorageTech,
}

impl TcamConfig {
    pub fn table_bits(&self) -> f64 {
        self.entry_bits * self.num_entries
    }

    pub fn validate(&self) -> Result<()> {
        if self.table_bits() > self.tech.max_capacity {
            return Err(Error::Infeasible(format!(
                "TCAM table of {} bits exceeds {} capacity of {} bits",
                self.table_bits(),
                self.tech.name,
                self.tech.max_capacity
            )));
        }
        Ok(())
    }
}

/// TCAM forwarding power. The table is static power per stored bit, so the
/// lookup rate does not enter.
pub fn tcam_power(cfg: &TcamConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.table_bits() * cfg.tech.power_per_bit)
}

/// Bloom-filter sizing for `num_prefixes` keys over `sram_bits` bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BloomParams {
    /// Number of hash functions (real-valued).
    pub hashes: f64,
    /// False-positive probability.
    pub false_positive: f64,
}

pub fn bloom_params(sram_bits: f64, num_prefixes: f64) -> Result<BloomParams> {
    if !(num_prefixes > 0.0) {
        return Err(Error::NonPositive("num_prefixes"));
    }
    if !(sram_bits >= 0.0) {
        return Err(Error::config("sram_bits must be non-negative"));
    }
    let hashes = sram_bits / num_prefixes * std::f64::consts::LN_2;
    Ok(BloomParams {
        hashes,
        false_positive: 0.5f64.powf(hashes),
    })
}

/// Longest-prefix match with per-length Bloom filters in SRAM and a hashed
/// FIB in DRAM.
#[derive(Debug, Clone, PartialEq)]
pub struct LpmBfConfig {
    pub num_filters: f64,
    pub sram_bits: f64,
    pub num_prefixes: f64,
    pub fib_entry_bits: f64,
    pub load_factor: f64,
    /// Joules per hash.
    pub hash_energy: f64,
    pub sram: StorageTech,
    pub dram: StorageTech,
    /// Share of DRAM power attributable to accesses (vs. background).
    pub dram_access_fraction: f64,
}

impl LpmBfConfig {
    /// Size of the hashed FIB in DRAM, bits.
    pub fn fib_dram_bits(&self) -> f64 {
        self.fib_entry_bits * self.num_prefixes / self.load_factor
    }

    pub fn bloom(&self) -> Result<BloomParams> {
        bloom_params(self.sram_bits, self.num_prefixes)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.load_factor > 0.0 && self.load_factor <= 1.0) {
            return Err(Error::config("load_factor must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.dram_access_fraction) {
            return Err(Error::config("dram_access_fraction must lie in [0, 1]"));
        }
        if self.sram_bits > self.sram.max_capacity {
            return Err(Error::Infeasible(format!(
                "Bloom filters need {} SRAM bits, device holds {}",
                self.sram_bits, self.sram.max_capacity
            )));
        }
        if self.fib_dram_bits() > self.dram.max_capacity {
            return Err(Error::Infeasible(format!(
                "FIB needs {} DRAM bits, device holds {}",
                self.fib_dram_bits(),
                self.dram.max_capacity
            )));
        }
        if !(self.hash_energy > 0.0) {
            return Err(Error::NonPositive("hash_energy"));
        }
        Ok(())
    }
}

fn check_rate(lookup_rate: f64) -> Result<()> {
    if !(lookup_rate >= 0.0) {
        return Err(Error::config("lookup rate must be non-negative"));
    }
    Ok(())
}

/// Hashing power: B·k filter probes, B·f false-positive probes and one DRAM
/// index hash per lookup.
pub fn lpmbf_compute_power(cfg: &LpmBfConfig, lookup_rate: f64) -> Result<f64> {
    cfg.validate()?;
    check_rate(lookup_rate)?;
    let bloom = cfg.bloom()?;
    let hashes_per_lookup =
        cfg.num_filters * bloom.hashes + cfg.num_filters * bloom.false_positive + 1.0;
    Ok(hashes_per_lookup * lookup_rate * cfg.hash_energy)
}

/// Memory power: static SRAM for the filters, DRAM access power scaled by the
/// fraction of DRAM cycles used, and DRAM background power.
pub fn lpmbf_storage_power(cfg: &LpmBfConfig, lookup_rate: f64) -> Result<f64> {
    cfg.validate()?;
    check_rate(lookup_rate)?;
    let bloom = cfg.bloom()?;
    let dram_rate = cfg
        .dram
        .max_rate
        .ok_or_else(|| Error::config("LPM-BF DRAM needs a max_rate"))?;
    let fib_power = cfg.fib_dram_bits() * cfg.dram.power_per_bit;
    let sram = cfg.sram_bits * cfg.sram.power_per_bit;
    let dram_busy = lookup_rate * (cfg.num_filters * bloom.false_positive + 1.0) / dram_rate;
    let dram_access = dram_busy * cfg.dram_access_fraction * fib_power;
    let dram_background = (1.0 - cfg.dram_access_fraction) * fib_power;
    Ok(sram + dram_access + dram_background)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PcsScheme {
    Nebula,
    Scion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcsConfig {
    pub scheme: PcsScheme,
    pub avg_as_path_len: f64,
    /// Joules per AES operation.
    pub aes_energy: f64,
    /// Joules per hash.
    pub hash_energy: f64,
}

/// Energy a border router spends verifying one packet's carried state.
///
/// SCION checks a single hop-field MAC. NEBULA verifies the proofs of consent
/// and provenance for the whole path and mints new provenance proofs.
pub fn pcs_verif_energy(cfg: &PcsConfig) -> f64 {
    match cfg.scheme {
        PcsScheme::Scion => cfg.aes_energy,
        PcsScheme::Nebula => {
            let l = cfg.avg_as_path_len;
            cfg.hash_energy + (l * l + l + 2.0) * cfg.aes_energy
        }
    }
}

/// Per-line-card forwarding models for all four architectures.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardingModels {
    pub tcam: TcamConfig,
    pub lpmbf: LpmBfConfig,
    pub nebula: PcsConfig,
    pub scion: PcsConfig,
}

/// Forwarding-decision power of one line card at `rate` packets per second.
pub fn fwd_power(arch: Architecture, rate: f64, models: &ForwardingModels) -> Result<f64> {
    check_rate(rate)?;
    match arch {
        Architecture::Ip => tcam_power(&models.tcam),
        Architecture::Ndn => {
            Ok(lpmbf_compute_power(&models.lpmbf, rate)? + lpmbf_storage_power(&models.lpmbf, rate)?)
        }
        Architecture::Nebula => Ok(rate * pcs_verif_energy(&models.nebula)),
        Architecture::Scion => Ok(rate * pcs_verif_energy(&models.scion)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KvSchemeKind {
    #[serde(rename = "SILT")]
    Silt,
    #[serde(rename = "HC-SetMem")]
    HcSetMem,
    #[serde(rename = "HC-LogLRU")]
    HcLogLru,
}

/// Index cost and storage amplification of a two-layer key-value store.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KvScheme {
    pub kind: KvSchemeKind,
    /// Index bytes per stored object (κ).
    pub index_bytes_per_object: f64,
    pub read_amp: f64,
    pub write_amp: f64,
}

impl KvScheme {
    pub fn silt() -> Self {
        Self {
            kind: KvSchemeKind::Silt,
            index_bytes_per_object: 1.0,
            read_amp: 1.01,
            write_amp: 4.0,
        }
    }

    pub fn hc_setmem() -> Self {
        Self {
            kind: KvSchemeKind::HcSetMem,
            index_bytes_per_object: 11.0 / 8.0,
            read_amp: 1.0,
            write_amp: 1.0,
        }
    }

    /// HashCache-LogLRU at the midpoint of its 15/8 to 47/8 index range.
    pub fn hc_loglru() -> Self {
        Self::hc_loglru_with(31.0 / 8.0).expect("midpoint is in range")
    }

    pub fn hc_loglru_with(index_bytes_per_object: f64) -> Result<Self> {
        if !(15.0 / 8.0..=47.0 / 8.0).contains(&index_bytes_per_object) {
            return Err(Error::config("HC-LogLRU index size must lie in [15/8, 47/8] bytes"));
        }
        Ok(Self {
            kind: KvSchemeKind::HcLogLru,
            index_bytes_per_object,
            read_amp: 1.0,
            write_amp: 1.0,
        })
    }

    pub fn from_kind(kind: KvSchemeKind) -> Self {
        match kind {
            KvSchemeKind::Silt => Self::silt(),
            KvSchemeKind::HcSetMem => Self::hc_setmem(),
            KvSchemeKind::HcLogLru => Self::hc_loglru(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.index_bytes_per_object > 0.0) {
            return Err(Error::NonPositive("index_bytes_per_object"));
        }
        if !(self.read_amp >= 1.0 && self.write_amp >= 1.0) {
            return Err(Error::config("amplification factors must be >= 1"));
        }
        Ok(())
    }
}

/// Media backing a content store: an index layer and a storage layer.
///
/// `*_banks` is the number of parallel devices of each technology, which
/// multiplies the technology's single-device capacity limit.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheHardware {
    pub index_tech: StorageTech,
    pub storage_tech: StorageTech,
    /// C_st, bits.
    pub storage_capacity: f64,
    pub object_size: f64,
    pub index_banks: u32,
    pub storage_banks: u32,
}

impl CacheHardware {
    pub fn new(index_tech: StorageTech, storage_tech: StorageTech, storage_capacity: f64, object_size: f64) -> Self {
        Self {
            index_tech,
            storage_tech,
            storage_capacity,
            object_size,
            index_banks: 1,
            storage_banks: 1,
        }
    }

    /// Index bits needed for a full storage layer.
    pub fn index_bits(&self, scheme: &KvScheme) -> f64 {
        let objects = self.storage_capacity / BITS_PER_BYTE / self.object_size;
        BITS_PER_BYTE * scheme.index_bytes_per_object * objects
    }

    pub fn index_limit(&self) -> f64 {
        self.index_tech.max_capacity * f64::from(self.index_banks)
    }

    pub fn storage_limit(&self) -> f64 {
        self.storage_tech.max_capacity * f64::from(self.storage_banks)
    }

    fn validate_shape(&self) -> Result<()> {
        if !(self.object_size > 0.0) {
            return Err(Error::NonPositive("object_size"));
        }
        if !(self.storage_capacity >= 0.0) {
            return Err(Error::config("storage capacity must be non-negative"));
        }
        Ok(())
    }
}

/// Static power of a content store: storage layer plus index layer.
pub fn cache_power(scheme: &KvScheme, hw: &CacheHardware) -> Result<f64> {
    scheme.validate()?;
    hw.validate_shape()?;
    let index_bits = hw.index_bits(scheme);
    if index_bits > hw.index_limit() {
        return Err(Error::Infeasible(format!(
            "index needs {index_bits:.4e} bits of {}, limit {:.4e}",
            hw.index_tech.name,
            hw.index_limit()
        )));
    }
    if hw.storage_capacity > hw.storage_limit() {
        return Err(Error::Infeasible(format!(
            "storage layer of {:.4e} bits exceeds {} limit {:.4e}",
            hw.storage_capacity,
            hw.storage_tech.name,
            hw.storage_limit()
        )));
    }
    Ok(hw.storage_tech.power_per_bit * hw.storage_capacity + hw.index_tech.power_per_bit * index_bits)
}

/// Offered load on a content store.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheWorkload {
    /// Packets per second.
    pub arrival_rate: f64,
    pub query_fraction: f64,
    pub hit_rate: f64,
    pub write_prob: f64,
}

impl CacheWorkload {
    /// Storage-layer accesses per arriving packet.
    pub fn storage_accesses_per_packet(&self, scheme: &KvScheme) -> f64 {
        self.query_fraction * self.hit_rate * scheme.read_amp
            + (1.0 - self.query_fraction) * self.write_prob * scheme.write_amp
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("query_fraction", self.query_fraction),
            ("hit_rate", self.hit_rate),
            ("write_prob", self.write_prob),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.arrival_rate >= 0.0) {
            return Err(Error::config("arrival_rate must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    IndexCapacity,
    StorageCapacity,
    IndexRate,
    StorageRate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub demand: f64,
    /// `None` when the technology has no rate figure at all.
    pub limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, constraint: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }
}

fn rate_violation(constraint: Constraint, demand: f64, limit: Option<f64>) -> Option<Violation> {
    let ok = match limit {
        Some(limit) => demand <= limit,
        None => demand == 0.0,
    };
    (!ok).then_some(Violation {
        constraint,
        demand,
        limit,
    })
}

/// Checks the two capacity and two transaction-rate limits of a content
/// store and reports every violated one.
pub fn kv_feasibility(scheme: &KvScheme, hw: &CacheHardware, wl: &CacheWorkload) -> Feasibility {
    let mut violations = Vec::new();
    let index_bits = hw.index_bits(scheme);
    if index_bits > hw.index_limit() {
        violations.push(Violation {
            constraint: Constraint::IndexCapacity,
            demand: index_bits,
            limit: Some(hw.index_limit()),
        });
    }
    if hw.storage_capacity > hw.storage_limit() {
        violations.push(Violation {
            constraint: Constraint::StorageCapacity,
            demand: hw.storage_capacity,
            limit: Some(hw.storage_limit()),
        });
    }
    violations.extend(rate_violation(
        Constraint::IndexRate,
        wl.arrival_rate,
        hw.index_tech.max_rate,
    ));
    violations.extend(rate_violation(
        Constraint::StorageRate,
        wl.arrival_rate * wl.storage_accesses_per_packet(scheme),
        hw.storage_tech.max_rate,
    ));
    Feasibility { violations }
}

/// Largest storage layer, in bits, that satisfies both capacity limits.
pub fn max_storage_capacity(scheme: &KvScheme, hw: &CacheHardware) -> f64 {
    // index_bits = κ · C_st / object_size
    let by_index = hw.index_limit() * hw.object_size / scheme.index_bytes_per_object;
    by_index.min(hw.storage_limit())
}

/// Largest arrival rate meeting both transaction-rate limits, or `None` when
/// a technology has no rate figure.
pub fn max_arrival_rate(scheme: &KvScheme, hw: &CacheHardware, wl: &CacheWorkload) -> Option<f64> {
    let index = hw.index_tech.max_rate?;
    let per_packet = wl.storage_accesses_per_packet(scheme);
    let storage = if per_packet > 0.0 {
        hw.storage_tech.max_rate? / per_packet
    } else {
        f64::INFINITY
    };
    Some(index.min(storage))
}

/// CDN appliance used as the edge cache: 600 W at 10 Gbit/s served.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCacheModel {
    pub power: f64,
    pub throughput: f64,
}

impl Default for EdgeCacheModel {
    fn default() -> Self {
        Self {
            power: 600.0,
            throughput: 10e9,
        }
    }
}

impl EdgeCacheModel {
    pub fn energy_per_bit(&self) -> f64 {
        self.power / self.throughput
    }
}

/// Served-bit energy of the default edge cache appliance, J/bit.
pub fn edge_cache_energy_per_bit() -> f64 {
    EdgeCacheModel::default().energy_per_bit()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TcamParams {
    pub entry_bits: f64,
    pub num_entries: f64,
}

impl Default for TcamParams {
    fn default() -> Self {
        Self {
            entry_bits: 64.0,
            num_entries: 500_000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LpmBfParams {
    pub num_filters: f64,
    pub sram_bits: f64,
    pub num_prefixes: f64,
    pub fib_entry_bits: f64,
    pub load_factor: f64,
    pub hash_energy: f64,
    pub dram_access_fraction: f64,
}

impl Default for LpmBfParams {
    fn default() -> Self {
        Self {
            num_filters: 32.0,
            sram_bits: 200e6,
            num_prefixes: 20e6,
            fib_entry_bits: 320.0,
            load_factor: 0.8,
            hash_energy: 50e-9,
            dram_access_fraction: 0.46,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PcsParams {
    pub avg_as_path_len: f64,
    pub aes_energy: f64,
    pub hash_energy: f64,
}

impl Default for PcsParams {
    fn default() -> Self {
        Self {
            avg_as_path_len: 4.4,
            aes_energy: 250e-9,
            hash_energy: 50e-9,
        }
    }
}

/// Which [`StorageTech`] of the hardware table a cache layer uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TechKind {
    Tcam,
    Sram,
    Dram,
    Flash,
}

/// Content store built into a caching router.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContentStoreParams {
    pub scheme: KvSchemeKind,
    pub index: TechKind,
    pub storage: TechKind,
    /// Allow as many parallel index/storage devices as the capacity needs.
    pub auto_banks: bool,
}

impl Default for ContentStoreParams {
    fn default() -> Self {
        Self {
            scheme: KvSchemeKind::Silt,
            index: TechKind::Sram,
            storage: TechKind::Dram,
            auto_banks: true,
        }
    }
}

/// Router power profile in config-file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileParams {
    pub name: String,
    pub nameplate_power: f64,
    pub max_throughput: f64,
}

impl ProfileParams {
    fn core() -> Self {
        Self {
            name: "CRS-1".into(),
            nameplate_power: 16.8e3,
            max_throughput: 6.4e12,
        }
    }

    fn edge() -> Self {
        Self {
            name: "ARS-1013".into(),
            nameplate_power: 4.0e3,
            max_throughput: 0.28e12,
        }
    }
}

/// Every hardware constant the models need, with built-in defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardwareConfig {
    pub tcam_tech: StorageTech,
    pub sram_tech: StorageTech,
    pub dram_tech: StorageTech,
    pub flash_tech: StorageTech,
    /// P_idle as a fraction of nameplate power, for every profile.
    pub idle_fraction: f64,
    pub core_router: ProfileParams,
    pub edge_router: ProfileParams,
    pub leaf_router: ProfileParams,
    /// Line-card speed used to count cards and as the per-card lookup rate.
    pub line_card_bps: f64,
    /// Packet size used to turn link speeds into packet rates.
    pub packet_bytes: f64,
    pub tcam: TcamParams,
    pub lpmbf: LpmBfParams,
    pub pcs: PcsParams,
    pub edge_cache: EdgeCacheModel,
    pub content_store: ContentStoreParams,
}

impl Default for HardwareConfig {
    fn default() -> Self {
        Self {
            tcam_tech: StorageTech::tcam(),
            sram_tech: StorageTech::sram(),
            dram_tech: StorageTech::dram(),
            flash_tech: StorageTech::flash(),
            idle_fraction: 0.75,
            core_router: ProfileParams::core(),
            edge_router: ProfileParams::edge(),
            leaf_router: ProfileParams::edge(),
            line_card_bps: 40e9,
            packet_bytes: 1350.0,
            tcam: TcamParams::default(),
            lpmbf: LpmBfParams::default(),
            pcs: PcsParams::default(),
            edge_cache: EdgeCacheModel::default(),
            content_store: ContentStoreParams::default(),
        }
    }
}

impl HardwareConfig {
    pub fn validate(&self) -> Result<()> {
        for tech in [&self.tcam_tech, &self.sram_tech, &self.dram_tech, &self.flash_tech] {
            tech.validate()?;
        }
        if !(0.0..=1.0).contains(&self.idle_fraction) {
            return Err(Error::config("idle_fraction must lie in [0, 1]"));
        }
        for role in [Role::Core, Role::Edge, Role::Leaf] {
            self.profile(role).validate()?;
        }
        if !(self.line_card_bps > 0.0) {
            return Err(Error::NonPositive("line_card_bps"));
        }
        if !(self.packet_bytes > 0.0) {
            return Err(Error::NonPositive("packet_bytes"));
        }
        let models = self.forwarding_models();
        models.tcam.validate()?;
        models.lpmbf.validate()?;
        if !(self.pcs.avg_as_path_len >= 0.0) {
            return Err(Error::config("avg_as_path_len must be non-negative"));
        }
        if !(self.pcs.aes_energy > 0.0 && self.pcs.hash_energy > 0.0) {
            return Err(Error::config("PCS energies must be positive"));
        }
        Ok(())
    }

    pub fn tech(&self, kind: TechKind) -> &StorageTech {
        match kind {
            TechKind::Tcam => &self.tcam_tech,
            TechKind::Sram => &self.sram_tech,
            TechKind::Dram => &self.dram_tech,
            TechKind::Flash => &self.flash_tech,
        }
    }

    pub fn profile(&self, role: Role) -> RouterProfile {
        let params = match role {
            Role::Core => &self.core_router,
            Role::Edge => &self.edge_router,
            Role::Leaf => &self.leaf_router,
        };
        RouterProfile {
            name: params.name.clone(),
            nameplate_power: params.nameplate_power,
            idle_power: self.idle_fraction * params.nameplate_power,
            max_throughput: params.max_throughput,
        }
    }

    pub fn packet_bits(&self) -> f64 {
        self.packet_bytes * BITS_PER_BYTE
    }

    /// Packet rate of a link running at `bps`.
    pub fn packet_rate(&self, bps: f64) -> f64 {
        bps / self.packet_bits()
    }

    pub fn tcam_config(&self) -> TcamConfig {
        TcamConfig {
            entry_bits: self.tcam.entry_bits,
            num_entries: self.tcam.num_entries,
            tech: self.tcam_tech.clone(),
        }
    }

    pub fn lpmbf_config(&self) -> LpmBfConfig {
        let p = &self.lpmbf;
        LpmBfConfig {
            num_filters: p.num_filters,
            sram_bits: p.sram_bits,
            num_prefixes: p.num_prefixes,
            fib_entry_bits: p.fib_entry_bits,
            load_factor: p.load_factor,
            hash_energy: p.hash_energy,
            sram: self.sram_tech.clone(),
            dram: self.dram_tech.clone(),
            dram_access_fraction: p.dram_access_fraction,
        }
    }

    pub fn pcs_config(&self, scheme: PcsScheme) -> PcsConfig {
        PcsConfig {
            scheme,
            avg_as_path_len: self.pcs.avg_as_path_len,
            aes_energy: self.pcs.aes_energy,
            hash_energy: self.pcs.hash_energy,
        }
    }

    pub fn forwarding_models(&self) -> ForwardingModels {
        ForwardingModels {
            tcam: self.tcam_config(),
            lpmbf: self.lpmbf_config(),
            nebula: self.pcs_config(PcsScheme::Nebula),
            scion: self.pcs_config(PcsScheme::Scion),
        }
    }

    pub fn kv_scheme(&self) -> KvScheme {
        KvScheme::from_kind(self.content_store.scheme)
    }

    /// Content-store hardware holding `capacity_bytes` of `object_size`-byte
    /// objects.
    pub fn cache_hardware(&self, capacity_bytes: f64, object_size: f64) -> CacheHardware {
        let cs = &self.content_store;
        let mut hw = CacheHardware::new(
            self.tech(cs.index).clone(),
            self.tech(cs.storage).clone(),
            capacity_bytes * BITS_PER_BYTE,
            object_size,
        );
        if cs.auto_banks {
            let scheme = self.kv_scheme();
            hw.storage_banks = banks_for(hw.storage_capacity, hw.storage_tech.max_capacity);
            hw.index_banks = banks_for(hw.index_bits(&scheme), hw.index_tech.max_capacity);
        }
        hw
    }

    /// Line cards needed to carry a router's full throughput.
    pub fn line_cards(&self, role: Role) -> f64 {
        (self.profile(role).max_throughput / self.line_card_bps).ceil()
    }

    /// Energy of one forwarding decision, J/packet.
    ///
    /// Table-lookup architectures spread one line card's forwarding power over
    /// the packets that card carries at `utilization`; packet-carried-state
    /// architectures pay their verification energy.
    pub fn per_packet_fwd_energy(&self, arch: Architecture, utilization: f64) -> Result<f64> {
        check_utilization(utilization)?;
        let models = self.forwarding_models();
        match arch {
            Architecture::Ip | Architecture::Ndn => {
                let rate = self.packet_rate(utilization * self.line_card_bps);
                Ok(fwd_power(arch, rate, &models)? / rate)
            }
            Architecture::Nebula => Ok(pcs_verif_energy(&models.nebula)),
            Architecture::Scion => Ok(pcs_verif_energy(&models.scion)),
        }
    }

    /// Forwarding power of a whole router at `utilization`.
    ///
    /// PCS verification happens only at the edge of the network, so core
    /// routers of NEBULA and SCION report zero.
    pub fn router_fwd_power(&self, arch: Architecture, role: Role, utilization: f64) -> Result<f64> {
        check_utilization(utilization)?;
        let models = self.forwarding_models();
        match arch {
            Architecture::Ip | Architecture::Ndn => {
                let per_card_rate = self.packet_rate(utilization * self.line_card_bps);
                Ok(self.line_cards(role) * fwd_power(arch, per_card_rate, &models)?)
            }
            Architecture::Nebula | Architecture::Scion => {
                if role == Role::Core {
                    return Ok(0.0);
                }
                let rate = self.packet_rate(utilization * self.profile(role).max_throughput);
                fwd_power(arch, rate, &models)
            }
        }
    }
}

fn banks_for(demand: f64, per_device: f64) -> u32 {
    ((demand / per_device).ceil() as u32).max(1)
}

fn check_utilization(utilization: f64) -> Result<()> {
    if !(utilization > 0.0 && utilization <= 1.0) {
        return Err(Error::config(format!("utilization {utilization} must lie in (0, 1]")));
    }
    Ok(())
}

/// Joules per forwarded bit, split by router component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub base: f64,
    pub fwd: f64,
    pub cache: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.base + self.fwd + self.cache
    }
}

/// Per-bit energy of one router carrying `utilization · I_max` bit/s, with
/// a content store of `cache_bytes` (zero for no cache).
pub fn energy_per_bit(
    arch: Architecture,
    role: Role,
    hw: &HardwareConfig,
    cache_bytes: f64,
    object_size: f64,
    utilization: f64,
) -> Result<EnergyBreakdown> {
    check_utilization(utilization)?;
    let profile = hw.profile(role);
    let throughput = utilization * profile.max_throughput;
    let base = baseline_power(&profile, throughput)?;
    let fwd = hw.router_fwd_power(arch, role, utilization)?;
    let cache = if cache_bytes > 0.0 {
        cache_power(&hw.kv_scheme(), &hw.cache_hardware(cache_bytes, object_size))?
    } else {
        0.0
    };
    Ok(EnergyBreakdown {
        base: base / throughput,
        fwd: fwd / throughput,
        cache: cache / throughput,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn core_profile() -> RouterProfile {
        RouterProfile::new("test", 16.8e3, 8.4e3, 6.4e12).unwrap()
    }

    #[test]
    fn baseline_endpoints_and_midpoint() {
        let p = core_profile();
        assert_eq!(baseline_power(&p, 0.0).unwrap(), 8.4e3);
        assert_relative_eq!(baseline_power(&p, 6.4e12).unwrap(), 16.8e3, max_relative = 1e-12);
        assert_relative_eq!(baseline_power(&p, 3.2e12).unwrap(), 12.6e3, max_relative = 1e-12);
        assert!(matches!(
            baseline_power(&p, 6.5e12),
            Err(Error::OverCapacity { .. })
        ));
    }

    #[test]
    fn router_profile_rejects_idle_above_nameplate() {
        assert!(RouterProfile::new("bad", 100.0, 150.0, 1e9).is_err());
        assert!(RouterProfile::new("bad", 100.0, 50.0, 0.0).is_err());
    }

    #[test]
    fn tcam_examples() {
        let mut cfg = TcamConfig {
            entry_bits: 64.0,
            num_entries: 500_000.0,
            tech: StorageTech::tcam(),
        };
        assert_relative_eq!(tcam_power(&cfg).unwrap(), 3.2e7 * 3e-6, max_relative = 1e-12);
        cfg.num_entries = 0.0;
        assert_eq!(tcam_power(&cfg).unwrap(), 0.0);
        cfg.num_entries = 1_000_000.0;
        assert!(matches!(tcam_power(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn bloom_examples() {
        let b = bloom_params(200e6, 20e6).unwrap();
        assert_relative_eq!(b.hashes, 6.931_471_805_599_453, max_relative = 1e-12);
        assert_relative_eq!(b.false_positive, 0.008_192_5, max_relative = 1e-4);

        let one = bloom_params(1.0 / std::f64::consts::LN_2, 1.0).unwrap();
        assert_relative_eq!(one.hashes, 1.0, max_relative = 1e-12);
        assert_relative_eq!(one.false_positive, 0.5, max_relative = 1e-12);

        let eq = bloom_params(1e6, 1e6).unwrap();
        assert_relative_eq!(eq.hashes, std::f64::consts::LN_2, max_relative = 1e-12);
        assert_relative_eq!(eq.false_positive, 0.618_5, max_relative = 1e-3);

        assert!(matches!(bloom_params(1e6, 0.0), Err(Error::NonPositive(_))));
    }

    fn ndn_cfg() -> LpmBfConfig {
        HardwareConfig::default().lpmbf_config()
    }

    #[test]
    fn lpmbf_compute_examples() {
        let cfg = ndn_cfg();
        assert_eq!(lpmbf_compute_power(&cfg, 0.0).unwrap(), 0.0);
        // (32·k + 32·f + 1) · r · E_hash with k = 10 ln 2, f = 2^-k.
        let k = 10.0 * std::f64::consts::LN_2;
        let f = (-k * std::f64::consts::LN_2).exp();
        let expected = (32.0 * k + 32.0 * f + 1.0) * 1e6 * 50e-9;
        let p = lpmbf_compute_power(&cfg, 1e6).unwrap();
        assert_relative_eq!(p, expected, max_relative = 1e-12);
        assert_relative_eq!(p, 11.153, max_relative = 1e-4);
        assert_eq!(lpmbf_compute_power(&cfg, 2e6).unwrap(), 2.0 * p);
    }

    #[test]
    fn lpmbf_storage_examples() {
        let mut cfg = ndn_cfg();
        // 200 Mbit · 40 nW + (1 − 0.46) · 8 Gbit · 250 pW
        let stat = lpmbf_storage_power(&cfg, 0.0).unwrap();
        assert_relative_eq!(stat, 8.0 + 1.08, max_relative = 1e-12);

        let r = 3.7e6;
        let f = cfg.bloom().unwrap().false_positive;
        let dynamic = r * (32.0 * f + 1.0) / 1.333e9 * 0.46 * 8e9 * 250e-12;
        let with_load = lpmbf_storage_power(&cfg, r).unwrap();
        assert_relative_eq!(with_load - stat, dynamic, max_relative = 1e-9);
        assert_relative_eq!(with_load - stat, 0.003_22, max_relative = 2e-3);

        cfg.dram_access_fraction = 1.0;
        assert_relative_eq!(lpmbf_storage_power(&cfg, 0.0).unwrap(), 8.0, max_relative = 1e-12);
    }

    #[test]
    fn lpmbf_rejects_oversized_fib() {
        let mut cfg = ndn_cfg();
        cfg.num_prefixes = 2e9;
        cfg.sram_bits = 1e6;
        assert!(matches!(lpmbf_storage_power(&cfg, 0.0), Err(Error::Infeasible(_))));
        let mut cfg = ndn_cfg();
        cfg.load_factor = 0.0;
        assert!(lpmbf_compute_power(&cfg, 1.0).is_err());
    }

    #[test]
    fn pcs_examples() {
        let hw = HardwareConfig::default();
        assert_eq!(pcs_verif_energy(&hw.pcs_config(PcsScheme::Scion)), 250e-9);
        assert_relative_eq!(
            pcs_verif_energy(&hw.pcs_config(PcsScheme::Nebula)),
            50e-9 + 25.76 * 250e-9,
            max_relative = 1e-12
        );
        let mut zero = hw.pcs_config(PcsScheme::Nebula);
        zero.avg_as_path_len = 0.0;
        assert_relative_eq!(pcs_verif_energy(&zero), 550e-9, max_relative = 1e-12);
    }

    #[test]
    fn fwd_power_examples() {
        let hw = HardwareConfig::default();
        let models = hw.forwarding_models();
        let r10 = 10e9 / (1350.0 * 8.0);
        let scion = fwd_power(Architecture::Scion, r10, &models).unwrap();
        assert_relative_eq!(scion, r10 * 250e-9, max_relative = 1e-12);
        assert_relative_eq!(scion, 0.2315, max_relative = 1e-3);
        for gbps in [1.0, 10.0, 40.0] {
            let ip = fwd_power(Architecture::Ip, hw.packet_rate(gbps * 1e9), &models).unwrap();
            assert_relative_eq!(ip, 96.0, max_relative = 1e-12);
        }
        let ratio10 = 96.0 / scion;
        assert!((ratio10 - 414.7).abs() < 1.0, "{ratio10}");
        let r1 = hw.packet_rate(1e9);
        assert!(96.0 / fwd_power(Architecture::Scion, r1, &models).unwrap() > 1000.0);
    }

    #[test]
    fn cache_power_examples() {
        let mut hw = CacheHardware::new(StorageTech::sram(), StorageTech::dram(), 8e12, 1500.0);
        // 1 TB needs 16 DRAM devices and 27 SRAM devices for the index.
        assert!(matches!(cache_power(&KvScheme::silt(), &hw), Err(Error::Infeasible(_))));
        hw.storage_banks = 16;
        hw.index_banks = 27;
        let p = cache_power(&KvScheme::silt(), &hw).unwrap();
        let expected = 8e12 * 250e-12 + (8.0 * 1e12 / 1500.0) * 40e-9;
        assert_relative_eq!(p, expected, max_relative = 1e-12);
        assert!((p - 2213.3).abs() < 0.1, "{p}");

        hw.storage_capacity = 0.0;
        assert_eq!(cache_power(&KvScheme::silt(), &hw).unwrap(), 0.0);
    }

    #[test]
    fn silt_index_is_smaller_than_setmem() {
        let hw = CacheHardware::new(StorageTech::sram(), StorageTech::dram(), 8e9, 1500.0);
        let silt = hw.index_bits(&KvScheme::silt()) * hw.index_tech.power_per_bit;
        let setmem = hw.index_bits(&KvScheme::hc_setmem()) * hw.index_tech.power_per_bit;
        assert_relative_eq!(silt / setmem, 8.0 / 11.0, max_relative = 1e-12);
    }

    #[test]
    fn feasibility_examples() {
        let idle = CacheWorkload {
            arrival_rate: 0.0,
            query_fraction: 0.5,
            hit_rate: 0.1,
            write_prob: 0.01,
        };
        let hw = CacheHardware::new(StorageTech::dram(), StorageTech::flash(), 8e12, 1e6);
        assert!(kv_feasibility(&KvScheme::silt(), &hw, &idle).is_feasible());

        // Flash has no rate figure: any traffic violates the storage rate.
        let busy = CacheWorkload {
            arrival_rate: 1e3,
            ..idle
        };
        let verdict = kv_feasibility(&KvScheme::silt(), &hw, &busy);
        assert!(verdict.violates(Constraint::StorageRate));
        assert!(!verdict.violates(Constraint::IndexRate));

        let sram_dram = CacheHardware::new(StorageTech::sram(), StorageTech::dram(), 0.0, 1500.0);
        let max = max_storage_capacity(&KvScheme::silt(), &sram_dram);
        assert_relative_eq!(max / 8.0, 37.5e9, max_relative = 1e-12);
    }

    #[test]
    fn feasibility_reports_every_violation() {
        let mut hw = CacheHardware::new(StorageTech::sram(), StorageTech::dram(), 1e13, 100.0);
        hw.storage_tech.max_rate = Some(1.0);
        let wl = CacheWorkload {
            arrival_rate: 1e12,
            query_fraction: 0.5,
            hit_rate: 0.5,
            write_prob: 0.5,
        };
        let verdict = kv_feasibility(&KvScheme::silt(), &hw, &wl);
        assert_eq!(verdict.violations.len(), 4);
    }

    #[test]
    fn silt_rate_limited_below_setmem_on_dram_ssd() {
        let mut hw = CacheHardware::new(StorageTech::dram(), StorageTech::flash(), 8e12, 1e6);
        hw.storage_tech.max_rate = Some(50e3);
        let wl = CacheWorkload {
            arrival_rate: 0.0,
            query_fraction: 0.5,
            hit_rate: 0.1,
            write_prob: 0.01,
        };
        let silt = max_arrival_rate(&KvScheme::silt(), &hw, &wl).unwrap();
        let setmem = max_arrival_rate(&KvScheme::hc_setmem(), &hw, &wl).unwrap();
        assert!(silt < setmem);
        assert_relative_eq!(silt / setmem, 0.055 / 0.0705, max_relative = 1e-9);
    }

    #[test]
    fn edge_cache_energy() {
        assert_relative_eq!(edge_cache_energy_per_bit(), 60e-9, max_relative = 1e-12);
        assert_relative_eq!(8e9 * edge_cache_energy_per_bit(), 480.0, max_relative = 1e-12);
    }

    #[test]
    fn energy_per_bit_examples() {
        let hw = HardwareConfig::default();
        let scion_edge = energy_per_bit(Architecture::Scion, Role::Edge, &hw, 0.0, 1e6, 1.0).unwrap();
        assert_eq!(scion_edge.cache, 0.0);
        let ip_core = energy_per_bit(Architecture::Ip, Role::Core, &hw, 0.0, 1e6, 1.0).unwrap();
        assert_relative_eq!(ip_core.base, 16.8e3 / 6.4e12, max_relative = 1e-12);
        assert!(energy_per_bit(Architecture::Ip, Role::Core, &hw, 0.0, 1e6, 0.0).is_err());
    }

    #[test]
    fn loglru_kappa_range() {
        assert!(KvScheme::hc_loglru_with(1.0).is_err());
        assert_eq!(KvScheme::hc_loglru().index_bytes_per_object, 31.0 / 8.0);
    }
}
