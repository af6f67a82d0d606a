//! Acceptance gate: runs the twelve acceptance criteria at the default
//! configuration and prints one PASS/FAIL line for each.
//!
//! Exits non-zero when a criterion's outcome differs from `KNOWN_FAILURES`,
//! so a regression fails `cargo test`, and so does a known gap that starts
//! passing without the list being updated.

mod common;

use std::time::Instant;

use fiapower_core::cache::LruCache;
use fiapower_core::config::{ExperimentConfig, ExperimentKind};
use fiapower_core::experiments::{
    build_model, build_trace, run_experiment, run_fig3, run_fig6, run_fig8, run_fig9, sweep_cache_budget,
    sweep_discovery, sweep_zipf, RunGroup, SweepResult,
};
use fiapower_core::power::{
    baseline_power, bloom_params, max_storage_capacity, CacheHardware, KvScheme, RouterProfile, StorageTech,
};
use fiapower_core::sim::{simulate, Scenario};
use fiapower_core::workload::{ZipfSampler, ZipfSpec};
use fiapower_core::{Architecture, ContentId, Role};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose checks do not hold for this model, with the failing
/// sub-check. Each is analysed in the project notes.
const KNOWN_FAILURES: &[u32] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(results: &mut Vec<(bool, String)>, ok: bool, what: String) {
    results.push((ok, what));
}

fn collect(results: Vec<(bool, String)>) -> Outcome {
    let pass = results.iter().all(|r| r.0);
    let detail = results
        .iter()
        .map(|(ok, what)| format!("{}{what}", if *ok { "" } else { "!! " }))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_baseline_endpoints(_: &ExperimentConfig) -> Outcome {
    let mut r = Vec::new();
    for p in [RouterProfile::crs1(0.75), RouterProfile::ars1013(0.75)] {
        let lo = baseline_power(&p, 0.0).unwrap();
        let hi = baseline_power(&p, p.max_throughput).unwrap();
        check(
            &mut r,
            rel_err(lo, p.idle_power) <= 1e-12 && rel_err(hi, p.nameplate_power) <= 1e-12,
            format!("{}: P(0)={lo} P(max)={hi}", p.name),
        );
    }
    collect(r)
}

fn c2_fig3_ratios(cfg: &ExperimentConfig) -> Outcome {
    let t = run_fig3(cfg).unwrap();
    let v = |c: &str, g: f64| t.value(c, g).unwrap();
    let mut r = Vec::new();
    let a = v("IP", 1.0) / v("SCION", 1.0);
    check(&mut r, a >= 1e3, format!("IP/SCION@1G={a:.0} (>=1000)"));
    let b = v("IP", 10.0) / v("NEBULA", 10.0);
    check(&mut r, (5.0..=50.0).contains(&b), format!("IP/NEBULA@10G={b:.2} ([5,50])"));
    let c = v("NDN-500K", 1.0) / v("IP", 1.0);
    check(&mut r, c <= 0.2, format!("NDN-500K/IP@1G={c:.4} (<=0.2)"));
    let d = v("NDN-50M", 40.0) / v("IP", 40.0);
    check(&mut r, (6.0..=20.0).contains(&d), format!("NDN-50M/IP@40G={d:.3} ([6,20])"));
    collect(r)
}

fn c3_bloom_oracle(_: &ExperimentConfig) -> Outcome {
    let (m, n) = (100_000u64, 10_000u64);
    let p = bloom_params(m as f64, n as f64).unwrap();
    let k = p.hashes.round() as u32;
    let empirical = common::bloom_fp_rate(m, n, k, 100_000);
    let mut r = Vec::new();
    check(&mut r, k == 7, format!("round(k)={k}"));
    check(
        &mut r,
        rel_err(empirical, 0.00818) <= 0.30,
        format!("empirical f={empirical:.5} vs 0.00818 (±30%)"),
    );
    check(
        &mut r,
        rel_err(empirical, p.false_positive) <= 0.30,
        format!("model f={:.5}", p.false_positive),
    );
    collect(r)
}

fn c4_kv_boundary(_: &ExperimentConfig) -> Outcome {
    let scheme = KvScheme::silt();
    let hw = CacheHardware::new(StorageTech::sram(), StorageTech::dram(), 0.0, 1500.0);
    let bytes = max_storage_capacity(&scheme, &hw) / 8.0;
    // 200 Mbit of index at one byte per 1500 B object.
    let oracle = 200e6 / 8.0 / 1.0 * 1500.0;
    let mut r = Vec::new();
    check(&mut r, rel_err(bytes, 37.5e9) <= 0.01, format!("max C_st={:.4} GB (37.5 ±1%)", bytes / 1e9));
    check(&mut r, rel_err(bytes, oracle) <= 1e-12, format!("oracle {:.4} GB", oracle / 1e9));
    collect(r)
}

fn c5_fig6_ordering(cfg: &ExperimentConfig) -> Outcome {
    let rows = run_fig6(cfg).unwrap();
    let get = |a: Architecture, role: Role| rows.iter().find(|r| r.arch == a && r.role == role).unwrap().total;
    let e = |a| get(a, Role::Edge);
    let mut r = Vec::new();
    check(
        &mut r,
        e(Architecture::Ndn) > e(Architecture::Ip),
        format!("edge NDN {:.3} > IP {:.3} nJ/bit", e(Architecture::Ndn) * 1e9, e(Architecture::Ip) * 1e9),
    );
    check(
        &mut r,
        e(Architecture::Ip) > e(Architecture::Nebula) && e(Architecture::Nebula) > e(Architecture::Scion),
        format!(
            "edge IP > NEBULA {:.3} > SCION {:.3}",
            e(Architecture::Nebula) * 1e9,
            e(Architecture::Scion) * 1e9
        ),
    );
    let core = get(Architecture::Ndn, Role::Core) / get(Architecture::Scion, Role::Core) - 1.0;
    check(&mut r, core >= 0.40, format!("NDN core over SCION core {:+.1}% (>=40%)", core * 100.0));
    collect(r)
}

fn c6_fig8(groups: &[RunGroup]) -> Outcome {
    let mut r = Vec::new();
    for g in groups {
        let t = |a| g.find(a, fiapower_core::cache::Placement::None).unwrap().total_j;
        let pcs = (t(Architecture::Scion) + t(Architecture::Nebula)) / 2.0;
        let rtl = (t(Architecture::Ip) + t(Architecture::Ndn)) / 2.0;
        let gap = 1.0 - pcs / rtl;
        check(
            &mut r,
            (0.05..=0.25).contains(&gap)
                && t(Architecture::Ndn) < t(Architecture::Ip)
                && t(Architecture::Scion) < t(Architecture::Nebula),
            format!(
                "{}: PCS gap {:.1}%, NDN/IP {:.3}, SCION/NEBULA {:.3}",
                g.name,
                gap * 100.0,
                t(Architecture::Ndn) / t(Architecture::Ip),
                t(Architecture::Scion) / t(Architecture::Nebula)
            ),
        );
    }
    collect(r)
}

fn c7_fig9(g: &RunGroup) -> Outcome {
    use fiapower_core::cache::Placement::{Edge, None as NoCache, Pervasive};
    let n = |a, p| g.find(a, p).unwrap().normalized;
    let mut r = Vec::new();
    for (a, p) in [
        (Architecture::Ip, Edge),
        (Architecture::Ndn, Pervasive),
        (Architecture::Nebula, Edge),
        (Architecture::Scion, Edge),
    ] {
        let inc = n(a, p) / n(a, NoCache) - 1.0;
        check(&mut r, (0.10..=1.20).contains(&inc), format!("{a}-{p} {:+.1}%", inc * 100.0));
    }
    let ndn = n(Architecture::Ndn, Pervasive);
    let vs_scion = ndn / n(Architecture::Scion, Edge) - 1.0;
    check(&mut r, vs_scion.abs() <= 0.05, format!("NDN vs SCION-edge {:+.1}% (±5%)", vs_scion * 100.0));
    let vs_ip = ndn / n(Architecture::Ip, Edge) - 1.0;
    check(&mut r, vs_ip <= -0.08, format!("NDN vs IP-edge {:+.1}% (<=-8%)", vs_ip * 100.0));
    collect(r)
}

/// Linearly interpolated point where `ys` first changes sign from positive
/// to non-positive.
fn crossing(xs: &[f64], ys: &[f64]) -> Option<f64> {
    (1..xs.len()).find(|&i| ys[i - 1] > 0.0 && ys[i] <= 0.0).map(|i| {
        let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
        x0 + (x1 - x0) * y0 / (y0 - y1)
    })
}

fn monotone(s: &SweepResult, label: &str, non_decreasing: bool) -> bool {
    let v = &s.series(label).unwrap().normalized;
    v.windows(2)
        .all(|w| if non_decreasing { w[1] >= w[0] } else { w[1] <= w[0] })
}

const CACHING: [&str; 4] = ["IP-edge", "NDN-pervasive", "NEBULA-edge", "SCION-edge"];

fn c8_budget(s: &SweepResult) -> Outcome {
    let mut r = Vec::new();
    for label in CACHING {
        check(&mut r, monotone(s, label, true), format!("{label} non-decreasing"));
    }
    let ndn = &s.series("NDN-pervasive").unwrap().normalized;
    let edge = &s.series("SCION-edge").unwrap().normalized;
    let diff: Vec<f64> = ndn.iter().zip(edge).map(|(a, b)| a - b).collect();
    let x = crossing(&s.axis, &diff);
    check(
        &mut r,
        x.is_some_and(|c| (0.5..=0.9).contains(&c)),
        format!("NDN/SCION-edge crossover c={x:.3?} ([0.5,0.9])"),
    );
    let at1 = s.axis.iter().position(|&c| c == 1.0).unwrap();
    check(&mut r, ndn[at1] >= 2.0, format!("NDN at c=1 {:.3}x SCION-none (>=2)", ndn[at1]));
    collect(r)
}

fn c9_zipf(s: &SweepResult) -> Outcome {
    let mut r = Vec::new();
    for label in CACHING {
        check(&mut r, monotone(s, label, false), format!("{label} non-increasing"));
    }
    let ndn = &s.series("NDN-pervasive").unwrap().normalized;
    let above: Vec<f64> = ndn.iter().map(|v| v - 1.0).collect();
    let x = crossing(&s.axis, &above);
    check(
        &mut r,
        x.is_some_and(|a| (1.0..=1.3).contains(&a)),
        format!("NDN/SCION-none crossover alpha={x:.3?} ([1.0,1.3])"),
    );
    let i = s.axis.iter().position(|&a| a == 1.5).unwrap();
    let below = 1.0 - ndn[i];
    check(
        &mut r,
        (0.15..=0.35).contains(&below),
        format!("NDN at alpha=1.5 {:.1}% below (15-35%)", below * 100.0),
    );
    collect(r)
}

fn c10_discovery(s: &SweepResult) -> Outcome {
    let mut r = Vec::new();
    let total = |arch: &str, strategy: &str| {
        let i = s.axis_labels.iter().position(|l| l == strategy).unwrap();
        s.series(arch).unwrap().total_j[i]
    };
    let pairs = [
        ("IP", "simple_edge", "cooperative_edge"),
        ("NEBULA", "simple_edge", "cooperative_edge"),
        ("SCION", "simple_edge", "cooperative_edge"),
        ("NDN", "on_path", "nearest_copy"),
    ];
    for (arch, base, other) in pairs {
        let d = (total(arch, other) - total(arch, base)).abs() / total(arch, base);
        check(&mut r, d <= 0.05, format!("{arch} {other} vs {base} {:.2}%", d * 100.0));
    }
    collect(r)
}

fn c11_oracles(cfg: &ExperimentConfig) -> Outcome {
    let mut r = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    for _ in 0..100_000 {
        let cap = rng.gen_range(1..=16u64);
        let mut fast = LruCache::new(cap);
        let mut slow = common::NaiveLru::new(cap);
        for _ in 0..rng.gen_range(1..40) {
            let id = ContentId(rng.gen_range(0..24));
            let same = if rng.gen_bool(0.5) {
                fast.get(id) == slow.get(id)
            } else {
                let size = if rng.gen_bool(0.05) { cap + 1 } else { 1 };
                fast.put(id, size) == slow.put(id, size)
            };
            if !same || fast.iter().collect::<Vec<_>>() != slow.order() {
                mismatches += 1;
                break;
            }
        }
    }
    check(&mut r, mismatches == 0, format!("LRU vs reference: {mismatches} of 100000 sequences differ"));

    let model = build_model(cfg, 0).unwrap();
    let trace = build_trace(cfg, &model, cfg.workload.alpha).unwrap();
    for arch in Architecture::ALL {
        let rep = simulate(&model, &trace, &Scenario::no_cache(arch), &cfg.hardware, &cfg.sim).unwrap();
        let expect = common::closed_form_bits(&model, &trace, arch, &cfg.sim);
        check(
            &mut r,
            rep.total_bits == expect,
            format!("{arch} bits {} vs closed form {expect}", rep.total_bits),
        );
    }

    let sampler = ZipfSampler::new(ZipfSpec {
        exponent: cfg.workload.alpha,
        support: cfg.workload.catalog.num_contents,
    })
    .unwrap();
    let n = 1_000_000;
    let mut counts = vec![0u64; 100];
    for c in sampler.clone().stream(cfg.seed).take(n) {
        if c.index() < 100 {
            counts[c.index()] += 1;
        }
    }
    let worst = (0..100)
        .map(|i| rel_err(counts[i] as f64, sampler.pmf(i) * n as f64))
        .fold(0.0, f64::max);
    check(&mut r, worst <= 0.10, format!("Zipf top-100 worst deviation {:.2}%", worst * 100.0));
    collect(r)
}

fn c12_determinism(cfg: &ExperimentConfig) -> Outcome {
    let mut r = Vec::new();
    let mut single = cfg.clone();
    single.jobs = 1;
    for kind in ExperimentKind::ALL {
        let a = run_experiment(kind, cfg).unwrap();
        let b = run_experiment(kind, cfg).unwrap();
        // One worker instead of many must not change any number.
        let c = if kind == ExperimentKind::Fig9 { run_experiment(kind, &single).unwrap() } else { b.clone() };
        let csv = |o: &fiapower_core::experiments::Outcome| {
            o.files
                .iter()
                .filter(|(n, _)| n.ends_with(".csv"))
                .cloned()
                .collect::<Vec<_>>()
        };
        let n = csv(&a).len();
        check(
            &mut r,
            n > 0 && a.files == b.files && csv(&a) == csv(&c),
            format!("{kind}: {n} CSVs identical"),
        );
    }
    collect(r)
}

fn main() {
    let cfg = ExperimentConfig::default();
    let started = Instant::now();
    let fig8 = run_fig8(&cfg).unwrap();
    let fig9 = run_fig9(&cfg).unwrap();
    let budget = sweep_cache_budget(&cfg).unwrap();
    let zipf = sweep_zipf(&cfg).unwrap();
    let discovery = sweep_discovery(&cfg).unwrap();
    println!("simulation suite finished in {:.1?}", started.elapsed());

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "baseline power endpoints", c1_baseline_endpoints(&cfg)),
        (2, "forwarding power ratios vs link speed", c2_fig3_ratios(&cfg)),
        (3, "Bloom filter false-positive oracle", c3_bloom_oracle(&cfg)),
        (4, "key-value store capacity boundary", c4_kv_boundary(&cfg)),
        (5, "per-bit router energy ordering", c5_fig6_ordering(&cfg)),
        (6, "no-cache comparison", c6_fig8(&fig8)),
        (7, "caching at the baseline budget", c7_fig9(&fig9)),
        (8, "cache budget sweep", c8_budget(&budget)),
        (9, "Zipf exponent sweep", c9_zipf(&zipf)),
        (10, "discovery strategy sweep", c10_discovery(&discovery)),
        (11, "oracle equivalence", c11_oracles(&cfg)),
        (12, "determinism", c12_determinism(&cfg)),
    ];

    let mut unexpected = Vec::new();
    for (id, name, o) in &results {
        let known = KNOWN_FAILURES.contains(id);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {tag:<12} {name}: {}", o.detail);
        if o.pass == known {
            unexpected.push(*id);
        }
    }
    println!("total time {:.1?}", started.elapsed());
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
