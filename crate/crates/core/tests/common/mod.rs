//! Reference implementations shared by the integration tests. They are
//! deliberately naive so they can serve as oracles for the library code.

#![allow(dead_code)]

use std::collections::VecDeque;

use fiapower_core::cache::PutOutcome;
use fiapower_core::sim::{packetize, SimParams};
use fiapower_core::topology::NetworkModel;
use fiapower_core::workload::QueryTrace;
use fiapower_core::{Architecture, ContentId};

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Plain Bloom filter over u64 keys with double hashing.
pub struct BloomFilter {
    words: Vec<u64>,
    m: u64,
    k: u32,
}

impl BloomFilter {
    pub fn new(m: u64, k: u32) -> Self {
        Self {
            words: vec![0; m.div_ceil(64) as usize],
            m,
            k,
        }
    }

    fn positions(&self, key: u64) -> impl Iterator<Item = u64> + '_ {
        let h1 = mix(key.wrapping_add(0x9e37_79b9_7f4a_7c15));
        let h2 = mix(key ^ 0xdead_beef_cafe_f00d) | 1;
        (0..u64::from(self.k)).map(move |i| h1.wrapping_add(i.wrapping_mul(h2)) % self.m)
    }

    pub fn insert(&mut self, key: u64) {
        let pos: Vec<u64> = self.positions(key).collect();
        for p in pos {
            self.words[(p / 64) as usize] |= 1 << (p % 64);
        }
    }

    pub fn contains(&self, key: u64) -> bool {
        self.positions(key).all(|p| self.words[(p / 64) as usize] >> (p % 64) & 1 == 1)
    }
}

/// Empirical false-positive rate of a filter holding `n` keys in `m` bits,
/// measured with `probes` keys never inserted.
pub fn bloom_fp_rate(m: u64, n: u64, k: u32, probes: u64) -> f64 {
    let mut f = BloomFilter::new(m, k);
    for key in 0..n {
        f.insert(key);
    }
    let hits = (n..n + probes).filter(|&key| f.contains(key)).count();
    hits as f64 / probes as f64
}

/// LRU cache kept as a most-recent-first vector.
#[derive(Debug, Default)]
pub struct NaiveLru {
    pub capacity: u64,
    pub entries: Vec<(ContentId, u64)>,
}

impl NaiveLru {
    pub fn new(capacity: u64) -> Self {
        Self {
            capacity,
            entries: Vec::new(),
        }
    }

    pub fn get(&mut self, id: ContentId) -> bool {
        match self.entries.iter().position(|e| e.0 == id) {
            Some(i) => {
                let e = self.entries.remove(i);
                self.entries.insert(0, e);
                true
            }
            None => false,
        }
    }

    pub fn put(&mut self, id: ContentId, size: u64) -> PutOutcome {
        if self.get(id) {
            return PutOutcome::Present;
        }
        if size > self.capacity {
            return PutOutcome::Uncacheable;
        }
        let mut evicted = Vec::new();
        while self.entries.iter().map(|e| e.1).sum::<u64>() + size > self.capacity {
            evicted.push(self.entries.pop().expect("non-empty while over capacity").0);
        }
        self.entries.insert(0, (id, size));
        PutOutcome::Inserted { evicted }
    }

    pub fn order(&self) -> Vec<ContentId> {
        self.entries.iter().map(|e| e.0).collect()
    }
}

/// PoP-level hop counts by breadth-first search over the PoP graph.
pub fn pop_distances(model: &NetworkModel) -> Vec<Vec<u32>> {
    let adj = model.graph.adjacency();
    (0..adj.len())
        .map(|s| {
            let mut d = vec![u32::MAX; adj.len()];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if d[v] == u32::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

/// Bits a cache-free run must transmit, from hop counts alone: each query
/// packet crosses every hop once, each response packet every hop plus the
/// final delivery from the leaf.
pub fn closed_form_bits(model: &NetworkModel, trace: &QueryTrace, arch: Architecture, params: &SimParams) -> u64 {
    let dist = pop_distances(model);
    let header = params.headers.get(arch);
    let packets = packetize(trace.meta.content_size, &params.packets).unwrap();
    let warmup = params.warmup_queries(trace.len());
    let to_bits = |bytes: f64| (bytes * 8.0).round() as u64;
    trace.events[warmup..]
        .iter()
        .map(|q| {
            let leaf = model.node(q.leaf);
            let origin = model.node(model.origin_of[q.content.index()]);
            let as_hops = dist[leaf.pop][origin.pop];
            let hops = leaf.depth + as_hops + origin.depth;
            let h = header.fixed_bytes + header.per_hop_bytes * f64::from(hops) + header.per_as_hop_bytes * f64::from(as_hops);
            let query = to_bits(params.packets.query_bytes as f64 + h);
            let response = to_bits(params.packets.payload_bytes as f64 + h);
            query * u64::from(hops) + packets * response * u64::from(hops + 1)
        })
        .sum()
}
