//! LRU content stores, cache-budget placement and cache discovery.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::NetworkModel;
use crate::types::{ContentId, NodeId, Role};
use crate::workload::Catalog;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Slot {
    id: ContentId,
    size: u64,
    prev: usize,
    next: usize,
}

/// Byte-capacity LRU cache. Entries live in a slab threaded by a doubly
/// linked recency list; `head` is the most recently used entry.
#[derive(Debug, Clone)]
pub struct LruCache {
    capacity: u64,
    occupancy: u64,
    slots: Vec<Slot>,
    free: Vec<usize>,
    index: HashMap<ContentId, usize>,
    head: usize,
    tail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PutOutcome {
    Inserted { evicted: Vec<ContentId> },
    /// Already cached; recency refreshed.
    Present,
    /// Larger than the whole cache; nothing changed.
    Uncacheable,
}

impl LruCache {
    pub fn new(capacity: u64) -> Self {
        Self {
            capacity,
            occupancy: 0,
            slots: Vec::new(),
            free: Vec::new(),
            index: HashMap::new(),
            head: NIL,
            tail: NIL,
        }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn occupancy(&self) -> u64 {
        self.occupancy
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Membership test that leaves recency untouched.
    pub fn contains(&self, id: ContentId) -> bool {
        self.index.contains_key(&id)
    }

    /// Looks `id` up; a hit makes it the most recent entry.
    pub fn get(&mut self, id: ContentId) -> bool {
        match self.index.get(&id) {
            Some(&slot) => {
                self.unlink(slot);
                self.push_front(slot);
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
        while self.occupancy + size > self.capacity {
            let victim = self.tail;
            self.unlink(victim);
            let slot = &self.slots[victim];
            self.occupancy -= slot.size;
            self.index.remove(&slot.id);
            evicted.push(slot.id);
            self.free.push(victim);
        }
        let slot = Slot {
            id,
            size,
            prev: NIL,
            next: NIL,
        };
        let at = match self.free.pop() {
            Some(i) => {
                self.slots[i] = slot;
                i
            }
            None => {
                self.slots.push(slot);
                self.slots.len() - 1
            }
        };
        self.push_front(at);
        self.index.insert(id, at);
        self.occupancy += size;
        PutOutcome::Inserted { evicted }
    }

    /// Entries from most to least recently used.
    pub fn iter(&self) -> impl Iterator<Item = ContentId> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            (cur != NIL).then(|| {
                let slot = &self.slots[cur];
                cur = slot.next;
                slot.id
            })
        })
    }

    fn unlink(&mut self, i: usize) {
        let (prev, next) = (self.slots[i].prev, self.slots[i].next);
        match prev {
            NIL => self.head = next,
            p => self.slots[p].next = next,
        }
        match next {
            NIL => self.tail = prev,
            n => self.slots[n].prev = prev,
        }
    }

    fn push_front(&mut self, i: usize) {
        self.slots[i].prev = NIL;
        self.slots[i].next = self.head;
        match self.head {
            NIL => self.tail = i,
            h => self.slots[h].prev = i,
        }
        self.head = i;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    None,
    /// Only access-tree leaves cache.
    Edge,
    /// Every router caches.
    Pervasive,
}

impl Placement {
    pub fn name(self) -> &'static str {
        match self {
            Placement::None => "none",
            Placement::Edge => "edge",
            Placement::Pervasive => "pervasive",
        }
    }
}

impl std::fmt::Display for Placement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscoveryStrategy {
    SimpleEdge,
    CooperativeEdge,
    OnPath,
    NearestCopy,
}

impl DiscoveryStrategy {
    pub const ALL: [DiscoveryStrategy; 4] = [
        DiscoveryStrategy::SimpleEdge,
        DiscoveryStrategy::CooperativeEdge,
        DiscoveryStrategy::OnPath,
        DiscoveryStrategy::NearestCopy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiscoveryStrategy::SimpleEdge => "simple_edge",
            DiscoveryStrategy::CooperativeEdge => "cooperative_edge",
            DiscoveryStrategy::OnPath => "on_path",
            DiscoveryStrategy::NearestCopy => "nearest_copy",
        }
    }

    pub fn placement(self) -> Placement {
        match self {
            DiscoveryStrategy::SimpleEdge | DiscoveryStrategy::CooperativeEdge => Placement::Edge,
            DiscoveryStrategy::OnPath | DiscoveryStrategy::NearestCopy => Placement::Pervasive,
        }
    }
}

impl std::fmt::Display for DiscoveryStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CacheDeployment {
    pub placement: Placement,
    /// c = R·C / (O·s).
    pub budget_ratio: f64,
}

impl CacheDeployment {
    pub fn none() -> Self {
        Self {
            placement: Placement::None,
            budget_ratio: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.budget_ratio) {
            return Err(Error::config(format!(
                "cache budget ratio {} must lie in [0, 1]",
                self.budget_ratio
            )));
        }
        Ok(())
    }

    /// Routers that may hold a cache under this placement.
    pub fn caching_nodes(&self, model: &NetworkModel) -> Vec<NodeId> {
        match self.placement {
            Placement::None => Vec::new(),
            Placement::Edge => model.leaves().collect(),
            Placement::Pervasive => model.nodes.iter().map(|n| n.id).collect(),
        }
    }

    /// Per-node capacity C = c·O·s / R, floored to whole bytes.
    pub fn per_node_capacity(&self, model: &NetworkModel, catalog: &Catalog) -> u64 {
        let r = self.caching_nodes(model).len();
        if r == 0 {
            return 0;
        }
        (self.budget_ratio * catalog.total_bytes() / r as f64).floor() as u64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
    pub bytes_served: u64,
}

/// Cache state of one simulation run: an optional LRU per router plus an
/// index from content to the routers currently holding it.
#[derive(Debug, Clone)]
pub struct CacheMap {
    caches: Vec<Option<LruCache>>,
    holders: Vec<Vec<NodeId>>,
    stats: Vec<CacheStats>,
    content_size: u64,
    per_node_capacity: u64,
}

pub fn place_caches(model: &NetworkModel, deployment: &CacheDeployment, catalog: &Catalog) -> Result<CacheMap> {
    deployment.validate()?;
    catalog.validate()?;
    let capacity = deployment.per_node_capacity(model, catalog);
    let mut caches = vec![None; model.num_nodes()];
    if capacity > 0 {
        for node in deployment.caching_nodes(model) {
            caches[node.index()] = Some(LruCache::new(capacity));
        }
    }
    Ok(CacheMap {
        caches,
        holders: vec![Vec::new(); catalog.num_contents as usize],
        stats: vec![CacheStats::default(); model.num_nodes()],
        content_size: catalog.content_size,
        per_node_capacity: capacity,
    })
}

impl CacheMap {
    pub fn cache(&self, node: NodeId) -> Option<&LruCache> {
        self.caches.get(node.index()).and_then(Option::as_ref)
    }

    pub fn has_cache(&self, node: NodeId) -> bool {
        self.cache(node).is_some()
    }

    pub fn caching_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.caches
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn per_node_capacity(&self) -> u64 {
        self.per_node_capacity
    }

    /// Sum of provisioned capacity, bytes.
    pub fn total_capacity(&self) -> u64 {
        self.caches.iter().flatten().map(LruCache::capacity).sum()
    }

    pub fn stats(&self, node: NodeId) -> CacheStats {
        self.stats[node.index()]
    }

    /// Routers currently caching `content`, in insertion order.
    pub fn holders(&self, content: ContentId) -> &[NodeId] {
        self.holders.get(content.index()).map_or(&[], Vec::as_slice)
    }

    /// Lookup at `node`, counting a hit or a miss.
    fn lookup(&mut self, node: NodeId, content: ContentId) -> bool {
        let Some(cache) = self.caches[node.index()].as_mut() else {
            return false;
        };
        let hit = cache.get(content);
        let stats = &mut self.stats[node.index()];
        if hit {
            stats.hits += 1;
            stats.bytes_served += self.content_size;
        } else {
            stats.misses += 1;
        }
        hit
    }

    /// Inserts `content` at `node` if it has a cache; returns whether the
    /// cache now holds it.
    fn insert(&mut self, node: NodeId, content: ContentId) -> bool {
        let Some(cache) = self.caches[node.index()].as_mut() else {
            return false;
        };
        match cache.put(content, self.content_size) {
            PutOutcome::Present => true,
            PutOutcome::Uncacheable => false,
            PutOutcome::Inserted { evicted } => {
                self.stats[node.index()].evictions += evicted.len() as u64;
                for old in evicted {
                    let list = &mut self.holders[old.index()];
                    if let Some(pos) = list.iter().position(|&n| n == node) {
                        list.swap_remove(pos);
                    }
                }
                self.holders[content.index()].push(node);
                true
            }
        }
    }
}

/// Outcome of resolving one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServingDecision {
    pub serving_node: NodeId,
    /// True when a cache (not the origin) served the content.
    pub cache_hit: bool,
    /// Requesting leaf to serving node.
    pub query_path: Vec<NodeId>,
    /// Serving node back to the requesting leaf.
    pub response_path: Vec<NodeId>,
    pub inserted_at: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolveOptions {
    /// Cooperative edge caching: copy remote hits into the requesting leaf.
    pub coop_insert_at_requester: bool,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        Self {
            coop_insert_at_requester: true,
        }
    }
}

fn decision(
    model: &NetworkModel,
    leaf: NodeId,
    serving_node: NodeId,
    cache_hit: bool,
    inserted_at: Vec<NodeId>,
) -> Result<ServingDecision> {
    let query_path = model.shortest_path(leaf, serving_node)?;
    let mut response_path = query_path.clone();
    response_path.reverse();
    Ok(ServingDecision {
        serving_node,
        cache_hit,
        query_path,
        response_path,
        inserted_at,
    })
}

/// Closest of the routers holding `content` and its origin; ties go to the
/// smallest node id. Returns the node and whether it is a cache.
fn nearest_source(
    model: &NetworkModel,
    caches: &CacheMap,
    leaf: NodeId,
    content: ContentId,
    origin: NodeId,
) -> (NodeId, bool) {
    let mut best = (model.hop_distance(leaf, origin), origin, false);
    for &h in caches.holders(content) {
        let d = model.hop_distance(leaf, h);
        if (d, h) < (best.0, best.1) {
            best = (d, h, true);
        }
    }
    (best.1, best.2)
}

/// Resolves a query from `leaf` for `content` and applies the LRU updates.
pub fn resolve_query(
    strategy: DiscoveryStrategy,
    model: &NetworkModel,
    caches: &mut CacheMap,
    leaf: NodeId,
    content: ContentId,
    opts: &ResolveOptions,
) -> Result<ServingDecision> {
    let origin = model.origin(content)?;
    if !model.contains(leaf) || model.role(leaf) != Role::Leaf {
        return Err(Error::Model(format!("queries must enter at a leaf, got {leaf}")));
    }
    match strategy {
        DiscoveryStrategy::SimpleEdge => {
            if caches.lookup(leaf, content) {
                return decision(model, leaf, leaf, true, Vec::new());
            }
            let inserted = caches.insert(leaf, content).then_some(leaf).into_iter().collect();
            decision(model, leaf, origin, false, inserted)
        }
        DiscoveryStrategy::CooperativeEdge => {
            if caches.lookup(leaf, content) {
                return decision(model, leaf, leaf, true, Vec::new());
            }
            let (source, is_cache) = nearest_source(model, caches, leaf, content, origin);
            if is_cache {
                caches.lookup(source, content);
            }
            let insert = !is_cache || opts.coop_insert_at_requester;
            let inserted = (insert && caches.insert(leaf, content))
                .then_some(leaf)
                .into_iter()
                .collect();
            decision(model, leaf, source, is_cache, inserted)
        }
        DiscoveryStrategy::OnPath => {
            let path = model.shortest_path(leaf, origin)?;
            let mut serving = path.len() - 1;
            let mut hit = false;
            for (i, &node) in path.iter().enumerate() {
                if caches.lookup(node, content) {
                    serving = i;
                    hit = true;
                    break;
                }
            }
            let query_path = path[..=serving].to_vec();
            let mut response_path = query_path.clone();
            response_path.reverse();
            let skip = usize::from(hit);
            let inserted = response_path[skip..]
                .iter()
                .copied()
                .filter(|&n| caches.insert(n, content))
                .collect();
            Ok(ServingDecision {
                serving_node: path[serving],
                cache_hit: hit,
                query_path,
                response_path,
                inserted_at: inserted,
            })
        }
        DiscoveryStrategy::NearestCopy => {
            let (source, is_cache) = nearest_source(model, caches, leaf, content, origin);
            if is_cache {
                caches.lookup(source, content);
            }
            let mut d = decision(model, leaf, source, is_cache, Vec::new())?;
            let skip = usize::from(is_cache);
            d.inserted_at = d.response_path[skip..]
                .iter()
                .copied()
                .filter(|&n| caches.insert(n, content))
                .collect();
            Ok(d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::HardwareConfig;
    use crate::topology::{assign_origins, attach_access_trees, AccessTreeSpec, LinkSpeeds, PopGraph};
    use proptest::prelude::*;

    fn ids(xs: &[u32]) -> Vec<ContentId> {
        xs.iter().map(|&x| ContentId(x)).collect()
    }

    #[test]
    fn lru_examples() {
        let mut c = LruCache::new(2);
        assert!(!c.get(ContentId(1)));
        c.put(ContentId(1), 1);
        c.put(ContentId(2), 1);
        assert!(c.get(ContentId(1)));
        assert_eq!(
            c.put(ContentId(3), 1),
            PutOutcome::Inserted { evicted: ids(&[2]) }
        );
        assert!(c.get(ContentId(1)) && c.get(ContentId(1)));

        let mut c = LruCache::new(3);
        for x in 0..3 {
            assert_eq!(c.put(ContentId(x), 1), PutOutcome::Inserted { evicted: vec![] });
        }
        assert_eq!(c.put(ContentId(3), 1), PutOutcome::Inserted { evicted: ids(&[0]) });
        assert_eq!(c.iter().collect::<Vec<_>>(), ids(&[3, 2, 1]));
        assert_eq!(c.put(ContentId(9), 4), PutOutcome::Uncacheable);
        assert_eq!(c.occupancy(), 3);
    }

    fn model() -> NetworkModel {
        let hw = HardwareConfig::default();
        let profiles = [Role::Core, Role::Edge, Role::Leaf]
            .into_iter()
            .map(|r| (r, hw.profile(r)))
            .collect();
        let g = PopGraph::parse("pop 0 a 1\npop 1 b 1\npop 2 c 1\nlink 0 1 1\nlink 1 2 1\n").unwrap();
        let mut m = attach_access_trees(g, AccessTreeSpec { depth: 2, arity: 2 }, profiles, &LinkSpeeds::default())
            .unwrap();
        assign_origins(&mut m, 100, 1).unwrap();
        m.origin_of = vec![NodeId(2); 100];
        m
    }

    fn catalog() -> Catalog {
        Catalog {
            num_contents: 100,
            content_size: 10,
        }
    }

    #[test]
    fn placement_capacity() {
        let m = model();
        let cat = catalog();
        let none = place_caches(&m, &CacheDeployment { placement: Placement::Pervasive, budget_ratio: 0.0 }, &cat).unwrap();
        assert_eq!(none.caching_nodes().count(), 0);
        let full = place_caches(&m, &CacheDeployment { placement: Placement::Edge, budget_ratio: 1.0 }, &cat).unwrap();
        assert_eq!(full.caching_nodes().count(), 12);
        assert_eq!(full.per_node_capacity(), 1000 / 12);
        assert!(place_caches(&m, &CacheDeployment { placement: Placement::Edge, budget_ratio: 1.5 }, &cat).is_err());

        let big = Catalog {
            num_contents: 1_000_000,
            content_size: 1_000_000,
        };
        let d = CacheDeployment {
            placement: Placement::Pervasive,
            budget_ratio: 0.05,
        };
        // 0.05 · 10^12 B over 21 routers.
        assert_eq!(d.per_node_capacity(&m, &big), (0.05e12f64 / 21.0).floor() as u64);
    }

    #[test]
    fn cold_caches_serve_from_origin() {
        let m = model();
        let leaf = NodeId(m.leaves_of(0).start);
        for s in DiscoveryStrategy::ALL {
            let d = CacheDeployment {
                placement: s.placement(),
                budget_ratio: 0.5,
            };
            let mut caches = place_caches(&m, &d, &catalog()).unwrap();
            let r = resolve_query(s, &m, &mut caches, leaf, ContentId(3), &ResolveOptions::default()).unwrap();
            assert_eq!(r.serving_node, NodeId(2));
            assert!(!r.cache_hit);
            assert_eq!(r.query_path.first(), Some(&leaf));
            let mut back = r.response_path.clone();
            back.reverse();
            assert_eq!(back, r.query_path);
        }
    }

    #[test]
    fn on_path_second_query_hits_leaf() {
        let m = model();
        let leaf = NodeId(m.leaves_of(0).start);
        let d = CacheDeployment {
            placement: Placement::Pervasive,
            budget_ratio: 1.0,
        };
        let mut caches = place_caches(&m, &d, &catalog()).unwrap();
        let opts = ResolveOptions::default();
        let first = resolve_query(DiscoveryStrategy::OnPath, &m, &mut caches, leaf, ContentId(4), &opts).unwrap();
        assert_eq!(first.inserted_at.len(), first.response_path.len());
        let second = resolve_query(DiscoveryStrategy::OnPath, &m, &mut caches, leaf, ContentId(4), &opts).unwrap();
        assert_eq!(second.serving_node, leaf);
        assert!(second.cache_hit);
        assert_eq!(second.response_path, vec![leaf]);
        assert!(second.inserted_at.is_empty());

        // A sibling leaf finds it one level up under on-path discovery.
        let sibling = NodeId(leaf.0 + 1);
        let third = resolve_query(DiscoveryStrategy::OnPath, &m, &mut caches, sibling, ContentId(4), &opts).unwrap();
        assert_eq!(third.query_path.len(), 2);
    }

    #[test]
    fn cooperative_edge_uses_remote_leaf() {
        let m = model();
        let leaves: Vec<NodeId> = m.leaves_of(0).map(NodeId).collect();
        let d = CacheDeployment {
            placement: Placement::Edge,
            budget_ratio: 1.0,
        };
        let mut caches = place_caches(&m, &d, &catalog()).unwrap();
        let opts = ResolveOptions::default();
        resolve_query(DiscoveryStrategy::CooperativeEdge, &m, &mut caches, leaves[0], ContentId(1), &opts).unwrap();
        let r = resolve_query(DiscoveryStrategy::CooperativeEdge, &m, &mut caches, leaves[1], ContentId(1), &opts)
            .unwrap();
        assert_eq!(r.serving_node, leaves[0]);
        assert!(r.cache_hit);
        assert_eq!(r.inserted_at, vec![leaves[1]]);
        assert_eq!(caches.holders(ContentId(1)).len(), 2);

        let no_copy = ResolveOptions {
            coop_insert_at_requester: false,
        };
        resolve_query(DiscoveryStrategy::CooperativeEdge, &m, &mut caches, leaves[0], ContentId(2), &opts).unwrap();
        let r = resolve_query(DiscoveryStrategy::CooperativeEdge, &m, &mut caches, leaves[1], ContentId(2), &no_copy)
            .unwrap();
        assert!(r.cache_hit && r.inserted_at.is_empty());
    }

    #[test]
    fn rejects_non_leaf_and_unknown_origin() {
        let mut m = model();
        let d = CacheDeployment::none();
        let mut caches = place_caches(&m, &d, &catalog()).unwrap();
        let opts = ResolveOptions::default();
        assert!(resolve_query(DiscoveryStrategy::SimpleEdge, &m, &mut caches, NodeId(0), ContentId(0), &opts).is_err());
        m.origin_of.clear();
        let leaf = NodeId(m.leaves_of(0).start);
        assert!(matches!(
            resolve_query(DiscoveryStrategy::SimpleEdge, &m, &mut caches, leaf, ContentId(0), &opts),
            Err(Error::Model(_))
        ));
    }

    proptest! {
        #[test]
        fn response_never_longer_than_origin_path(
            queries in proptest::collection::vec((0usize..12, 0u32..10), 1..80),
            budget in 0.0f64..=1.0,
            which in 0usize..4,
        ) {
            let m = model();
            let strategy = DiscoveryStrategy::ALL[which];
            let d = CacheDeployment { placement: strategy.placement(), budget_ratio: budget };
            let mut caches = place_caches(&m, &d, &catalog()).unwrap();
            let leaves: Vec<NodeId> = m.leaves().collect();
            for (l, c) in queries {
                let leaf = leaves[l];
                let r = resolve_query(strategy, &m, &mut caches, leaf, ContentId(c), &ResolveOptions::default()).unwrap();
                let direct = m.hop_distance(leaf, m.origin(ContentId(c)).unwrap());
                prop_assert!(r.response_path.len() as u32 - 1 <= direct);
                for node in caches.caching_nodes().collect::<Vec<_>>() {
                    let cache = caches.cache(node).unwrap();
                    prop_assert!(cache.occupancy() <= cache.capacity());
                }
            }
        }

        #[test]
        fn nearest_copy_never_farther_than_on_path(
            warm in proptest::collection::vec((0usize..12, 0u32..10), 0..60),
            probe in (0usize..12, 0u32..10),
        ) {
            let m = model();
            let d = CacheDeployment { placement: Placement::Pervasive, budget_ratio: 0.3 };
            let mut caches = place_caches(&m, &d, &catalog()).unwrap();
            let leaves: Vec<NodeId> = m.leaves().collect();
            let opts = ResolveOptions::default();
            for (l, c) in warm {
                resolve_query(DiscoveryStrategy::OnPath, &m, &mut caches, leaves[l], ContentId(c), &opts).unwrap();
            }
            let mut twin = caches.clone();
            let a = resolve_query(DiscoveryStrategy::NearestCopy, &m, &mut caches, leaves[probe.0], ContentId(probe.1), &opts).unwrap();
            let b = resolve_query(DiscoveryStrategy::OnPath, &m, &mut twin, leaves[probe.0], ContentId(probe.1), &opts).unwrap();
            prop_assert!(a.response_path.len() <= b.response_path.len());
        }
    }
}
