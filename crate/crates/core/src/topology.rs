//! PoP-level core graphs, access trees and minimum-hop routing.
//!
//! Node ids are dense. The PoP routers come first (node `i` is the core
//! router of the `i`-th PoP in file order), followed by each PoP's access
//! tree laid out level by level.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power::RouterProfile;
use crate::types::{NodeId, Role};

pub const DEFAULT_CORE_LINK_BPS: f64 = 40e9;
pub const DEFAULT_EDGE_LINK_BPS: f64 = 10e9;
pub const DEFAULT_LEAF_LINK_BPS: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pop {
    pub id: u32,
    pub city: String,
    pub population: u64,
}

/// Undirected link between two PoPs, stored by PoP index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopLink {
    pub a: usize,
    pub b: usize,
    pub capacity_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopGraph {
    pub pops: Vec<Pop>,
    pub links: Vec<PopLink>,
}

impl PopGraph {
    /// Builds a graph from PoPs and links given by PoP *id*, checking ids,
    /// self-loops, duplicate edges and connectivity.
    pub fn new(pops: Vec<Pop>, links: &[(u32, u32, f64)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, pop) in pops.iter().enumerate() {
            if index.insert(pop.id, i).is_some() {
                return Err(Error::config(format!("duplicate pop id {}", pop.id)));
            }
        }
        let mut graph = PopGraph {
            pops,
            links: Vec::with_capacity(links.len()),
        };
        let mut seen = HashSet::new();
        for &(a, b, capacity_bps) in links {
            let link = resolve_link(&index, &mut seen, a, b, capacity_bps).map_err(Error::Config)?;
            graph.links.push(link);
        }
        graph.check_connected()?;
        Ok(graph)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pops = Vec::new();
        let mut index = HashMap::new();
        let mut links = Vec::new();
        let mut seen = HashSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let parse_err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "pop" => {
                    if fields.len() != 4 {
                        return Err(parse_err("expected `pop <id> <city> <population>`".into()));
                    }
                    let id: u32 = parse_field(fields[1], "pop id").map_err(parse_err)?;
                    let population: u64 = parse_field(fields[3], "population").map_err(parse_err)?;
                    if index.insert(id, pops.len()).is_some() {
                        return Err(parse_err(format!("duplicate pop id {id}")));
                    }
                    pops.push(Pop {
                        id,
                        city: fields[2].to_string(),
                        population,
                    });
                }
                "link" => {
                    if fields.len() != 4 {
                        return Err(parse_err("expected `link <id_a> <id_b> <capacity_bps>`".into()));
                    }
                    let a: u32 = parse_field(fields[1], "pop id").map_err(parse_err)?;
                    let b: u32 = parse_field(fields[2], "pop id").map_err(parse_err)?;
                    let capacity: f64 = parse_field(fields[3], "capacity").map_err(parse_err)?;
                    let link = resolve_link(&index, &mut seen, a, b, capacity).map_err(parse_err)?;
                    links.push(link);
                }
                other => return Err(parse_err(format!("unknown directive `{other}`"))),
            }
        }
        if pops.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "no pop lines".into(),
            });
        }
        let graph = PopGraph { pops, links };
        graph.check_connected()?;
        Ok(graph)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for pop in &self.pops {
            out.push_str(&format!("pop {} {} {}\n", pop.id, pop.city, pop.population));
        }
        for link in &self.links {
            out.push_str(&format!(
                "link {} {} {}\n",
                self.pops[link.a].id, self.pops[link.b].id, link.capacity_bps
            ));
        }
        out
    }

    pub fn num_pops(&self) -> usize {
        self.pops.len()
    }

    /// Sorted neighbor lists by PoP index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.pops.len()];
        for link in &self.links {
            adj[link.a].push(link.b);
            adj[link.b].push(link.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components as lists of PoP ids.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.pops.len()];
        let mut out = Vec::new();
        for start in 0..self.pops.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            comp[start] = id;
            while let Some(u) = queue.pop_front() {
                members.push(self.pops[u].id);
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn check_connected(&self) -> Result<()> {
        let comps = self.components();
        if comps.len() > 1 {
            let detail = comps
                .iter()
                .map(|c| {
                    let ids: Vec<String> = c.iter().map(u32::to_string).collect();
                    format!("[{}]", ids.join(" "))
                })
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::Disconnected {
                components: comps.len(),
                detail,
            });
        }
        Ok(())
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid {what} `{s}`"))
}

fn resolve_link(
    index: &HashMap<u32, usize>,
    seen: &mut HashSet<(usize, usize)>,
    a: u32,
    b: u32,
    capacity_bps: f64,
) -> std::result::Result<PopLink, String> {
    let ia = *index.get(&a).ok_or_else(|| format!("link references unknown pop {a}"))?;
    let ib = *index.get(&b).ok_or_else(|| format!("link references unknown pop {b}"))?;
    if ia == ib {
        return Err(format!("self-loop on pop {a}"));
    }
    if !(capacity_bps > 0.0) {
        return Err(format!("link capacity must be positive, got {capacity_bps}"));
    }
    if !seen.insert((ia.min(ib), ia.max(ib))) {
        return Err(format!("duplicate link {a}-{b}"));
    }
    Ok(PopLink {
        a: ia,
        b: ib,
        capacity_bps,
    })
}

pub fn load_pop_graph(path: &Path) -> Result<PopGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    PopGraph::parse(&text)
}

/// Parameters of the synthetic stand-in for measured PoP maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub n_pops: usize,
    pub avg_degree: f64,
    /// Pareto shape of city populations; smaller is heavier-tailed.
    pub population_shape: f64,
    pub min_population: f64,
    pub core_link_bps: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_pops: 25,
            avg_degree: 3.0,
            population_shape: 1.2,
            min_population: 50_000.0,
            core_link_bps: DEFAULT_CORE_LINK_BPS,
        }
    }
}

/// Random connected PoP graph: a random spanning tree plus uniformly chosen
/// extra edges up to `round(n · avg_degree / 2)` edges.
pub fn synth_pop_graph(spec: &SynthSpec, seed: u64) -> Result<PopGraph> {
    let n = spec.n_pops;
    if n < 2 {
        return Err(Error::config("synthetic topology needs at least 2 pops"));
    }
    if !(spec.avg_degree >= 1.0) {
        return Err(Error::config("avg_degree must be >= 1"));
    }
    if !(spec.population_shape > 0.0 && spec.min_population > 0.0) {
        return Err(Error::config("population shape and minimum must be positive"));
    }
    let max_edges = n * (n - 1) / 2;
    let target = ((n as f64 * spec.avg_degree / 2.0).round() as usize).max(n - 1);
    if target > max_edges {
        return Err(Error::config(format!(
            "average degree {} is infeasible for {n} pops (at most {} edges)",
            spec.avg_degree, max_edges
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pops: Vec<Pop> = (0..n)
        .map(|i| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            let population = spec.min_population / u.powf(1.0 / spec.population_shape);
            Pop {
                id: i as u32,
                city: format!("city{i}"),
                population: population.round().min(u64::MAX as f64) as u64,
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = HashSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        edges.insert((parent.min(child), parent.max(child)));
    }
    let mut extra: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|e| !edges.contains(e))
        .collect();
    extra.shuffle(&mut rng);
    let needed = target - edges.len();
    edges.extend(extra.into_iter().take(needed));

    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    edges.sort_unstable();
    let links: Vec<(u32, u32, f64)> = edges
        .into_iter()
        .map(|(a, b)| (a as u32, b as u32, spec.core_link_bps))
        .collect();
    PopGraph::new(pops, &links)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccessTreeSpec {
    pub depth: u32,
    pub arity: u32,
}

impl Default for AccessTreeSpec {
    fn default() -> Self {
        Self { depth: 3, arity: 3 }
    }
}

impl AccessTreeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 || self.arity < 1 {
            return Err(Error::config("access trees need depth >= 1 and arity >= 1"));
        }
        Ok(())
    }

    /// Nodes at `level` (the PoP router is level 0).
    pub fn level_size(&self, level: u32) -> usize {
        (self.arity as usize).pow(level)
    }

    /// Tree nodes added per PoP, excluding the PoP router.
    pub fn nodes_per_tree(&self) -> usize {
        (1..=self.depth).map(|l| self.level_size(l)).sum()
    }

    pub fn leaves_per_tree(&self) -> usize {
        self.level_size(self.depth)
    }

    /// Offset of the first node of `level` inside a tree block.
    fn level_offset(&self, level: u32) -> usize {
        (1..level).map(|l| self.level_size(l)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub role: Role,
    /// Index of the PoP owning this node.
    pub pop: usize,
    /// Tree level; 0 for PoP routers.
    pub depth: u32,
    pub parent: Option<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub capacity_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSpeeds {
    pub edge_bps: f64,
    pub leaf_bps: f64,
}

impl Default for LinkSpeeds {
    fn default() -> Self {
        Self {
            edge_bps: DEFAULT_EDGE_LINK_BPS,
            leaf_bps: DEFAULT_LEAF_LINK_BPS,
        }
    }
}

/// Router-level network: PoP routers plus their access trees.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub graph: PopGraph,
    pub tree: AccessTreeSpec,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub profiles: BTreeMap<Role, RouterProfile>,
    /// Origin router per content id; empty until [`assign_origins`] runs.
    pub origin_of: Vec<NodeId>,
    adjacency: Vec<Vec<NodeId>>,
    core_dist: Vec<Vec<u32>>,
}

/// Attaches a complete access tree below every PoP router.
pub fn attach_access_trees(
    graph: PopGraph,
    spec: AccessTreeSpec,
    profiles: BTreeMap<Role, RouterProfile>,
    speeds: &LinkSpeeds,
) -> Result<NetworkModel> {
    spec.validate()?;
    let n_pops = graph.num_pops();
    let per_tree = spec.nodes_per_tree();
    let total = n_pops * (1 + per_tree);
    if total > u32::MAX as usize {
        return Err(Error::config("network is too large"));
    }

    let mut nodes = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(graph.links.len() + n_pops * per_tree);
    for p in 0..n_pops {
        nodes.push(Node {
            id: NodeId(p as u32),
            role: Role::Core,
            pop: p,
            depth: 0,
            parent: None,
        });
    }
    for link in &graph.links {
        edges.push(Edge {
            a: NodeId(link.a as u32),
            b: NodeId(link.b as u32),
            capacity_bps: link.capacity_bps,
        });
    }
    for p in 0..n_pops {
        let base = n_pops + p * per_tree;
        for level in 1..=spec.depth {
            let offset = spec.level_offset(level);
            let role = if level == spec.depth { Role::Leaf } else { Role::Edge };
            for j in 0..spec.level_size(level) {
                let id = NodeId((base + offset + j) as u32);
                let parent = if level == 1 {
                    NodeId(p as u32)
                } else {
                    NodeId((base + spec.level_offset(level - 1) + j / spec.arity as usize) as u32)
                };
                nodes.push(Node {
                    id,
                    role,
                    pop: p,
                    depth: level,
                    parent: Some(parent),
                });
                edges.push(Edge {
                    a: parent,
                    b: id,
                    capacity_bps: if role == Role::Leaf {
                        speeds.leaf_bps
                    } else {
                        speeds.edge_bps
                    },
                });
            }
        }
    }

    let mut adjacency = vec![Vec::new(); nodes.len()];
    for e in &edges {
        adjacency[e.a.index()].push(e.b);
        adjacency[e.b.index()].push(e.a);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let core_dist = pop_distances(&graph);
    let model = NetworkModel {
        graph,
        tree: spec,
        nodes,
        edges,
        profiles,
        origin_of: Vec::new(),
        adjacency,
        core_dist,
    };
    model.validate()?;
    Ok(model)
}

fn pop_distances(graph: &PopGraph) -> Vec<Vec<u32>> {
    let adj = graph.adjacency();
    (0..graph.num_pops())
        .map(|s| {
            let mut dist = vec![u32::MAX; adj.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == u32::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

impl NetworkModel {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_pops(&self) -> usize {
        self.graph.num_pops()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn role(&self, id: NodeId) -> Role {
        self.nodes[id.index()].role
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id.index()]
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn pop_router(&self, pop: usize) -> NodeId {
        NodeId(pop as u32)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.role == Role::Leaf).map(|n| n.id)
    }

    /// Leaves of one PoP's access tree, in id order.
    pub fn leaves_of(&self, pop: usize) -> std::ops::Range<u32> {
        let per_tree = self.tree.nodes_per_tree();
        let start = self.num_pops() + pop * per_tree + self.tree.level_offset(self.tree.depth);
        start as u32..(start + self.tree.leaves_per_tree()) as u32
    }

    /// Origin router of `content`.
    pub fn origin(&self, content: crate::types::ContentId) -> Result<NodeId> {
        self.origin_of
            .get(content.index())
            .copied()
            .ok_or_else(|| Error::Model(format!("content {content} has no origin")))
    }

    /// Minimum hop count between two routers.
    ///
    /// Trees hang off a single PoP router, so any route leaving a tree passes
    /// its root; this lets distances come from tree depths and the PoP-level
    /// distance table instead of a search.
    pub fn hop_distance(&self, u: NodeId, v: NodeId) -> u32 {
        let (nu, nv) = (self.node(u), self.node(v));
        if nu.pop != nv.pop {
            return nu.depth + self.core_dist[nu.pop][nv.pop] + nv.depth;
        }
        let (mut a, mut b) = (u, v);
        let mut hops = 0;
        while self.node(a).depth > self.node(b).depth {
            a = self.node(a).parent.expect("non-root has a parent");
            hops += 1;
        }
        while self.node(b).depth > self.node(a).depth {
            b = self.node(b).parent.expect("non-root has a parent");
            hops += 1;
        }
        while a != b {
            a = self.node(a).parent.expect("non-root has a parent");
            b = self.node(b).parent.expect("non-root has a parent");
            hops += 2;
        }
        hops
    }

    /// Minimum-hop path from `from` to `to`. Among equal-length routes, each
    /// step takes the neighbor with the smallest id.
    pub fn shortest_path(&self, from: NodeId, to: NodeId) -> Result<Vec<NodeId>> {
        if !self.contains(from) || !self.contains(to) {
            return Err(Error::Model(format!("unknown node in path {from} -> {to}")));
        }
        let mut dist = self.hop_distance(from, to);
        if dist == u32::MAX {
            return Err(Error::Model(format!("{to} is unreachable from {from}")));
        }
        let mut path = Vec::with_capacity(dist as usize + 1);
        path.push(from);
        let mut cur = from;
        while dist > 0 {
            let next = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| self.hop_distance(w, to) == dist - 1)
                .ok_or_else(|| Error::Model(format!("no route from {cur} towards {to}")))?;
            path.push(next);
            cur = next;
            dist -= 1;
        }
        Ok(path)
    }

    /// Checks role labeling, id density and connectivity.
    pub fn validate(&self) -> Result<()> {
        let n_pops = self.num_pops();
        let expected = n_pops * (1 + self.tree.nodes_per_tree());
        if self.nodes.len() != expected {
            return Err(Error::Model(format!(
                "expected {expected} nodes, found {}",
                self.nodes.len()
            )));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id.index() != i {
                return Err(Error::Model(format!("node at slot {i} has id {}", node.id)));
            }
            let role = match node.depth {
                0 => Role::Core,
                d if d == self.tree.depth => Role::Leaf,
                _ => Role::Edge,
            };
            if node.role != role || (node.depth == 0) != (i < n_pops) {
                return Err(Error::Model(format!("node {} is mislabeled", node.id)));
            }
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([NodeId(0)]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached != self.nodes.len() {
            return Err(Error::Disconnected {
                components: 2,
                detail: format!("{} of {} routers reachable", reached, self.nodes.len()),
            });
        }
        if self.origin_of.iter().any(|o| !self.contains(*o)) {
            return Err(Error::Model("origin outside the network".into()));
        }
        Ok(())
    }

    /// Number of PoP-to-PoP hops along a path.
    pub fn as_hops(&self, path: &[NodeId]) -> u32 {
        path.windows(2)
            .filter(|w| self.role(w[0]) == Role::Core && self.role(w[1]) == Role::Core)
            .count() as u32
    }
}

/// Places each content's origin at the router of a PoP drawn uniformly.
pub fn assign_origins(model: &mut NetworkModel, num_contents: u32, seed: u64) -> Result<()> {
    if num_contents == 0 {
        return Err(Error::config("catalog must hold at least one content"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pops = model.num_pops();
    model.origin_of = (0..num_contents)
        .map(|_| model.pop_router(rng.gen_range(0..n_pops)))
        .collect();
    Ok(())
}
