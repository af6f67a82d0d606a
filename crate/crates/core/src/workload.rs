//! Zipf content popularity and population-weighted query traces.

use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::NetworkModel;
use crate::types::{ContentId, NodeId, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Catalog {
    pub num_contents: u32,
    /// Bytes per object.
    pub content_size: u64,
}

impl Default for Catalog {
    fn default() -> Self {
        Self {
            num_contents: 100_000,
            content_size: 1_000_000,
        }
    }
}

impl Catalog {
    pub fn validate(&self) -> Result<()> {
        if self.num_contents == 0 {
            return Err(Error::config("catalog must hold at least one content"));
        }
        if self.content_size == 0 {
            return Err(Error::NonPositive("content_size"));
        }
        Ok(())
    }

    /// O·s, bytes.
    pub fn total_bytes(&self) -> f64 {
        self.num_contents as f64 * self.content_size as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfSpec {
    pub exponent: f64,
    pub support: u32,
}

/// Inverse-CDF Zipf sampler over ranks `0..support` (rank 0 is the most
/// popular).
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    spec: ZipfSpec,
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(spec: ZipfSpec) -> Result<Self> {
        if spec.support == 0 {
            return Err(Error::NonPositive("zipf support"));
        }
        if !(spec.exponent >= 0.0) || !spec.exponent.is_finite() {
            return Err(Error::config("zipf exponent must be a finite value >= 0"));
        }
        let mut cdf = Vec::with_capacity(spec.support as usize);
        let mut acc = 0.0;
        for i in 1..=spec.support {
            acc += (i as f64).powf(-spec.exponent);
            cdf.push(acc);
        }
        for v in &mut cdf {
            *v /= acc;
        }
        Ok(Self { spec, cdf })
    }

    pub fn spec(&self) -> ZipfSpec {
        self.spec
    }

    /// Probability of rank `i` (0-based).
    pub fn pmf(&self, i: usize) -> f64 {
        match i {
            0 => self.cdf[0],
            _ => self.cdf[i] - self.cdf[i - 1],
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ContentId {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        ContentId(idx.min(self.cdf.len() - 1) as u32)
    }

    /// Endless seeded stream of content ids.
    pub fn stream(self, seed: u64) -> impl Iterator<Item = ContentId> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        std::iter::repeat_with(move || self.sample(&mut rng))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub leaf: NodeId,
    pub content: ContentId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub seed: u64,
    pub alpha: f64,
    pub num_contents: u32,
    pub content_size: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryTrace {
    pub meta: TraceMeta,
    pub events: Vec<Query>,
}

impl QueryTrace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn catalog(&self) -> Catalog {
        Catalog {
            num_contents: self.meta.num_contents,
            content_size: self.meta.content_size,
        }
    }

    /// Checks that every event enters at a leaf and names a catalog object.
    pub fn validate(&self, model: &NetworkModel) -> Result<()> {
        for (seq, q) in self.events.iter().enumerate() {
            if !model.contains(q.leaf) || model.role(q.leaf) != Role::Leaf {
                return Err(Error::Model(format!("query {seq} enters at non-leaf node {}", q.leaf)));
            }
            if q.content.0 >= self.meta.num_contents {
                return Err(Error::Model(format!(
                    "query {seq} names content {} outside the catalog",
                    q.content
                )));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let m = &self.meta;
        let mut out = String::with_capacity(32 + self.events.len() * 16);
        let _ = writeln!(out, "# seed={}", m.seed);
        let _ = writeln!(out, "# alpha={}", m.alpha);
        let _ = writeln!(out, "# num_contents={}", m.num_contents);
        let _ = writeln!(out, "# content_size={}", m.content_size);
        out.push_str("seq,leaf_id,content_id\n");
        for (seq, q) in self.events.iter().enumerate() {
            let _ = writeln!(out, "{seq},{},{}", q.leaf, q.content);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut seed = None;
        let mut alpha = None;
        let mut num_contents = None;
        let mut content_size = None;
        let mut header_seen = false;
        let mut events = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let Some((key, value)) = meta.trim().split_once('=') else {
                    continue;
                };
                let value = value.trim();
                let bad = || err(format!("invalid value for `{}`: `{value}`", key.trim()));
                match key.trim() {
                    "seed" => seed = Some(value.parse().map_err(|_| bad())?),
                    "alpha" => alpha = Some(value.parse().map_err(|_| bad())?),
                    "num_contents" => num_contents = Some(value.parse().map_err(|_| bad())?),
                    "content_size" => content_size = Some(value.parse().map_err(|_| bad())?),
                    _ => {}
                }
                continue;
            }
            if !header_seen {
                if line != "seq,leaf_id,content_id" {
                    return Err(err("expected header `seq,leaf_id,content_id`".into()));
                }
                header_seen = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let num = |s: &str| -> Result<u64> {
                s.trim().parse().map_err(|_| err(format!("invalid number `{s}`")))
            };
            let seq = num(fields[0])?;
            if seq != events.len() as u64 {
                return Err(err(format!("expected seq {}, found {seq}", events.len())));
            }
            let leaf = u32::try_from(num(fields[1])?).map_err(|_| err("leaf id out of range".into()))?;
            let content = u32::try_from(num(fields[2])?).map_err(|_| err("content id out of range".into()))?;
            events.push(Query {
                leaf: NodeId(leaf),
                content: ContentId(content),
            });
        }
        if !header_seen {
            return Err(Error::Parse {
                line: 0,
                msg: "missing header `seq,leaf_id,content_id`".into(),
            });
        }
        let missing = |k: &str| Error::Parse {
            line: 0,
            msg: format!("missing metadata `{k}`"),
        };
        let meta = TraceMeta {
            seed: seed.ok_or_else(|| missing("seed"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            num_contents: num_contents.ok_or_else(|| missing("num_contents"))?,
            content_size: content_size.ok_or_else(|| missing("content_size"))?,
        };
        if let Some(q) = events.iter().find(|q| q.content.0 >= meta.num_contents) {
            return Err(Error::Model(format!("content {} outside the catalog", q.content)));
        }
        Ok(Self { meta, events })
    }
}

pub fn write_trace(trace: &QueryTrace, path: &Path) -> Result<()> {
    std::fs::write(path, trace.to_csv()).map_err(|e| Error::io(path, e))
}

pub fn read_trace(path: &Path) -> Result<QueryTrace> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    QueryTrace::from_csv(&text)
}

/// Draws `n_queries` events: a PoP in proportion to its population, a leaf
/// uniformly inside that PoP, and a Zipf-distributed content.
pub fn generate_trace(
    model: &NetworkModel,
    catalog: &Catalog,
    alpha: f64,
    n_queries: usize,
    seed: u64,
) -> Result<QueryTrace> {
    catalog.validate()?;
    let zipf = ZipfSampler::new(ZipfSpec {
        exponent: alpha,
        support: catalog.num_contents,
    })?;
    let weights: Vec<u64> = model.graph.pops.iter().map(|p| p.population).collect();
    let pops = WeightedIndex::new(&weights)
        .map_err(|_| Error::config("total PoP population must be positive"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = (0..n_queries)
        .map(|_| {
            let leaves = model.leaves_of(pops.sample(&mut rng));
            let leaf = NodeId(rng.gen_range(leaves));
            Query {
                leaf,
                content: zipf.sample(&mut rng),
            }
        })
        .collect();
    Ok(QueryTrace {
        meta: TraceMeta {
            seed,
            alpha,
            num_contents: catalog.num_contents,
            content_size: catalog.content_size,
        },
        events,
    })
}
