//! Identifiers and enums shared by every layer of the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Index of a router in a [`NetworkModel`](crate::topology::NetworkModel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rank-ordered content identifier: id 0 is the most popular object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContentId(pub u32);

impl ContentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ContentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of a router in the simulated network.
///
/// PoP routers are `Core`, internal access-tree routers are `Edge`, and the
/// deepest tree routers (where queries enter) are `Leaf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Core,
    Edge,
    Leaf,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Core => "core",
            Role::Edge => "edge",
            Role::Leaf => "leaf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Architecture {
    Ip,
    Ndn,
    Nebula,
    Scion,
}

impl Architecture {
    pub const ALL: [Architecture; 4] = [
        Architecture::Ip,
        Architecture::Ndn,
        Architecture::Nebula,
        Architecture::Scion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Ip => "IP",
            Architecture::Ndn => "NDN",
            Architecture::Nebula => "NEBULA",
            Architecture::Scion => "SCION",
        }
    }

    /// Whether forwarding decisions are carried in packet headers.
    pub fn is_pcs(self) -> bool {
        matches!(self, Architecture::Nebula | Architecture::Scion)
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "IP" => Ok(Architecture::Ip),
            "NDN" => Ok(Architecture::Ndn),
            "NEBULA" => Ok(Architecture::Nebula),
            "SCION" => Ok(Architecture::Scion),
            other => Err(Error::config(format!("unknown architecture `{other}`"))),
        }
    }
}
