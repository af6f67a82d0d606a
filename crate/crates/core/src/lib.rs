//! Power models and a trace-driven simulator for comparing the data-plane
//! energy of IP, NDN, NEBULA and SCION.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod config;
pub mod error;
pub mod experiments;
pub mod plot;
pub mod power;
pub mod sim;
pub mod topology;
pub mod types;
pub mod workload;

pub use error::{Error, Result};
pub use types::{Architecture, ContentId, NodeId, Role};
