//! Bounded breadth-first search, seeded fuzzing with invariant audits, and
//! replay of move scripts.
//!
//! Exhaustion is a bound, not a proof: the state space is continuous and
//! search only sees a quantized, discretized shadow of it.

mod bfs;
mod fuzz;
mod replay;

pub use bfs::{search, SearchConfig, SearchOutcome};
pub use fuzz::{fuzz, Audit, AuditEntry, AuditStatus, FuzzConfig, FuzzReport};
pub use replay::{replay, ReplayError, Replayed};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("start scene is illegal: {0}")]
    IllegalStart(String),
}
