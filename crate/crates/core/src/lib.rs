//! Exact, fully dynamic counting of connected induced 3- and 4-node
//! graphlets in an evolving undirected graph.
//!
//! The static census ([`counter`]) enumerates per-edge cliques and cycles and
//! derives the remaining graphlet types combinatorially. The dynamic engines
//! ([`engine`]) keep the global census current under batched edge insertions
//! and deletions by differencing censuses of the subgraph local to the
//! change, instead of recounting from scratch. [`stream`] handles ingestion
//! and workload generation; [`harness`] cross-validates the engines against
//! each other and against brute-force enumeration.

pub mod counter;
pub mod engine;
pub mod error;
pub mod graph;
pub mod harness;
pub mod stream;
pub mod synthetic;

pub use counter::{count_brute, count_exact, GraphletCounts};
pub use engine::{Batch, Engine, EngineKind};
pub use error::{Error, Result};
pub use graph::{Graph, LocalSubgraph, VertexId};
pub use stream::{EdgeUpdate, UpdateOp};
