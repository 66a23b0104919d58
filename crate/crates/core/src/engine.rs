//! Maintains the global graphlet frequency vector across batches by
//! differencing censuses of the subgraph local to the change: an insert-only
//! fast path, the fully dynamic path, and a recount-from-scratch baseline.

use std::collections::BTreeSet;

use crate::counter::{count_exact, GraphletCounts};
use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph, LocalSubgraph, VertexId};
use crate::stream::UpdateOp;

/// Normalized batch: disjoint add and delete sets in canonical orientation,
/// sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Batch {
    pub adds: Vec<Edge>,
    pub dels: Vec<Edge>,
}

impl Batch {
    pub fn insert_only(adds: Vec<Edge>) -> Self {
        Batch {
            adds,
            dels: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.adds.is_empty() && self.dels.is_empty()
    }

    /// All batch-edge endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<VertexId> {
        let mut seeds: Vec<VertexId> = self
            .adds
            .iter()
            .chain(&self.dels)
            .flat_map(|&(u, v)| [u, v])
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        seeds
    }
}

/// Turns a raw event sequence into a normalized batch against the current
/// graph: repeated events collapse, edges both added and deleted cancel out
/// entirely, additions of present edges and deletions of absent edges drop.
pub fn normalize(g: &Graph, events: &[(UpdateOp, VertexId, VertexId)]) -> Result<Batch> {
    let mut adds: BTreeSet<Edge> = BTreeSet::new();
    let mut dels: BTreeSet<Edge> = BTreeSet::new();
    for (index, &(op, u, v)) in events.iter().enumerate() {
        if u == v {
            return Err(Error::SelfLoopEvent {
                index,
                u: u as u64,
                v: v as u64,
            });
        }
        let e = canonical(u, v);
        match op {
            UpdateOp::Add => adds.insert(e),
            UpdateOp::Delete => dels.insert(e),
        };
    }
    let cancelled: Vec<Edge> = adds.intersection(&dels).copied().collect();
    for e in cancelled {
        adds.remove(&e);
        dels.remove(&e);
    }
    Ok(Batch {
        adds: adds.into_iter().filter(|&(u, v)| !g.has_edge(u, v)).collect(),
        dels: dels.into_iter().filter(|&(u, v)| g.has_edge(u, v)).collect(),
    })
}

/// The three update strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EngineKind {
    /// Incremental: local differencing, insert-only batches.
    Igc,
    /// Fully dynamic: local differencing, mixed batches.
    Fdgc,
    /// Baseline: recount the whole updated graph.
    Pgdn,
}

impl EngineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EngineKind::Igc => "igc",
            EngineKind::Fdgc => "fdgc",
            EngineKind::Pgdn => "pgdn",
        }
    }
}

pub const DEFAULT_LOCALITY_DEPTH: u32 = 3;

/// Engine state: the current graph and the running census, which equals
/// `count_exact(graph)` at every batch boundary.
#[derive(Clone, Debug)]
pub struct Engine {
    graph: Graph,
    f4: GraphletCounts,
    locality_depth: u32,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    /// Empty graph, zero census, default locality depth.
    pub fn new() -> Self {
        Engine {
            graph: Graph::new(),
            f4: GraphletCounts::ZERO,
            locality_depth: DEFAULT_LOCALITY_DEPTH,
        }
    }

    pub fn with_depth(depth: u32) -> Result<Self> {
        if depth != 2 && depth != 3 {
            return Err(Error::InvalidDepth(depth));
        }
        Ok(Engine {
            locality_depth: depth,
            ..Engine::new()
        })
    }

    /// Adopts an existing graph, establishing the census invariant with one
    /// full count.
    pub fn from_graph(graph: Graph, depth: u32) -> Result<Self> {
        if depth != 2 && depth != 3 {
            return Err(Error::InvalidDepth(depth));
        }
        let f4 = count_exact(&graph)?;
        Ok(Engine {
            graph,
            f4,
            locality_depth: depth,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn counts(&self) -> GraphletCounts {
        self.f4
    }

    pub fn locality_depth(&self) -> u32 {
        self.locality_depth
    }

    /// Normalizes raw events against the current graph.
    pub fn normalize(&self, events: &[(UpdateOp, VertexId, VertexId)]) -> Result<Batch> {
        normalize(&self.graph, events)
    }

    /// Dispatches a normalized batch to the chosen strategy and returns the
    /// census delta it produced.
    pub fn apply(&mut self, kind: EngineKind, batch: &Batch) -> Result<GraphletCounts> {
        match kind {
            EngineKind::Igc => {
                if let Some(&(u, v)) = batch.dels.first() {
                    return Err(Error::DeleteInInsertOnly {
                        u: u as u64,
                        v: v as u64,
                    });
                }
                self.apply_igc(&batch.adds)
            }
            EngineKind::Fdgc => self.apply_fdgc(batch),
            EngineKind::Pgdn => self.apply_pgdn(batch),
        }
    }

    /// Incremental update for an insert-only batch: add the edges, census the
    /// locality ball with and without them, and apply the difference.
    /// Returns the delta.
    pub fn apply_igc(&mut self, adds: &[Edge]) -> Result<GraphletCounts> {
        let batch = Batch::insert_only(adds.to_vec());
        self.apply_local(&batch)
    }

    /// Fully dynamic update for a normalized mixed batch. Returns the delta.
    pub fn apply_fdgc(&mut self, batch: &Batch) -> Result<GraphletCounts> {
        self.apply_local(batch)
    }

    /// Shared local-differencing step. The insert-only path is the
    /// special case with an empty delete set.
    fn apply_local(&mut self, batch: &Batch) -> Result<GraphletCounts> {
        debug_assert!(
            batch.adds.iter().all(|&(u, v)| !self.graph.has_edge(u, v)),
            "batch not normalized: add of a present edge"
        );
        debug_assert!(
            batch.dels.iter().all(|&(u, v)| self.graph.has_edge(u, v)),
            "batch not normalized: delete of an absent edge"
        );

        // The union graph g + A keeps deleted edges present, so every
        // graphlet of the old or new graph lives inside it.
        for &(u, v) in &batch.adds {
            self.graph.add_edge(u, v)?;
        }

        let (g_a, g_b) = local_views(&self.graph, batch, self.locality_depth)?;
        let c_a = count_exact(&g_a.graph)?;
        let c_b = count_exact(&g_b.graph)?;
        let delta = c_a.checked_sub(&c_b)?;
        self.f4 = self.f4.checked_add(&delta)?;

        for &(u, v) in &batch.dels {
            self.graph.remove_edge(u, v)?;
        }
        debug_assert!(self.f4.is_nonnegative(), "census went negative");
        Ok(delta)
    }

    /// Baseline: apply the batch and recount the entire graph. Returns the
    /// delta for parity with the local strategies.
    pub fn apply_pgdn(&mut self, batch: &Batch) -> Result<GraphletCounts> {
        for &(u, v) in &batch.adds {
            self.graph.add_edge(u, v)?;
        }
        for &(u, v) in &batch.dels {
            self.graph.remove_edge(u, v)?;
        }
        let new = count_exact(&self.graph)?;
        let delta = new.checked_sub(&self.f4)?;
        self.f4 = new;
        Ok(delta)
    }
}

/// Extracts the two local views of a batch from the union graph `g + A`:
/// the induced ball around all batch endpoints, once without the deleted
/// edges (the after-view) and once without the added edges (the before-view).
pub(crate) fn local_views(
    g_union: &Graph,
    batch: &Batch,
    depth: u32,
) -> Result<(LocalSubgraph, LocalSubgraph)> {
    let seeds = batch.endpoints();
    let ball = g_union.k_hop(&seeds, depth)?;
    let h = g_union.induced(&ball)?;
    let mut g_a = h.clone();
    g_a.remove_parent_edges(&batch.dels)?;
    let mut g_b = h;
    g_b.remove_parent_edges(&batch.adds)?;
    Ok((g_a, g_b))
}
