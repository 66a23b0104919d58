//! Dynamic simple undirected graph with constant-time edge membership,
//! k-hop ball extraction, and induced-subgraph materialization.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Dense internal vertex id. External (file) ids are mapped to these at ingest.
pub type VertexId = u32;

/// Undirected edge in canonical orientation (`0 < 1` after [`canonical`]).
pub type Edge = (VertexId, VertexId);

/// Returns the canonical representative of an undirected edge.
pub fn canonical(u: VertexId, v: VertexId) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Mutable simple undirected graph.
///
/// Vertices are dense in `[0, n)` and are never physically deleted; isolated
/// vertices are allowed. No self-loops, no parallel edges. Neighbor sets give
/// constant-expected-time membership and linear iteration; degree is O(1).
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<HashSet<VertexId>>,
    m: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        Graph {
            adj: vec![HashSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, growing vertices on first sight.
    /// Duplicate edges are ignored; self-loops are an error.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges, each counted once.
    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn has_vertex(&self, u: VertexId) -> bool {
        (u as usize) < self.adj.len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[u as usize].iter().copied()
    }

    /// Grows the vertex range so that `u` is a valid id.
    pub fn ensure_vertex(&mut self, u: VertexId) {
        if u as usize >= self.adj.len() {
            self.adj.resize_with(u as usize + 1, HashSet::new);
        }
    }

    /// Adds an undirected edge, creating endpoints on first sight.
    /// Returns `false` if the edge already existed.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u as u64));
        }
        self.ensure_vertex(u.max(v));
        if !self.adj[u as usize].insert(v) {
            return Ok(false);
        }
        self.adj[v as usize].insert(u);
        self.m += 1;
        Ok(true)
    }

    /// Removes an undirected edge. Returns `false` if it was not present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u as u64));
        }
        let present = self
            .adj
            .get_mut(u as usize)
            .is_some_and(|s| s.remove(&v));
        if !present {
            return Ok(false);
        }
        self.adj[v as usize].remove(&u);
        self.m -= 1;
        Ok(true)
    }

    /// Undirected edges in canonical orientation, ascending by first endpoint.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            let u = u as VertexId;
            nbrs.iter().copied().filter_map(move |v| (u < v).then_some((u, v)))
        })
    }

    /// All vertices at shortest-path distance <= k from any seed, seeds
    /// included, as a sorted vector. Breadth-first traversal.
    pub fn k_hop(&self, seeds: &[VertexId], k: u32) -> Result<Vec<VertexId>> {
        for &s in seeds {
            if !self.has_vertex(s) {
                return Err(Error::UnknownVertex(s as u64));
            }
        }
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::new();
        let mut ball = Vec::new();
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                ball.push(s);
                queue.push_back((s, 0u32));
            }
        }
        while let Some((u, d)) = queue.pop_front() {
            if d == k {
                continue;
            }
            for v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    ball.push(v);
                    queue.push_back((v, d + 1));
                }
            }
        }
        ball.sort_unstable();
        Ok(ball)
    }

    /// Materializes the subgraph induced by `w`, with a bijection between
    /// parent ids and local dense ids.
    pub fn induced(&self, w: &[VertexId]) -> Result<LocalSubgraph> {
        let mut to_parent: Vec<VertexId> = w.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        // Dense scratch map: membership probes during the build are array
        // reads instead of hash lookups.
        const OUTSIDE: VertexId = VertexId::MAX;
        let mut dense = vec![OUTSIDE; self.adj.len()];
        let mut from_parent = HashMap::with_capacity(to_parent.len());
        for (local, &parent) in to_parent.iter().enumerate() {
            if !self.has_vertex(parent) {
                return Err(Error::UnknownVertex(parent as u64));
            }
            dense[parent as usize] = local as VertexId;
            from_parent.insert(parent, local as VertexId);
        }
        let mut graph = Graph::with_vertices(to_parent.len());
        for (local, &parent) in to_parent.iter().enumerate() {
            for nbr in self.neighbors(parent) {
                // Keep edges with both endpoints inside w, each added once.
                if nbr > parent {
                    let nbr_local = dense[nbr as usize];
                    if nbr_local != OUTSIDE {
                        graph.add_edge(local as VertexId, nbr_local)?;
                    }
                }
            }
        }
        Ok(LocalSubgraph {
            graph,
            to_parent,
            from_parent,
        })
    }
}

/// Induced subgraph over a vertex ball, with the id mapping back to the
/// parent graph. The contained graph uses local dense ids `[0, |W|)`.
#[derive(Clone, Debug)]
pub struct LocalSubgraph {
    pub graph: Graph,
    to_parent: Vec<VertexId>,
    from_parent: HashMap<VertexId, VertexId>,
}

impl LocalSubgraph {
    pub fn vertex_count(&self) -> usize {
        self.to_parent.len()
    }

    pub fn parent_id(&self, local: VertexId) -> VertexId {
        self.to_parent[local as usize]
    }

    pub fn local_id(&self, parent: VertexId) -> Option<VertexId> {
        self.from_parent.get(&parent).copied()
    }

    pub fn contains_parent(&self, parent: VertexId) -> bool {
        self.from_parent.contains_key(&parent)
    }

    /// Removes edges given in parent-graph ids. Every endpoint must lie in
    /// the ball; callers pass batch edges whose endpoints seeded the ball.
    pub fn remove_parent_edges(&mut self, edges: &[Edge]) -> Result<()> {
        for &(u, v) in edges {
            let lu = self
                .local_id(u)
                .ok_or(Error::UnknownVertex(u as u64))?;
            let lv = self
                .local_id(v)
                .ok_or(Error::UnknownVertex(v as u64))?;
            self.graph.remove_edge(lu, lv)?;
        }
        Ok(())
    }
}
