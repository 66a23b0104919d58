//! Deterministic graph families and seeded random generators used by the
//! verification harness, the tests, and the workload tooling.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Edge, Graph, VertexId};

/// Complete graph K_n.
pub fn complete(n: usize) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u as VertexId, v as VertexId).unwrap();
        }
    }
    g
}

/// Path P_n on n vertices (n - 1 edges).
pub fn path(n: usize) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 1..n {
        g.add_edge(u as VertexId - 1, u as VertexId).unwrap();
    }
    g
}

/// Cycle C_n (n >= 3).
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut g = path(n);
    g.add_edge(n as VertexId - 1, 0).unwrap();
    g
}

/// Star K_{1,leaves}: center 0 with `leaves` pendant vertices.
pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::with_vertices(leaves + 1);
    for leaf in 1..=leaves {
        g.add_edge(0, leaf as VertexId).unwrap();
    }
    g
}

/// Erdős–Rényi G(n, p) as a graph.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    Graph::from_edges(erdos_renyi_edges(n, p, rng)).unwrap()
}

/// Erdős–Rényi G(n, p) as an edge sequence in shuffled arrival order.
pub fn erdos_renyi_edges<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<Edge> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u as VertexId, v as VertexId));
            }
        }
    }
    edges.shuffle(rng);
    edges
}

/// Preferential-attachment edge sequence in arrival order.
///
/// Starts from a clique on `attach + 1` vertices; each later vertex attaches
/// to `attach` distinct existing vertices sampled proportionally to degree.
/// Produces the skewed degree distributions typical of social graphs.
pub fn preferential_attachment_edges<R: Rng>(n: usize, attach: usize, rng: &mut R) -> Vec<Edge> {
    assert!(attach >= 1, "attachment count must be at least 1");
    assert!(n > attach, "need more vertices than the attachment count");
    let mut edges = Vec::new();
    // One endpoint entry per degree unit; sampling from it is degree-biased.
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * n * attach);

    for u in 0..=attach {
        for v in (u + 1)..=attach {
            edges.push((u as VertexId, v as VertexId));
            endpoints.push(u as VertexId);
            endpoints.push(v as VertexId);
        }
    }

    let mut targets: Vec<VertexId> = Vec::with_capacity(attach);
    for t in (attach + 1)..n {
        targets.clear();
        while targets.len() < attach {
            let cand = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&cand) {
                targets.push(cand);
            }
        }
        for &tgt in &targets {
            edges.push((tgt.min(t as VertexId), tgt.max(t as VertexId)));
            endpoints.push(t as VertexId);
            endpoints.push(tgt);
        }
    }
    edges
}
