//! Exact static census of connected induced 3- and 4-node graphlets.
//!
//! The fast path iterates edges once, enumerating per-edge cliques and cycles
//! and deriving the remaining types from closed-form identities over the
//! aggregated per-edge and per-vertex quantities. `count_brute` is the
//! independent subset-enumeration oracle the identities are validated against.

use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Default vertex-count guard for brute-force enumeration.
pub const BRUTE_GUARD: usize = 64;

/// Counting switches to the parallel per-edge loop above this edge count.
const PARALLEL_EDGE_THRESHOLD: usize = 2048;

/// Frequencies of connected induced graphlets: the two 3-node types and the
/// six 4-node types. Fields are signed so the same type carries deltas
/// (`C_a - C_b`); a census of a concrete graph is always non-negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphletCounts {
    pub triangle: i64,
    pub wedge: i64,
    pub path3: i64,
    pub star3: i64,
    pub cycle4: i64,
    pub tailed_tri: i64,
    pub diamond: i64,
    pub clique4: i64,
}

impl GraphletCounts {
    /// Field names in the fixed reporting order.
    pub const FIELD_NAMES: [&'static str; 8] = [
        "triangle",
        "wedge",
        "path3",
        "star3",
        "cycle4",
        "tailed_tri",
        "diamond",
        "clique4",
    ];

    pub const ZERO: GraphletCounts = GraphletCounts {
        triangle: 0,
        wedge: 0,
        path3: 0,
        star3: 0,
        cycle4: 0,
        tailed_tri: 0,
        diamond: 0,
        clique4: 0,
    };

    pub fn as_array(&self) -> [i64; 8] {
        [
            self.triangle,
            self.wedge,
            self.path3,
            self.star3,
            self.cycle4,
            self.tailed_tri,
            self.diamond,
            self.clique4,
        ]
    }

    pub fn from_array(a: [i64; 8]) -> Self {
        GraphletCounts {
            triangle: a[0],
            wedge: a[1],
            path3: a[2],
            star3: a[3],
            cycle4: a[4],
            tailed_tri: a[5],
            diamond: a[6],
            clique4: a[7],
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_array().iter().all(|&c| c >= 0)
    }

    pub fn checked_add(&self, other: &GraphletCounts) -> Result<GraphletCounts> {
        let mut out = [0i64; 8];
        for (i, (a, b)) in self.as_array().iter().zip(other.as_array()).enumerate() {
            out[i] = a.checked_add(b).ok_or(Error::Overflow)?;
        }
        Ok(GraphletCounts::from_array(out))
    }

    pub fn checked_sub(&self, other: &GraphletCounts) -> Result<GraphletCounts> {
        let mut out = [0i64; 8];
        for (i, (a, b)) in self.as_array().iter().zip(other.as_array()).enumerate() {
            out[i] = a.checked_sub(b).ok_or(Error::Overflow)?;
        }
        Ok(GraphletCounts::from_array(out))
    }
}

impl Add for GraphletCounts {
    type Output = GraphletCounts;
    fn add(self, rhs: GraphletCounts) -> GraphletCounts {
        self.checked_add(&rhs).expect("graphlet count overflow")
    }
}

impl Sub for GraphletCounts {
    type Output = GraphletCounts;
    fn sub(self, rhs: GraphletCounts) -> GraphletCounts {
        self.checked_sub(&rhs).expect("graphlet count overflow")
    }
}

impl AddAssign for GraphletCounts {
    fn add_assign(&mut self, rhs: GraphletCounts) {
        *self = *self + rhs;
    }
}

impl SubAssign for GraphletCounts {
    fn sub_assign(&mut self, rhs: GraphletCounts) {
        *self = *self - rhs;
    }
}

impl fmt::Display for GraphletCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, value)) in Self::FIELD_NAMES.iter().zip(self.as_array()).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

/// Per-edge quantities consumed by the derivation identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeLocalStats {
    /// Common neighbors of the endpoints: `|N(u) ∩ N(v)|`.
    pub tri_e: i64,
    /// `|N(u) \ N(v) \ {v}|`.
    pub star_u: i64,
    /// `|N(v) \ N(u) \ {u}|`.
    pub star_v: i64,
    /// Adjacent pairs inside the common neighborhood.
    pub clique_pairs: i64,
    /// Adjacent pairs (w, x) with w on the u-only side and x on the v-only side.
    pub cycle_pairs: i64,
}

/// Mark codes for the per-edge neighborhood partition.
const MARK_STAR_U: u64 = 1;
const MARK_STAR_V: u64 = 2;
const MARK_COMMON: u64 = 3;

/// Reusable per-worker state: an epoch-tagged mark array plus scratch lists.
/// Marks never need clearing; the epoch advances once per edge.
struct Scratch {
    marks: Vec<u64>,
    epoch: u64,
    common: Vec<VertexId>,
    ustar: Vec<VertexId>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            marks: vec![0; n],
            epoch: 0,
            common: Vec::new(),
            ustar: Vec::new(),
        }
    }

    #[inline]
    fn mark(&mut self, w: VertexId, code: u64) {
        self.marks[w as usize] = (self.epoch << 2) | code;
    }

    #[inline]
    fn code_of(&self, w: VertexId) -> u64 {
        let m = self.marks[w as usize];
        if m >> 2 == self.epoch {
            m & 3
        } else {
            0
        }
    }

    /// Computes the local stats of one edge. Cliques are found by adjacency
    /// tests among the common neighborhood; cycles by scanning the smaller
    /// star side and probing marks of the other.
    fn edge_stats(&mut self, g: &Graph, u: VertexId, v: VertexId) -> EdgeLocalStats {
        self.epoch += 1;
        self.common.clear();
        self.ustar.clear();

        for w in g.neighbors(v) {
            if w != u {
                self.mark(w, MARK_STAR_V);
            }
        }
        for w in g.neighbors(u) {
            if w == v {
                continue;
            }
            if self.code_of(w) == MARK_STAR_V {
                self.mark(w, MARK_COMMON);
                self.common.push(w);
            } else {
                self.mark(w, MARK_STAR_U);
                self.ustar.push(w);
            }
        }

        let tri_e = self.common.len() as i64;
        let star_u = self.ustar.len() as i64;
        let star_v = g.degree(v) as i64 - 1 - tri_e;

        let mut clique_pairs = 0i64;
        for (i, &w) in self.common.iter().enumerate() {
            for &x in &self.common[i + 1..] {
                if g.has_edge(w, x) {
                    clique_pairs += 1;
                }
            }
        }

        let mut cycle_pairs = 0i64;
        if star_u <= star_v {
            for i in 0..self.ustar.len() {
                let w = self.ustar[i];
                for x in g.neighbors(w) {
                    if self.code_of(x) == MARK_STAR_V {
                        cycle_pairs += 1;
                    }
                }
            }
        } else {
            for w in g.neighbors(v) {
                if w != u && self.code_of(w) == MARK_STAR_V {
                    for x in g.neighbors(w) {
                        if self.code_of(x) == MARK_STAR_U {
                            cycle_pairs += 1;
                        }
                    }
                }
            }
        }

        EdgeLocalStats {
            tri_e,
            star_u,
            star_v,
            clique_pairs,
            cycle_pairs,
        }
    }
}

/// Local stats of a single edge; recomputed from scratch on every call.
pub fn edge_local_stats(g: &Graph, u: VertexId, v: VertexId) -> EdgeLocalStats {
    Scratch::new(g.vertex_count()).edge_stats(g, u, v)
}

/// Aggregated per-edge sums. All additions are overflow-checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct EdgeAccums {
    pub sum_tri: i64,
    pub sum_tri_pairs: i64,
    pub sum_tri_star: i64,
    pub sum_deg_prod: i64,
    pub clique_pairs: i64,
    pub cycle_pairs: i64,
}

impl EdgeAccums {
    fn absorb(&mut self, g: &Graph, u: VertexId, v: VertexId, s: &EdgeLocalStats) -> Result<()> {
        let ck = |x: Option<i64>| x.ok_or(Error::Overflow);
        self.sum_tri = ck(self.sum_tri.checked_add(s.tri_e))?;
        self.sum_tri_pairs = ck(self.sum_tri_pairs.checked_add(choose2(s.tri_e)?))?;
        let tri_star = ck(s.tri_e.checked_mul(ck(s.star_u.checked_add(s.star_v))?))?;
        self.sum_tri_star = ck(self.sum_tri_star.checked_add(tri_star))?;
        let dprod = ck((g.degree(u) as i64 - 1).checked_mul(g.degree(v) as i64 - 1))?;
        self.sum_deg_prod = ck(self.sum_deg_prod.checked_add(dprod))?;
        self.clique_pairs = ck(self.clique_pairs.checked_add(s.clique_pairs))?;
        self.cycle_pairs = ck(self.cycle_pairs.checked_add(s.cycle_pairs))?;
        Ok(())
    }

    fn merge(mut self, other: EdgeAccums) -> Result<EdgeAccums> {
        let ck = |x: Option<i64>| x.ok_or(Error::Overflow);
        self.sum_tri = ck(self.sum_tri.checked_add(other.sum_tri))?;
        self.sum_tri_pairs = ck(self.sum_tri_pairs.checked_add(other.sum_tri_pairs))?;
        self.sum_tri_star = ck(self.sum_tri_star.checked_add(other.sum_tri_star))?;
        self.sum_deg_prod = ck(self.sum_deg_prod.checked_add(other.sum_deg_prod))?;
        self.clique_pairs = ck(self.clique_pairs.checked_add(other.clique_pairs))?;
        self.cycle_pairs = ck(self.cycle_pairs.checked_add(other.cycle_pairs))?;
        Ok(self)
    }
}

fn choose2(d: i64) -> Result<i64> {
    Ok(d.checked_mul(d - 1).ok_or(Error::Overflow)? / 2)
}

fn choose3(d: i64) -> Result<i64> {
    if d < 3 {
        return Ok(0);
    }
    // d(d-1)/2 is integral, and the running product stays divisible by 3.
    let half = d.checked_mul(d - 1).ok_or(Error::Overflow)? / 2;
    Ok(half.checked_mul(d - 2).ok_or(Error::Overflow)? / 3)
}

pub(crate) fn accumulate_edges(g: &Graph) -> Result<EdgeAccums> {
    let mut scratch = Scratch::new(g.vertex_count());
    let mut acc = EdgeAccums::default();
    for (u, v) in g.edges() {
        let s = scratch.edge_stats(g, u, v);
        acc.absorb(g, u, v, &s)?;
    }
    Ok(acc)
}

fn accumulate_edges_parallel(g: &Graph) -> Result<EdgeAccums> {
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    let threads = rayon::current_num_threads().max(1);
    let chunk = (edges.len() / (threads * 4)).max(1024);
    edges
        .par_chunks(chunk)
        .map(|chunk| {
            let mut scratch = Scratch::new(g.vertex_count());
            let mut acc = EdgeAccums::default();
            for &(u, v) in chunk {
                let s = scratch.edge_stats(g, u, v);
                acc.absorb(g, u, v, &s)?;
            }
            Ok(acc)
        })
        .try_reduce(EdgeAccums::default, EdgeAccums::merge)
}

fn vertex_sums(g: &Graph) -> Result<(i64, i64)> {
    let mut sum_wedge = 0i64;
    let mut sum_claw = 0i64;
    for u in 0..g.vertex_count() as VertexId {
        let d = g.degree(u) as i64;
        sum_wedge = sum_wedge
            .checked_add(choose2(d)?)
            .ok_or(Error::Overflow)?;
        sum_claw = sum_claw.checked_add(choose3(d)?).ok_or(Error::Overflow)?;
    }
    Ok((sum_wedge, sum_claw))
}

/// Derives the eight counts from the aggregates. Divisibility of the summed
/// quantities is an invariant of correct enumeration on any input.
fn derive(acc: &EdgeAccums, sum_wedge: i64, sum_claw: i64) -> Result<GraphletCounts> {
    let ck = |x: Option<i64>| x.ok_or(Error::Overflow);
    debug_assert_eq!(acc.sum_tri % 3, 0, "sum of per-edge common neighbors");
    debug_assert_eq!(acc.clique_pairs % 6, 0, "per-edge clique pair total");
    debug_assert_eq!(acc.cycle_pairs % 4, 0, "per-edge cycle pair total");

    let triangle = acc.sum_tri / 3;
    let wedge = ck(sum_wedge.checked_sub(ck(triangle.checked_mul(3))?))?;
    let clique4 = acc.clique_pairs / 6;
    let cycle4 = acc.cycle_pairs / 4;
    let diamond = ck(acc.sum_tri_pairs.checked_sub(ck(clique4.checked_mul(6))?))?;
    let tail_num = ck(acc.sum_tri_star.checked_sub(ck(diamond.checked_mul(4))?))?;
    debug_assert_eq!(tail_num % 2, 0, "tailed-triangle numerator");
    let tailed_tri = tail_num / 2;
    let star3 = ck(sum_claw
        .checked_sub(tailed_tri)
        .and_then(|x| x.checked_sub(diamond * 2))
        .and_then(|x| x.checked_sub(clique4 * 4)))?;
    let path3 = ck(acc
        .sum_deg_prod
        .checked_sub(triangle * 3)
        .and_then(|x| x.checked_sub(tailed_tri * 2))
        .and_then(|x| x.checked_sub(cycle4 * 4))
        .and_then(|x| x.checked_sub(diamond * 6))
        .and_then(|x| x.checked_sub(clique4 * 12)))?;

    Ok(GraphletCounts {
        triangle,
        wedge,
        path3,
        star3,
        cycle4,
        tailed_tri,
        diamond,
        clique4,
    })
}

/// Exact census of connected induced 3- and 4-node graphlets.
///
/// Large inputs are counted in parallel over edge partitions; partial
/// accumulators are integers, so the result does not depend on partitioning
/// or thread count. Overflow of any accumulator is a hard error.
pub fn count_exact(g: &Graph) -> Result<GraphletCounts> {
    let acc = if g.edge_count() >= PARALLEL_EDGE_THRESHOLD && rayon::current_num_threads() > 1 {
        accumulate_edges_parallel(g)?
    } else {
        accumulate_edges(g)?
    };
    let (sum_wedge, sum_claw) = vertex_sums(g)?;
    derive(&acc, sum_wedge, sum_claw)
}

/// Connected 4-vertex graphlet classes, with an explicit disconnected bucket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourVertexClass {
    Disconnected,
    Path3,
    Star3,
    Cycle4,
    TailedTri,
    Diamond,
    Clique4,
}

/// Bit position of a vertex pair within a 6-bit adjacency mask.
#[inline]
fn pair_bit(i: usize, j: usize) -> u8 {
    const BIT: [[u8; 4]; 4] = [
        [255, 0, 1, 2],
        [0, 255, 3, 4],
        [1, 3, 255, 5],
        [2, 4, 5, 255],
    ];
    BIT[i][j]
}

fn classify_mask(mask: u8) -> FourVertexClass {
    let edge_count = mask.count_ones();
    if edge_count < 3 {
        // Two edges cover at most three vertices; the fourth is isolated.
        return FourVertexClass::Disconnected;
    }
    let mut deg = [0u8; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if mask & (1 << pair_bit(i, j)) != 0 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    deg.sort_unstable();
    match edge_count {
        3 => match deg {
            [1, 1, 2, 2] => FourVertexClass::Path3,
            [1, 1, 1, 3] => FourVertexClass::Star3,
            // (0,2,2,2): a triangle plus an isolated vertex.
            _ => FourVertexClass::Disconnected,
        },
        4 => {
            if deg == [2, 2, 2, 2] {
                FourVertexClass::Cycle4
            } else {
                FourVertexClass::TailedTri
            }
        }
        5 => FourVertexClass::Diamond,
        _ => FourVertexClass::Clique4,
    }
}

/// Classifies the subgraph given by edges among four labeled vertices `0..4`.
/// Duplicate edges and orientations collapse onto the same adjacency mask.
pub fn classify_four(edges: &[(u8, u8)]) -> FourVertexClass {
    let mut mask = 0u8;
    for &(u, v) in edges {
        assert!(u < 4 && v < 4 && u != v, "edge ({u}, {v}) out of range");
        mask |= 1 << pair_bit(u as usize, v as usize);
    }
    classify_mask(mask)
}

/// Brute-force census by enumerating every 3- and 4-vertex subset, guarded by
/// the default vertex limit. Independent of the per-edge counting path.
pub fn count_brute(g: &Graph) -> Result<GraphletCounts> {
    count_brute_guarded(g, BRUTE_GUARD)
}

/// Brute-force census with an explicit guard override.
pub fn count_brute_guarded(g: &Graph, guard: usize) -> Result<GraphletCounts> {
    let n = g.vertex_count();
    if n > guard {
        return Err(Error::BruteGuardExceeded { n, guard });
    }
    let mut counts = GraphletCounts::ZERO;
    let ids: Vec<VertexId> = (0..n as VertexId).collect();

    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let e = g.has_edge(ids[a], ids[b]) as u8
                    + g.has_edge(ids[a], ids[c]) as u8
                    + g.has_edge(ids[b], ids[c]) as u8;
                match e {
                    2 => counts.wedge += 1,
                    3 => counts.triangle += 1,
                    _ => {}
                }
            }
        }
    }

    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let quad = [ids[a], ids[b], ids[c], ids[d]];
                    let mut mask = 0u8;
                    for i in 0..4 {
                        for j in (i + 1)..4 {
                            if g.has_edge(quad[i], quad[j]) {
                                mask |= 1 << pair_bit(i, j);
                            }
                        }
                    }
                    match classify_mask(mask) {
                        FourVertexClass::Path3 => counts.path3 += 1,
                        FourVertexClass::Star3 => counts.star3 += 1,
                        FourVertexClass::Cycle4 => counts.cycle4 += 1,
                        FourVertexClass::TailedTri => counts.tailed_tri += 1,
                        FourVertexClass::Diamond => counts.diamond += 1,
                        FourVertexClass::Clique4 => counts.clique4 += 1,
                        FourVertexClass::Disconnected => {}
                    }
                }
            }
        }
    }
    Ok(counts)
}
