//! Edge-list ingestion, the update-stream file format, batch grouping, and
//! the fully dynamic workload generator.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Signed edge event over external vertex ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateOp {
    Add,
    Delete,
}

impl fmt::Display for UpdateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateOp::Add => write!(f, "+"),
            UpdateOp::Delete => write!(f, "-"),
        }
    }
}

/// One edge event. Endpoints are external ids in canonical orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeUpdate {
    pub op: UpdateOp,
    pub u: u64,
    pub v: u64,
}

impl EdgeUpdate {
    /// Canonicalizes the endpoint order. Self-loops are rejected.
    pub fn new(op: UpdateOp, u: u64, v: u64) -> Result<Self> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(EdgeUpdate {
            op,
            u: u.min(v),
            v: u.max(v),
        })
    }

    pub fn add(u: u64, v: u64) -> Result<Self> {
        Self::new(UpdateOp::Add, u, v)
    }

    pub fn delete(u: u64, v: u64) -> Result<Self> {
        Self::new(UpdateOp::Delete, u, v)
    }
}

/// Post-dedup shape of a parsed edge-list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetMeta {
    pub name: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// Self-loop lines dropped with a warning rather than an error.
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Maps sparse external vertex ids to dense internal ids, in first-seen order.
#[derive(Clone, Debug, Default)]
pub struct IdMap {
    to_internal: HashMap<u64, VertexId>,
    to_external: Vec<u64>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, external: u64) -> VertexId {
        if let Some(&id) = self.to_internal.get(&external) {
            return id;
        }
        let id = self.to_external.len() as VertexId;
        self.to_internal.insert(external, id);
        self.to_external.push(external);
        id
    }

    pub fn lookup(&self, external: u64) -> Option<VertexId> {
        self.to_internal.get(&external).copied()
    }

    pub fn external(&self, internal: VertexId) -> u64 {
        self.to_external[internal as usize]
    }

    pub fn len(&self) -> usize {
        self.to_external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_external.is_empty()
    }
}

/// Parses a SNAP-style edge list: whitespace-separated `u v` lines, `#`
/// comments. Self-loops and duplicate edges are dropped; emission order is
/// first-occurrence order.
pub fn parse_edge_list(path: &Path) -> Result<(Vec<(u64, u64)>, DatasetMeta)> {
    let file = File::open(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_edge_list_lines(BufReader::new(file), &name, &path.display().to_string())
}

fn parse_edge_list_lines<R: BufRead>(
    reader: R,
    name: &str,
    path: &str,
) -> Result<(Vec<(u64, u64)>, DatasetMeta)> {
    let mut edges = Vec::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut vertices: HashSet<u64> = HashSet::new();
    let mut self_loops = 0usize;
    let mut duplicates = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("expected two vertex ids, got {trimmed:?}"),
                })
            }
        };
        let parse_id = |tok: &str| -> Result<u64> {
            tok.parse().map_err(|_| Error::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!("invalid vertex id {tok:?}"),
            })
        };
        let (u, v) = (parse_id(a)?, parse_id(b)?);
        if u == v {
            self_loops += 1;
            continue;
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            duplicates += 1;
            continue;
        }
        vertices.insert(u);
        vertices.insert(v);
        edges.push(e);
    }

    let meta = DatasetMeta {
        name: name.to_string(),
        vertex_count: vertices.len(),
        edge_count: edges.len(),
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    };
    Ok((edges, meta))
}

/// Splits events into consecutive chunks of `batch_size`; the final chunk may
/// be smaller. Concatenating the result reproduces the input exactly.
pub fn make_batches<T: Clone>(events: &[T], batch_size: usize) -> Result<Vec<Vec<T>>> {
    if batch_size == 0 {
        return Err(Error::EmptyBatchSize);
    }
    Ok(events.chunks(batch_size).map(<[T]>::to_vec).collect())
}

/// Turns a base edge sequence into a fully dynamic update stream.
///
/// Each base edge becomes an add event with probability `p` (and is
/// enqueued); after each base edge, with probability `1 - p` one previously
/// enqueued edge is dequeued and re-emitted as a delete. Every delete refers
/// to an edge added earlier and not yet deleted. Deterministic per seed.
pub fn gen_dynamic_stream(base: &[(u64, u64)], p: f64, seed: u64) -> Result<Vec<EdgeUpdate>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stream = Vec::new();
    let mut queue: VecDeque<(u64, u64)> = VecDeque::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();

    for &(u, v) in base {
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            continue;
        }
        if rng.gen::<f64>() < p {
            stream.push(EdgeUpdate::add(e.0, e.1)?);
            queue.push_back(e);
        }
        if rng.gen::<f64>() < 1.0 - p {
            if let Some(d) = queue.pop_front() {
                stream.push(EdgeUpdate::delete(d.0, d.1)?);
            }
        }
    }
    Ok(stream)
}

/// Exports edges as a plain edge list, one canonical `u v` line per edge.
pub fn write_edge_list(path: &Path, edges: &[(u64, u64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for &(u, v) in edges {
        writeln!(w, "{} {}", u.min(v), u.max(v))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes events in the update-stream format: `("+"|"-") SP u SP v NL`.
pub fn write_update_stream(path: &Path, events: &[EdgeUpdate]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for ev in events {
        writeln!(w, "{} {} {}", ev.op, ev.u, ev.v)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an update-stream file. Round-trips canonical files byte-identically.
pub fn read_update_stream(path: &Path) -> Result<Vec<EdgeUpdate>> {
    let file = File::open(path)?;
    read_update_stream_lines(BufReader::new(file), &path.display().to_string())
}

fn read_update_stream_lines<R: BufRead>(reader: R, path: &str) -> Result<Vec<EdgeUpdate>> {
    let mut events = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let op = match fields.next() {
            Some("+") => UpdateOp::Add,
            Some("-") => UpdateOp::Delete,
            other => {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("expected op '+' or '-', got {other:?}"),
                })
            }
        };
        let mut parse_id = |what: &str| -> Result<u64> {
            fields
                .next()
                .ok_or_else(|| Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("missing {what}"),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("invalid {what}"),
                })
        };
        let u = parse_id("first endpoint")?;
        let v = parse_id("second endpoint")?;
        if u == v {
            return Err(Error::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!("self-loop on vertex {u}"),
            });
        }
        events.push(EdgeUpdate::new(op, u, v)?);
    }
    Ok(events)
}
