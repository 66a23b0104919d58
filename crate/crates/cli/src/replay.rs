//! Batch replay over an update stream, with per-batch timing records and the
//! CSV report format.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use dygraphlet_core::counter::GraphletCounts;
use dygraphlet_core::engine::{Engine, EngineKind};
use dygraphlet_core::stream::{EdgeUpdate, IdMap};
use dygraphlet_core::VertexId;

pub const CSV_HEADER: &str =
    "batch,adds,dels,time_ms,cum_time_ms,triangle,wedge,path3,star3,cycle4,tailed_tri,diamond,clique4";

/// One row of the replay report. `adds`/`dels` are the normalized batch
/// sizes actually applied; timing covers engine work only (graph update,
/// extraction, counting), not I/O or normalization.
#[derive(Clone, Debug)]
pub struct BatchRecord {
    pub batch: usize,
    pub adds: usize,
    pub dels: usize,
    pub time_ms: f64,
    pub cum_time_ms: f64,
    pub counts: GraphletCounts,
}

impl BatchRecord {
    fn csv_row(&self) -> String {
        let c = self.counts.as_array();
        format!(
            "{},{},{},{:.3},{:.3},{},{},{},{},{},{},{},{}",
            self.batch,
            self.adds,
            self.dels,
            self.time_ms,
            self.cum_time_ms,
            c[0],
            c[1],
            c[2],
            c[3],
            c[4],
            c[5],
            c[6],
            c[7],
        )
    }
}

pub struct ReplayReport {
    pub records: Vec<BatchRecord>,
    pub final_counts: GraphletCounts,
    pub total_engine_ms: f64,
    pub events: usize,
}

/// Replays the event stream through one engine in batches. External ids are
/// interned to dense internal ids on first sight.
pub fn replay(
    kind: EngineKind,
    events: &[EdgeUpdate],
    batch_size: usize,
    depth: u32,
) -> Result<ReplayReport> {
    let mut ids = IdMap::new();
    let mut engine = Engine::with_depth(depth)?;
    let mut records = Vec::new();
    let mut cum_ms = 0.0f64;

    for (index, chunk) in events.chunks(batch_size.max(1)).enumerate() {
        let raw: Vec<(dygraphlet_core::UpdateOp, VertexId, VertexId)> = chunk
            .iter()
            .map(|e| (e.op, ids.intern(e.u), ids.intern(e.v)))
            .collect();
        let batch = engine.normalize(&raw)?;

        let started = Instant::now();
        engine.apply(kind, &batch)?;
        let time_ms = started.elapsed().as_secs_f64() * 1e3;
        cum_ms += time_ms;

        records.push(BatchRecord {
            batch: index,
            adds: batch.adds.len(),
            dels: batch.dels.len(),
            time_ms,
            cum_time_ms: cum_ms,
            counts: engine.counts(),
        });
    }

    Ok(ReplayReport {
        final_counts: engine.counts(),
        total_engine_ms: cum_ms,
        events: events.len(),
        records,
    })
}

pub fn write_csv(path: &Path, records: &[BatchRecord]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{CSV_HEADER}")?;
    for record in records {
        writeln!(w, "{}", record.csv_row())?;
    }
    w.flush()?;
    Ok(())
}
