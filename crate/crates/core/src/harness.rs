//! Cross-validation driver: replays generated streams through the engines in
//! lockstep, compares census vectors after every batch (and against brute
//! force when the graph is small enough), and shrinks failures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counter::{count_brute_guarded, count_exact, GraphletCounts, BRUTE_GUARD};
use crate::engine::{Batch, Engine, EngineKind};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::stream::{gen_dynamic_stream, make_batches, UpdateOp};
use crate::synthetic;

/// Base-graph generator for a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    ErdosRenyi,
    PreferentialAttachment { attach: usize },
}

impl BaseKind {
    fn as_str(&self) -> &'static str {
        match self {
            BaseKind::ErdosRenyi => "er",
            BaseKind::PreferentialAttachment { .. } => "pa",
        }
    }
}

/// One randomized equivalence trial.
#[derive(Clone, Debug)]
pub struct TrialSpec {
    pub n: usize,
    pub base_edges: usize,
    pub batch_size: usize,
    pub batch_count: usize,
    /// Add probability for the generated stream; 1.0 means insert-only.
    pub p: f64,
    pub seed: u64,
    pub engines: Vec<EngineKind>,
    pub locality_depth: u32,
    /// Brute-force comparison runs when `n` is at or below this.
    pub brute_guard: usize,
    pub base: BaseKind,
    /// Self-test hook: perturbs non-reference censuses before comparison, as
    /// a wrong derivation constant would. Divergence must be detected.
    pub inject_fault: bool,
}

impl Default for TrialSpec {
    fn default() -> Self {
        TrialSpec {
            n: 24,
            base_edges: 160,
            batch_size: 5,
            batch_count: 30,
            p: 0.7,
            seed: 42,
            engines: vec![EngineKind::Fdgc, EngineKind::Pgdn],
            locality_depth: 3,
            brute_guard: BRUTE_GUARD,
            base: BaseKind::ErdosRenyi,
            inject_fault: false,
        }
    }
}

/// First point where two census vectors disagreed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub batch_index: usize,
    /// Which comparison failed, e.g. `fdgc-vs-pgdn` or `brute-vs-pgdn`.
    pub label: String,
    pub expected: GraphletCounts,
    pub actual: GraphletCounts,
    pub batch: Batch,
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub passed: bool,
    pub batches_run: usize,
    pub brute_checked: bool,
    /// Reference census after each batch; the per-batch count columns.
    pub history: Vec<GraphletCounts>,
    pub divergence: Option<Divergence>,
    /// Size of the shrunken failing batch subsequence, when shrinking ran.
    pub shrunk_batches: Option<usize>,
    /// One-line machine-readable verdict.
    pub summary: String,
}

type RawEvent = (UpdateOp, VertexId, VertexId);

fn generate_batches(spec: &TrialSpec) -> Result<Vec<Vec<RawEvent>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut base = match spec.base {
        BaseKind::ErdosRenyi => {
            let possible = spec.n * (spec.n - 1) / 2;
            let p_edge = (spec.base_edges as f64 / possible as f64).min(1.0);
            synthetic::erdos_renyi_edges(spec.n, p_edge, &mut rng)
        }
        BaseKind::PreferentialAttachment { attach } => {
            synthetic::preferential_attachment_edges(spec.n, attach, &mut rng)
        }
    };
    base.truncate(spec.base_edges);
    let base: Vec<(u64, u64)> = base.iter().map(|&(u, v)| (u as u64, v as u64)).collect();
    let events = gen_dynamic_stream(&base, spec.p, spec.seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let raw: Vec<RawEvent> = events
        .iter()
        .map(|e| (e.op, e.u as VertexId, e.v as VertexId))
        .collect();
    let mut batches = make_batches(&raw, spec.batch_size)?;
    batches.truncate(spec.batch_count);
    Ok(batches)
}

struct ReplayResult {
    history: Vec<GraphletCounts>,
    brute_checked: bool,
    divergence: Option<Divergence>,
}

/// Replays the given batches through all requested engines in lockstep,
/// comparing after every batch. PGDN is the reference when requested.
fn replay(spec: &TrialSpec, batches: &[Vec<RawEvent>]) -> Result<ReplayResult> {
    let mut engines: Vec<(EngineKind, Engine)> = spec
        .engines
        .iter()
        .map(|&k| Ok((k, Engine::with_depth(spec.locality_depth)?)))
        .collect::<Result<_>>()?;
    if engines.is_empty() {
        return Err(Error::Config("a trial needs at least one engine".into()));
    }
    // Reference last in sort order: prefer pgdn, the recount baseline.
    let reference = engines
        .iter()
        .position(|(k, _)| *k == EngineKind::Pgdn)
        .unwrap_or(0);

    let fault = GraphletCounts {
        triangle: 1,
        ..GraphletCounts::ZERO
    };

    let mut history = Vec::with_capacity(batches.len());
    let mut brute_checked = false;
    let mut divergence = None;

    'outer: for (batch_index, raw) in batches.iter().enumerate() {
        // Graphs stay identical across engines, so one normalization,
        // taken against the reference graph, serves all of them.
        let batch = engines[reference].1.normalize(raw)?;
        for (kind, engine) in engines.iter_mut() {
            engine.apply(*kind, &batch)?;
        }
        let expected = engines[reference].1.counts();
        history.push(expected);

        for (i, (kind, engine)) in engines.iter().enumerate() {
            if i == reference {
                continue;
            }
            let mut actual = engine.counts();
            if spec.inject_fault {
                actual = actual.checked_add(&fault)?;
            }
            if actual != expected {
                divergence = Some(Divergence {
                    batch_index,
                    label: format!(
                        "{}-vs-{}",
                        kind.as_str(),
                        engines[reference].0.as_str()
                    ),
                    expected,
                    actual,
                    batch: batch.clone(),
                });
                break 'outer;
            }
        }

        if spec.n <= spec.brute_guard {
            brute_checked = true;
            let brute = count_brute_guarded(engines[reference].1.graph(), spec.brute_guard)?;
            if brute != expected {
                divergence = Some(Divergence {
                    batch_index,
                    label: format!("brute-vs-{}", engines[reference].0.as_str()),
                    expected: brute,
                    actual: expected,
                    batch: batch.clone(),
                });
                break 'outer;
            }
        }
    }

    Ok(ReplayResult {
        history,
        brute_checked,
        divergence,
    })
}

/// Best-effort ddmin over batch subsequences: tries dropping one batch at a
/// time while the divergence persists, bounded by a replay budget.
fn shrink(spec: &TrialSpec, batches: &[Vec<RawEvent>], fail_index: usize) -> Result<usize> {
    let mut kept: Vec<usize> = (0..=fail_index).collect();
    let mut budget = 32usize;
    let mut i = 0;
    while i < kept.len() && budget > 0 {
        let candidate: Vec<Vec<RawEvent>> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &b)| batches[b].clone())
            .collect();
        budget -= 1;
        if replay(spec, &candidate)?.divergence.is_some() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept.len())
}

/// Runs one equivalence trial: generates a seeded stream, replays it through
/// the requested engines in lockstep, and reports the first divergence.
pub fn run_equivalence_trial(spec: &TrialSpec) -> Result<TrialOutcome> {
    if spec.engines.contains(&EngineKind::Igc) && spec.p < 1.0 {
        return Err(Error::Config(
            "igc requires an insert-only stream; use p = 1.0".into(),
        ));
    }
    let batches = generate_batches(spec)?;
    let result = replay(spec, &batches)?;

    let shrunk_batches = match &result.divergence {
        Some(d) => Some(shrink(spec, &batches, d.batch_index)?),
        None => None,
    };

    let passed = result.divergence.is_none();
    let engines = spec
        .engines
        .iter()
        .map(|k| k.as_str())
        .collect::<Vec<_>>()
        .join("+");
    let verdict = match &result.divergence {
        None => "result=PASS".to_string(),
        Some(d) => format!(
            "result=FAIL batch={} label={} shrunk_to={}",
            d.batch_index,
            d.label,
            shrunk_batches.unwrap_or(0)
        ),
    };
    let summary = format!(
        "seed={} base={} n={} batches={}x{} p={:.2} depth={} engines={} brute={} {}",
        spec.seed,
        spec.base.as_str(),
        spec.n,
        batches.len(),
        spec.batch_size,
        spec.p,
        spec.locality_depth,
        engines,
        if result.brute_checked { "yes" } else { "no" },
        verdict,
    );

    Ok(TrialOutcome {
        passed,
        batches_run: batches.len(),
        brute_checked: result.brute_checked,
        history: result.history,
        divergence: result.divergence,
        shrunk_batches,
        summary,
    })
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// Checks the closed-form graphlet counts of the complete, path, cycle, and
/// star families against both counting routes.
pub fn run_closed_form_suite() -> Result<SuiteOutcome> {
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let mut check = |name: String, ok: bool| {
        checks += 1;
        if !ok {
            failures.push(name);
        }
    };

    for n in 4..=12 {
        let g = synthetic::complete(n);
        let exact = count_exact(&g)?;
        check(format!("K_{n} matches brute"), exact == count_brute_guarded(&g, 64)?);
        check(
            format!("K_{n} clique4 = C({n},4)"),
            exact.clique4 == binomial(n, 4),
        );
        check(
            format!("K_{n} triangle = C({n},3)"),
            exact.triangle == binomial(n, 3),
        );
        check(
            format!("K_{n} has only cliques"),
            exact.wedge == 0
                && exact.path3 == 0
                && exact.star3 == 0
                && exact.cycle4 == 0
                && exact.tailed_tri == 0
                && exact.diamond == 0,
        );
    }

    for n in 4..=12 {
        let g = synthetic::path(n);
        let exact = count_exact(&g)?;
        check(format!("P_{n} matches brute"), exact == count_brute_guarded(&g, 64)?);
        check(format!("P_{n} path3 = n-3"), exact.path3 == (n as i64 - 3));
    }

    for n in 5..=12 {
        let g = synthetic::cycle(n);
        let exact = count_exact(&g)?;
        check(format!("C_{n} matches brute"), exact == count_brute_guarded(&g, 64)?);
        check(format!("C_{n} path3 = n"), exact.path3 == n as i64);
        check(format!("C_{n} cycle4 = 0"), exact.cycle4 == 0);
    }

    for leaves in 3..=12 {
        let g = synthetic::star(leaves);
        let exact = count_exact(&g)?;
        check(
            format!("K_1_{leaves} matches brute"),
            exact == count_brute_guarded(&g, 64)?,
        );
        check(
            format!("K_1_{leaves} star3 = C({leaves},3)"),
            exact.star3 == binomial(leaves, 3),
        );
    }

    Ok(SuiteOutcome {
        passed: failures.is_empty(),
        checks,
        failures,
    })
}
