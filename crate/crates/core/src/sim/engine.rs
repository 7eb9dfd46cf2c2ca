use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Algorithm, Outbox, ParamTable, RandomSource, SimConfig, SimError, Step, VertexContext, VertexRng};
use crate::graph::{graph_digest, Graph, IdAssignment};
use crate::lcl::Labeling;

/// Below this many vertices the engine steps sequentially even when asked to
/// run in parallel; results are identical either way.
const PARALLEL_THRESHOLD: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub rounds_used: usize,
    pub messages_sent: u64,
    /// Number of vertices stepped in rounds `1..=rounds_used`.
    pub per_round_active: Vec<usize>,
    pub labels: Labeling,
    pub seed: Option<u64>,
    pub graph_digest: u64,
}

struct Slot<S> {
    state: S,
    active: bool,
    rng: Option<VertexRng>,
}

/// Runs `alg` with the given IDs and no randomness.
pub fn run_det<A: Algorithm>(
    g: &Graph,
    ids: &IdAssignment,
    alg: &A,
    cfg: &SimConfig,
) -> Result<RunTrace, SimError> {
    if ids.len() != g.n() {
        return Err(SimError::Length {
            what: "ID assignment",
            n: g.n(),
            found: ids.len(),
        });
    }
    ids.validate(g)?;
    match (ids.distinct_radius, alg.required_id_radius()) {
        (None, _) => {}
        (Some(have), Some(need)) if have >= need => {}
        (Some(have), need) => {
            return Err(SimError::IdRadius {
                needed: need.map_or("globally".into(), |r| format!("within distance {r}")),
                provided: format!("within distance {have}"),
            })
        }
    }
    execute(g, Some(&ids.ids), alg, None, cfg)
}

/// Runs `alg` on IDs without checking them against its declared needs; the
/// caller takes responsibility for the outcome (and verifies it).
pub(crate) fn run_det_trusted<A: Algorithm>(
    g: &Graph,
    ids: &[u64],
    alg: &A,
    cfg: &SimConfig,
) -> Result<RunTrace, SimError> {
    if ids.len() != g.n() {
        return Err(SimError::Length {
            what: "ID assignment",
            n: g.n(),
            found: ids.len(),
        });
    }
    execute(g, Some(ids), alg, None, cfg)
}

/// Runs `alg` without IDs; every vertex gets a random stream from `source`.
pub fn run_rand<A: Algorithm>(
    g: &Graph,
    alg: &A,
    source: &RandomSource,
    cfg: &SimConfig,
) -> Result<RunTrace, SimError> {
    execute(g, None, alg, Some(source), cfg)
}

fn check_outbox(
    out: &Outbox,
    v: usize,
    degree: usize,
    round: usize,
    cap: usize,
) -> Result<(), SimError> {
    if let Outbox::PerPort(ms) = out {
        if ms.len() != degree {
            return Err(SimError::OutboxArity {
                vertex: v,
                round,
                expected: degree,
                found: ms.len(),
            });
        }
    }
    let bytes = out.max_len();
    if bytes > cap {
        return Err(SimError::MessageTooLarge {
            vertex: v,
            round,
            bytes,
            cap,
        });
    }
    Ok(())
}

fn check_tape(rng: &Option<VertexRng>, v: usize, round: usize) -> Result<(), SimError> {
    match rng {
        Some(r) if r.exhausted() => Err(SimError::TapeExhausted { vertex: v, round }),
        _ => Ok(()),
    }
}

fn for_each_vertex<T, F>(items: &mut [T], parallel: bool, f: F) -> Result<u64, SimError>
where
    T: Send,
    F: Fn(usize, &mut T) -> Result<u64, SimError> + Sync,
{
    // the lowest failing vertex wins so errors do not depend on scheduling
    let results: Vec<Result<u64, SimError>> = if parallel && items.len() >= PARALLEL_THRESHOLD {
        items
            .par_iter_mut()
            .enumerate()
            .map(|(v, x)| f(v, x))
            .collect()
    } else {
        items.iter_mut().enumerate().map(|(v, x)| f(v, x)).collect()
    };
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn execute<A: Algorithm>(
    g: &Graph,
    ids: Option<&[u64]>,
    alg: &A,
    source: Option<&RandomSource>,
    cfg: &SimConfig,
) -> Result<RunTrace, SimError> {
    let n = g.n();
    let params = cfg
        .params
        .clone()
        .unwrap_or_else(|| ParamTable::new(n as u64, g.delta() as u64));
    if let Some(keys) = &cfg.stream_keys {
        if keys.len() != n {
            return Err(SimError::Length {
                what: "stream key table",
                n,
                found: keys.len(),
            });
        }
    }
    let key = |v: usize| cfg.stream_keys.as_ref().map_or(v as u64, |k| k[v]);
    let ctx = |v: usize| VertexContext {
        degree: g.degree(v),
        id: ids.map(|ids| ids[v]),
        params: &params,
    };
    // reverse[v][p] is the port under which v appears at its p-th neighbor
    let reverse: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&u| g.port_of(u, v).expect("symmetric adjacency"))
                .collect()
        })
        .collect();

    let mut pending: Vec<Option<(Slot<A::State>, Outbox)>> = (0..n).map(|_| None).collect();
    let mut messages = for_each_vertex(&mut pending, cfg.parallel, |v, cell| {
        let mut rng = source.map(|s| s.vertex_rng(key(v)));
        if let Some(r) = rng.as_mut() {
            r.begin_round(0);
        }
        let (state, step) = alg.init(&ctx(v), rng.as_mut());
        check_tape(&rng, v, 0)?;
        check_outbox(&step.outbox, v, g.degree(v), 0, cfg.max_message_bytes)?;
        let sent = step.outbox.count(g.degree(v)) as u64;
        *cell = Some((
            Slot {
                state,
                active: !step.halted,
                rng,
            },
            step.outbox,
        ));
        Ok(sent)
    })?;
    let (mut slots, mut outboxes): (Vec<_>, Vec<_>) =
        pending.into_iter().map(|c| c.expect("every vertex initialized")).unzip();

    let mut per_round_active = Vec::new();
    let mut round = 0;
    loop {
        let active = slots.iter().filter(|s| s.active).count();
        if active == 0 {
            break;
        }
        if round == cfg.max_rounds {
            let trace = finish(g, alg, &slots, round, messages, per_round_active, source);
            return Err(SimError::CapExceeded {
                cap: cfg.max_rounds,
                active,
                trace: Box::new(trace),
            });
        }
        round += 1;
        per_round_active.push(active);
        let prev = &outboxes;
        let mut next: Vec<(Outbox, &mut Slot<A::State>)> =
            slots.iter_mut().map(|s| (Outbox::Silent, s)).collect();
        messages += for_each_vertex(&mut next, cfg.parallel, |v, (out, slot)| {
            if !slot.active {
                return Ok(0);
            }
            let inbox: Vec<Option<&[u8]>> = g
                .neighbors(v)
                .iter()
                .zip(&reverse[v])
                .map(|(&u, &back)| prev[u].get(back))
                .collect();
            if let Some(r) = slot.rng.as_mut() {
                r.begin_round(round);
            }
            let Step { outbox, halted } =
                alg.step(&mut slot.state, &ctx(v), round, &inbox, slot.rng.as_mut());
            check_tape(&slot.rng, v, round)?;
            check_outbox(&outbox, v, g.degree(v), round, cfg.max_message_bytes)?;
            slot.active = !halted;
            let sent = outbox.count(g.degree(v)) as u64;
            *out = outbox;
            Ok(sent)
        })?;
        outboxes = next.into_iter().map(|(o, _)| o).collect();
    }
    Ok(finish(g, alg, &slots, round, messages, per_round_active, source))
}

fn finish<A: Algorithm>(
    g: &Graph,
    alg: &A,
    slots: &[Slot<A::State>],
    rounds_used: usize,
    messages_sent: u64,
    per_round_active: Vec<usize>,
    source: Option<&RandomSource>,
) -> RunTrace {
    RunTrace {
        rounds_used,
        messages_sent,
        per_round_active,
        labels: Labeling::new(slots.iter().map(|s| alg.output(&s.state)).collect()),
        seed: source.and_then(RandomSource::seed),
        graph_digest: graph_digest(g),
    }
}
