use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{smoothed_timeline, sort_by_eid, ComposeOptions};
use crate::model::{approx_le, CompositionPlan, EnergyQuery, PartialService, PlanChunk};

/// Orders spans by delivery rate, highest first, then by id.
#[derive(Debug, Clone, Copy)]
struct Key<'a> {
    rate: f64,
    span: &'a (PartialService, usize, usize),
    idx: usize,
}

impl PartialEq for Key<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key<'_> {}

impl PartialOrd for Key<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rate
            .total_cmp(&self.rate)
            .then_with(|| self.span.0.parent_eid.cmp(&other.span.0.parent_eid))
            .then(self.idx.cmp(&other.idx))
    }
}

/// Sweeps the chunks, handing `visit` the rate-ordered set of spans active in
/// each chunk.
fn sweep<'a>(
    spans: &'a [(PartialService, usize, usize)],
    n_chunks: usize,
    mut visit: impl FnMut(usize, &BTreeSet<Key<'a>>),
) {
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); n_chunks + 1];
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); n_chunks + 1];
    for (i, s) in spans.iter().enumerate() {
        starts[s.1].push(i);
        ends[s.2].push(i);
    }
    let key = |i: usize| Key {
        rate: spans[i].0.rate(),
        span: &spans[i],
        idx: i,
    };
    let mut active = BTreeSet::new();
    for k in 0..n_chunks {
        for &i in &ends[k] {
            active.remove(&key(i));
        }
        for &i in &starts[k] {
            active.insert(key(i));
        }
        visit(k, &active);
    }
}

/// Merges consecutive chunks that share their best service and keeps that
/// service plus at most one compatible runner-up per merged chunk.
pub fn compose_heuristic(
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> CompositionPlan {
    let timeline = smoothed_timeline(q, candidates, opts);
    let n = timeline.len();
    let spans: Vec<(PartialService, usize, usize)> = timeline
        .spans()
        .filter(|(p, _, _)| approx_le(p.intensity, q.i_max))
        .map(|(p, s, e)| (p.clone(), s, e))
        .collect();

    let mut best: Vec<Option<usize>> = vec![None; n];
    sweep(&spans, n, |k, active| best[k] = active.first().map(|key| key.idx));

    // exclusive end of the run of equal-best chunks containing each chunk
    let mut group_end = vec![n; n];
    for k in (0..n.saturating_sub(1)).rev() {
        group_end[k] = if best[k] == best[k + 1] { group_end[k + 1] } else { k + 1 };
    }

    let cuts = timeline.cuts();
    let mut chunks = Vec::new();
    sweep(&spans, n, |k, active| {
        if k > 0 && group_end[k - 1] == group_end[k] {
            return;
        }
        let end = group_end[k];
        let interval = crate::model::TimeInterval {
            st: cuts[k],
            et: cuts[end],
        };
        let mut selected = Vec::new();
        if let Some(top) = best[k] {
            let top = &spans[top].0;
            selected.push(top.slice(interval));
            let partner = active.iter().skip(1).find(|key| {
                key.span.2 >= end && approx_le(top.intensity + key.span.0.intensity, q.i_max)
            });
            if let Some(p) = partner {
                selected.push(p.span.0.slice(interval));
            }
        }
        sort_by_eid(&mut selected);
        chunks.push(PlanChunk { interval, selected });
    });
    CompositionPlan::new(&q.qid, "heuristic", chunks)
}
