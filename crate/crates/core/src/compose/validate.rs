use std::collections::{HashMap, HashSet};

use crate::model::{approx_eq, approx_le, CompositionPlan, EnergyQuery, PartialService};

/// Independent post-hoc check of a plan against its query and the eligible
/// candidate list it was built from. Returns every problem found.
pub fn validate_plan(
    plan: &CompositionPlan,
    q: &EnergyQuery,
    candidates: &[PartialService],
) -> Result<(), Vec<String>> {
    let mut problems = Vec::new();
    let window = q.window();
    let by_id: HashMap<&str, &PartialService> = candidates
        .iter()
        .map(|c| (c.parent_eid.as_str(), c))
        .collect();

    match (plan.chunks.first(), plan.chunks.last()) {
        (Some(first), Some(last)) => {
            if first.interval.st != window.st || last.interval.et != window.et {
                problems.push(format!(
                    "chunks span [{}, {}], window is [{}, {}]",
                    first.interval.st, last.interval.et, window.st, window.et
                ));
            }
        }
        _ => problems.push("plan has no chunks".into()),
    }
    for pair in plan.chunks.windows(2) {
        if pair[0].interval.et != pair[1].interval.st {
            problems.push(format!(
                "chunks [{}, {}] and [{}, {}] are not contiguous",
                pair[0].interval.st, pair[0].interval.et, pair[1].interval.st, pair[1].interval.et
            ));
        }
    }

    let mut total = 0.0;
    for (k, chunk) in plan.chunks.iter().enumerate() {
        if !(chunk.interval.st < chunk.interval.et) {
            problems.push(format!("chunk {k} is empty"));
        }
        let mut seen = HashSet::new();
        for s in &chunk.selected {
            let id = s.parent_eid.as_str();
            if !seen.insert(id) {
                problems.push(format!("chunk {k} selects {id} twice"));
            }
            if s.interval != chunk.interval {
                problems.push(format!("chunk {k}: slice of {id} does not match the chunk"));
            }
            match by_id.get(id) {
                None => problems.push(format!("chunk {k}: {id} is not an eligible candidate")),
                Some(parent) => {
                    if !parent.interval.contains(&s.interval) {
                        problems.push(format!("chunk {k}: {id} is not available for the whole chunk"));
                    }
                    if parent.intensity != s.intensity || parent.tsr != s.tsr || parent.alpha != s.alpha {
                        problems.push(format!("chunk {k}: {id} coefficients differ from the candidate"));
                    }
                }
            }
            if !approx_eq(s.dec, s.expected_dec()) {
                problems.push(format!(
                    "chunk {k}: {id} dec {} but the slice delivers {}",
                    s.dec,
                    s.expected_dec()
                ));
            }
        }
        let load = chunk.load();
        if !approx_le(load, q.i_max) {
            problems.push(format!("chunk {k}: load {load} mA exceeds cap {} mA", q.i_max));
        }
        total += chunk.energy();
    }
    if !approx_eq(total, plan.total_energy) {
        problems.push(format!(
            "total_energy {} but chunks deliver {total}",
            plan.total_energy
        ));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}
