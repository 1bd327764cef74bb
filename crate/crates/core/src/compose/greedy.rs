use std::cmp::Ordering;

use super::{whole_service_plan, Preference};
use crate::composability::intensity_compatible;
use crate::model::{approx_le, CompositionPlan, EnergyQuery, PartialService};

fn order(pref: Preference) -> impl Fn(&PartialService, &PartialService) -> Ordering {
    move |a, b| {
        let primary = match pref {
            Preference::MaxEnergy => b.dec.total_cmp(&a.dec),
            Preference::EarliestTime => a.interval.st.total_cmp(&b.interval.st),
            Preference::ShortestTime => a
                .interval
                .duration_secs()
                .total_cmp(&b.interval.duration_secs()),
        };
        primary.then_with(|| a.parent_eid.cmp(&b.parent_eid))
    }
}

/// Admits whole services in preference order while they stay within the
/// intensity cap, stopping once the required energy is reached.
pub fn compose_greedy(
    q: &EnergyQuery,
    candidates: &[PartialService],
    pref: Preference,
) -> CompositionPlan {
    let mut pool = candidates.to_vec();
    pool.sort_by(order(pref));
    let window = q.window();
    let mut selected: Vec<PartialService> = Vec::new();
    let mut total = 0.0;
    for c in pool {
        if approx_le(q.re, total) {
            break;
        }
        if intensity_compatible(&selected, &c, q, &window).composable {
            total += c.dec;
            selected.push(c);
        }
    }
    whole_service_plan(q, &selected, "greedy")
}

/// Resource-scheduling baseline: whole services by energy, admitted whenever
/// they fit, no chunking and no early stop.
pub fn compose_priority_baseline(q: &EnergyQuery, candidates: &[PartialService]) -> CompositionPlan {
    let mut pool = candidates.to_vec();
    pool.sort_by(order(Preference::MaxEnergy));
    let window = q.window();
    let mut selected: Vec<PartialService> = Vec::new();
    for c in pool {
        if intensity_compatible(&selected, &c, q, &window).composable {
            selected.push(c);
        }
    }
    whole_service_plan(q, &selected, "priority")
}
