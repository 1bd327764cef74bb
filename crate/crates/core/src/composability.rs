//! Composability rules between services and a query, and waiting-time based
//! query splitting.

use std::fmt;

use serde::Serialize;

use crate::model::{approx_le, EnergyQuery, EnergyService, PartialService, TimeInterval};

pub const DEFAULT_ELIGIBILITY_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Spatial,
    Temporal,
    IntensitySequential,
    IntensitySimultaneous,
    Eligibility,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Spatial => "spatial",
            Rule::Temporal => "temporal",
            Rule::IntensitySequential => "intensity_sequential",
            Rule::IntensitySimultaneous => "intensity_simultaneous",
            Rule::Eligibility => "eligibility",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityVerdict {
    pub composable: bool,
    pub rule: Option<Rule>,
    pub detail: String,
}

impl CompatibilityVerdict {
    fn ok() -> Self {
        Self {
            composable: true,
            rule: None,
            detail: String::new(),
        }
    }

    fn reject(rule: Rule, detail: String) -> Self {
        Self {
            composable: false,
            rule: Some(rule),
            detail,
        }
    }
}

pub fn spatially_composable(
    s1: &EnergyService,
    s2: &EnergyService,
    q: &EnergyQuery,
    esd: f64,
) -> CompatibilityVerdict {
    for s in [s1, s2] {
        let d = s.loc.distance(&q.l);
        if d > esd {
            return CompatibilityVerdict::reject(
                Rule::Spatial,
                format!("{} is {d:.3} m from the consumer (esd {esd} m)", s.eid),
            );
        }
    }
    CompatibilityVerdict::ok()
}

pub fn temporally_composable(s: &PartialService, q: &EnergyQuery) -> CompatibilityVerdict {
    let w = q.window();
    if w.contains(&s.interval) {
        CompatibilityVerdict::ok()
    } else {
        CompatibilityVerdict::reject(
            Rule::Temporal,
            format!(
                "{} spans [{}, {}] outside the window [{}, {}]",
                s.parent_eid, s.interval.st, s.interval.et, w.st, w.et
            ),
        )
    }
}

/// Largest total intensity drawn at once by `services` inside `within`.
/// Intervals are treated as half open, so back-to-back services do not stack.
pub fn peak_load<'a>(
    services: impl IntoIterator<Item = &'a PartialService>,
    within: &TimeInterval,
) -> f64 {
    let mut events: Vec<(f64, f64)> = Vec::new();
    for s in services {
        if let Some(o) = s.interval.intersect(within) {
            events.push((o.st, s.intensity));
            events.push((o.et, -s.intensity));
        }
    }
    // ends sort before starts at the same instant
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (mut load, mut peak) = (0.0f64, 0.0f64);
    for (_, delta) in events {
        load += delta;
        peak = peak.max(load);
    }
    peak
}

/// Whether `candidate` can join `selected` without the concurrent current
/// exceeding the query's cap anywhere inside `overlap_interval`.
pub fn intensity_compatible(
    selected: &[PartialService],
    candidate: &PartialService,
    q: &EnergyQuery,
    overlap_interval: &TimeInterval,
) -> CompatibilityVerdict {
    if !approx_le(candidate.intensity, q.i_max) {
        return CompatibilityVerdict::reject(
            Rule::IntensitySequential,
            format!(
                "{} draws {} mA above the cap {} mA",
                candidate.parent_eid, candidate.intensity, q.i_max
            ),
        );
    }
    let Some(window) = candidate.interval.intersect(overlap_interval) else {
        return CompatibilityVerdict::ok();
    };
    let peak = peak_load(selected, &window);
    if peak > 0.0 && !approx_le(peak + candidate.intensity, q.i_max) {
        return CompatibilityVerdict::reject(
            Rule::IntensitySimultaneous,
            format!(
                "{} adds {} mA to a concurrent {} mA, above the cap {} mA",
                candidate.parent_eid, candidate.intensity, peak, q.i_max
            ),
        );
    }
    CompatibilityVerdict::ok()
}

/// A slice is worth connecting to when its net energy clearly exceeds the
/// consumer's coordination loss; `margin` encodes "clearly".
pub fn eligible(
    s: &PartialService,
    parent: &EnergyService,
    q: &EnergyQuery,
    margin: f64,
) -> CompatibilityVerdict {
    let net = s.dec * parent.tsr - parent.pcl;
    let need = q.cl * margin;
    if net > 0.0 && approx_le(need, net) {
        CompatibilityVerdict::ok()
    } else {
        CompatibilityVerdict::reject(
            Rule::Eligibility,
            format!(
                "{} nets {net:.4} mAh, below {margin} x coordination loss {}",
                s.parent_eid, q.cl
            ),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub subqueries: Vec<EnergyQuery>,
    /// The leading part when the device's own charge already covers it.
    pub dropped_leading: Option<EnergyQuery>,
}

/// Splits a query at candidate gaps the device survives on its own charge.
pub fn split_query(q: &EnergyQuery, candidates: &[PartialService]) -> SplitOutcome {
    let unchanged = SplitOutcome {
        subqueries: vec![q.clone()],
        dropped_leading: None,
    };
    let window = q.window();
    let mut spans: Vec<TimeInterval> = candidates
        .iter()
        .filter_map(|c| c.interval.intersect(&window))
        .collect();
    spans.sort_by(|a, b| a.st.total_cmp(&b.st).then(a.et.total_cmp(&b.et)));

    // union of overlapping spans, then merge across gaps the device cannot bridge
    let mut clusters: Vec<TimeInterval> = Vec::new();
    for s in spans {
        match clusters.last_mut() {
            Some(c) if s.st <= c.et => c.et = c.et.max(s.et),
            Some(c) if q.soc_at(s.st) <= q.soc.soc_zero => c.et = c.et.max(s.et),
            _ => clusters.push(s),
        }
    }
    if clusters.len() < 2 {
        return unchanged;
    }

    let total: f64 = clusters.iter().map(TimeInterval::duration_secs).sum();
    let mut subs: Vec<EnergyQuery> = clusters
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut sub = q.clone();
            sub.qid = format!("{}#{k}", q.qid);
            sub.t = c.st;
            sub.d = c.duration_secs();
            sub.re = q.re * c.duration_secs() / total;
            sub.soc.soc_initial = q.soc_at(c.st);
            sub
        })
        .collect();

    let first = &subs[0];
    let spare = q.soc_at(first.t + first.d) - q.soc.soc_zero;
    let dropped_leading = (spare > 0.0 && spare >= first.re).then(|| subs.remove(0));
    SplitOutcome {
        subqueries: subs,
        dropped_leading,
    }
}
