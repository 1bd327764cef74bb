use serde::Serialize;

use super::{capacity, smoothed_timeline, ComposeOptions, PerChunk};
use crate::model::{CompositionPlan, EnergyQuery, PartialService, PlanChunk, ServiceId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnapsackItem {
    pub service_ref: ServiceId,
    /// Intensity rounded up to whole mA.
    pub weight: u32,
    pub value: f64,
}

impl KnapsackItem {
    pub fn from_slice(p: &PartialService) -> Self {
        Self {
            service_ref: p.parent_eid.clone(),
            weight: p.intensity.ceil() as u32,
            value: p.dec,
        }
    }
}

#[derive(Clone, Copy)]
struct State {
    value: f64,
    count: u32,
}

impl State {
    fn beats(&self, other: &State) -> bool {
        self.value > other.value || (self.value == other.value && self.count < other.count)
    }
}

/// Exact 0/1 knapsack by dynamic programming over integer capacity. Returns
/// chosen item positions in ascending order. Among equal-value optima the one
/// with fewer items wins.
pub fn solve_01(items: &[KnapsackItem], cap: u32) -> Vec<usize> {
    let width = cap as usize + 1;
    let mut best = vec![State { value: 0.0, count: 0 }; width];
    let mut take = vec![false; items.len() * width];
    for (i, item) in items.iter().enumerate() {
        let w = item.weight as usize;
        if w == 0 || w > cap as usize || !(item.value > 0.0) {
            continue;
        }
        for c in (w..width).rev() {
            let prev = best[c - w];
            let cand = State {
                value: prev.value + item.value,
                count: prev.count + 1,
            };
            if cand.beats(&best[c]) {
                best[c] = cand;
                take[i * width + c] = true;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = cap as usize;
    for i in (0..items.len()).rev() {
        if take[i * width + c] {
            chosen.push(i);
            c -= items[i].weight as usize;
        }
    }
    chosen.reverse();
    chosen
}

fn greedy_fill(items: &[KnapsackItem], cap: u32) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].value.total_cmp(&items[a].value).then(a.cmp(&b)));
    let mut left = cap;
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if items[i].weight <= left && items[i].value > 0.0 {
            left -= items[i].weight;
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Chunks the window and solves an independent knapsack per chunk, with
/// intensity as weight and chunk energy as value.
pub fn compose_knapsack(
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> CompositionPlan {
    let cap = capacity(q.i_max);
    let chunks = smoothed_timeline(q, candidates, opts)
        .chunks()
        .into_iter()
        .map(|chunk| {
            let items: Vec<KnapsackItem> = chunk.roster.iter().map(KnapsackItem::from_slice).collect();
            let chosen = match opts.per_chunk {
                PerChunk::Dp => solve_01(&items, cap),
                PerChunk::Greedy => greedy_fill(&items, cap),
            };
            PlanChunk {
                interval: chunk.interval,
                selected: chosen.into_iter().map(|i| chunk.roster[i].clone()).collect(),
            }
        })
        .collect();
    let tag = match opts.per_chunk {
        PerChunk::Dp => "knapsack",
        PerChunk::Greedy => "knapsack-greedy",
    };
    CompositionPlan::new(&q.qid, tag, chunks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(spec: &[(u32, f64)]) -> Vec<KnapsackItem> {
        spec.iter()
            .enumerate()
            .map(|(i, &(weight, value))| KnapsackItem {
                service_ref: ServiceId::new(format!("s{i}")),
                weight,
                value,
            })
            .collect()
    }

    #[test]
    fn three_item_instance() {
        let it = items(&[(1000, 60.0), (900, 55.0), (800, 50.0)]);
        // 1000 + 800 fills 1800 exactly and is worth 110
        assert_eq!(solve_01(&it, 1800), vec![0, 2]);
        // one mA less and only 900 + 800 fits two items
        assert_eq!(solve_01(&it, 1799), vec![1, 2]);
        assert_eq!(greedy_fill(&it, 1799), vec![0]);
    }

    #[test]
    fn everything_fits() {
        let it = items(&[(100, 1.0), (200, 2.0), (300, 3.0)]);
        assert_eq!(solve_01(&it, 600), vec![0, 1, 2]);
    }

    #[test]
    fn ties_prefer_fewer_items() {
        let it = items(&[(500, 2.0), (500, 2.0), (900, 4.0)]);
        assert_eq!(solve_01(&it, 1000), vec![2]);
    }

    #[test]
    fn oversized_and_empty() {
        assert!(solve_01(&items(&[(3000, 9.0)]), 2000).is_empty());
        assert!(solve_01(&[], 2000).is_empty());
    }
}
