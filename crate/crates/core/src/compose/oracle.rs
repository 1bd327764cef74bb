use super::{smoothed_timeline, ComposeOptions};
use crate::error::{Error, Result};
use crate::model::{approx_le, CompositionPlan, EnergyQuery, PartialService, PlanChunk};

pub const ORACLE_MAX_CANDIDATES: usize = 12;
pub const ORACLE_MAX_CHUNKS: usize = 10;

/// Exhaustive per-chunk subset enumeration over the same chunk timeline the
/// knapsack composer uses. Refuses instances above the size guard.
pub fn compose_oracle(
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> Result<CompositionPlan> {
    let chunks = smoothed_timeline(q, candidates, opts).chunks();
    if candidates.len() > ORACLE_MAX_CANDIDATES || chunks.len() > ORACLE_MAX_CHUNKS {
        return Err(Error::OracleLimit {
            candidates: candidates.len(),
            chunks: chunks.len(),
        });
    }
    let planned = chunks
        .into_iter()
        .map(|chunk| {
            let r = &chunk.roster;
            let mut best: (f64, u32, u32) = (0.0, 0, 0);
            for mask in 1u32..(1 << r.len()) {
                let mut load = 0.0;
                let mut value = 0.0;
                for (i, p) in r.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        load += p.intensity;
                        value += p.dec;
                    }
                }
                if !approx_le(load, q.i_max) {
                    continue;
                }
                let count = mask.count_ones();
                if value > best.0 || (value == best.0 && count < best.1) {
                    best = (value, count, mask);
                }
            }
            let selected = r
                .iter()
                .enumerate()
                .filter(|(i, _)| best.2 & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            PlanChunk {
                interval: chunk.interval,
                selected,
            }
        })
        .collect();
    Ok(CompositionPlan::new(&q.qid, "oracle", planned))
}
