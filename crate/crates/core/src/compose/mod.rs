//! Composition strategies. Every composer takes a query and its eligible
//! candidates and returns a [`CompositionPlan`] whose chunks partition the
//! query window.

mod ga;
mod greedy;
mod heuristic;
mod knapsack;
mod oracle;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ga::{compose_ga_baseline, GaConfig};
pub use greedy::{compose_greedy, compose_priority_baseline};
pub use heuristic::compose_heuristic;
pub use knapsack::{compose_knapsack, solve_01, KnapsackItem};
pub use oracle::{compose_oracle, ORACLE_MAX_CANDIDATES, ORACLE_MAX_CHUNKS};
pub use validate::validate_plan;

use crate::chunking::{default_min_width, Timeline};
use crate::composability::DEFAULT_ELIGIBILITY_MARGIN;
use crate::error::{Error, Result};
use crate::model::{CompositionPlan, EnergyQuery, PartialService, PlanChunk, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Knapsack,
    Heuristic,
    Priority,
    Ga,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Self::Greedy,
        Self::Knapsack,
        Self::Heuristic,
        Self::Priority,
        Self::Ga,
        Self::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Greedy => "greedy",
            Self::Knapsack => "knapsack",
            Self::Heuristic => "heuristic",
            Self::Priority => "priority",
            Self::Ga => "ga",
            Self::Oracle => "oracle",
        }
    }

    /// Parses a comma separated list such as `greedy,knapsack`.
    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>> {
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    #[default]
    MaxEnergy,
    EarliestTime,
    ShortestTime,
}

impl FromStr for Preference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_energy" => Ok(Self::MaxEnergy),
            "earliest_time" => Ok(Self::EarliestTime),
            "shortest_time" => Ok(Self::ShortestTime),
            other => Err(Error::InvalidArgument(format!(
                "unknown preference `{other}` (valid: max_energy, earliest_time, shortest_time)"
            ))),
        }
    }
}

/// How a single chunk is filled by the knapsack composer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerChunk {
    #[default]
    Dp,
    Greedy,
}

impl FromStr for PerChunk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Self::Dp),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::InvalidArgument(format!(
                "unknown per-chunk mode `{other}` (valid: dp, greedy)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComposeOptions {
    /// Fixed thin-chunk threshold; derived from the coordination loss if unset.
    pub min_chunk_seconds: Option<f64>,
    pub eligibility_margin: f64,
    pub per_chunk: PerChunk,
    pub preference: Preference,
    pub ga: GaConfig,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        Self {
            min_chunk_seconds: None,
            eligibility_margin: DEFAULT_ELIGIBILITY_MARGIN,
            per_chunk: PerChunk::Dp,
            preference: Preference::MaxEnergy,
            ga: GaConfig::default(),
        }
    }
}

impl ComposeOptions {
    pub fn min_width(&self, q: &EnergyQuery, candidates: &[PartialService]) -> f64 {
        self.min_chunk_seconds
            .unwrap_or_else(|| default_min_width(q, candidates, self.eligibility_margin))
    }
}

pub fn compose(
    algorithm: Algorithm,
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> Result<CompositionPlan> {
    Ok(match algorithm {
        Algorithm::Greedy => compose_greedy(q, candidates, opts.preference),
        Algorithm::Knapsack => compose_knapsack(q, candidates, opts),
        Algorithm::Heuristic => compose_heuristic(q, candidates, opts),
        Algorithm::Priority => compose_priority_baseline(q, candidates),
        Algorithm::Ga => compose_ga_baseline(q, candidates, opts),
        Algorithm::Oracle => compose_oracle(q, candidates, opts)?,
    })
}

/// The smoothed chunk timeline shared by the chunked composers.
pub fn smoothed_timeline(
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> Timeline {
    let mut t = Timeline::new(q.window(), candidates);
    t.smooth(opts.min_width(q, candidates));
    t
}

/// Integer knapsack capacity for a query, tolerant to the crate-wide epsilon.
pub(crate) fn capacity(i_max: f64) -> u32 {
    (i_max + EPS * i_max.abs().max(1.0)).floor().max(0.0) as u32
}

/// Plan for whole (non-split) services: chunks at every selected boundary.
pub(crate) fn whole_service_plan(
    q: &EnergyQuery,
    selected: &[PartialService],
    tag: &str,
) -> CompositionPlan {
    let chunks = Timeline::new(q.window(), selected)
        .chunks()
        .into_iter()
        .map(|c| PlanChunk {
            interval: c.interval,
            selected: c.roster,
        })
        .collect();
    CompositionPlan::new(&q.qid, tag, chunks)
}

pub(crate) fn sort_by_eid(v: &mut [PartialService]) {
    v.sort_by(|a, b| a.parent_eid.cmp(&b.parent_eid));
}
