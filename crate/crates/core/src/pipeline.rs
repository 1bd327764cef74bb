//! The per-query pipeline: index lookup, clipping, eligibility, composition.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::composability::eligible;
use crate::compose::{compose, Algorithm, ComposeOptions};
use crate::error::{Error, Result};
use crate::index::{build_index, select_candidates, StIndex, TsrModel, DEFAULT_ESD_METERS};
use crate::model::{CompositionPlan, EnergyQuery, EnergyService, PartialService};
use crate::qos::TsrParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TsrMode {
    /// Use each service's advertised rate.
    #[default]
    Advertised,
    /// Recompute the rate from provider distance.
    Distance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub esd_meters: f64,
    pub tsr_mode: TsrMode,
    #[serde(flatten)]
    pub compose: ComposeOptions,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            esd_meters: DEFAULT_ESD_METERS,
            tsr_mode: TsrMode::Advertised,
            compose: ComposeOptions::default(),
        }
    }
}

/// An indexed scenario ready to answer queries.
#[derive(Debug, Clone)]
pub struct Engine {
    index: StIndex,
    tsr_params: TsrParams,
    config: EngineConfig,
}

impl Engine {
    pub fn new(services: &[EnergyService], tsr_params: TsrParams, config: EngineConfig) -> Result<Self> {
        tsr_params.validate()?;
        if !(config.esd_meters > 0.0) {
            return Err(Error::InvalidArgument("esd_meters must be positive".into()));
        }
        Ok(Self {
            index: build_index(services)?,
            tsr_params,
            config,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn index(&self) -> &StIndex {
        &self.index
    }

    fn tsr_model(&self) -> TsrModel {
        match self.config.tsr_mode {
            TsrMode::Advertised => TsrModel::Advertised,
            TsrMode::Distance => TsrModel::Distance(self.tsr_params),
        }
    }

    /// Services in range and time, clipped to the window, that clear the
    /// eligibility rule. Ordered by service id.
    pub fn candidates(&self, q: &EnergyQuery) -> Result<Vec<PartialService>> {
        let margin = self.config.compose.eligibility_margin;
        let clipped = select_candidates(&self.index, q, self.config.esd_meters, self.tsr_model())?;
        Ok(clipped
            .into_iter()
            .filter(|p| {
                let parent = self.index.find(&p.parent_eid).expect("candidate comes from the index");
                eligible(p, parent, q, margin).composable
            })
            .collect())
    }

    pub fn compose(&self, algorithm: Algorithm, q: &EnergyQuery) -> Result<CompositionPlan> {
        let candidates = self.candidates(q)?;
        compose(algorithm, q, &candidates, &self.config.compose)
    }

    /// Like [`Engine::compose`], recording the wall time of the composition
    /// call alone.
    pub fn compose_timed(&self, algorithm: Algorithm, q: &EnergyQuery) -> Result<CompositionPlan> {
        let candidates = self.candidates(q)?;
        let started = Instant::now();
        let plan = compose(algorithm, q, &candidates, &self.config.compose)?;
        Ok(plan.with_wall_time(started.elapsed()))
    }
}
