//! Completeness and runtime sweeps over synthetic scenarios.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::compose::{compose, validate_plan, Algorithm};
use crate::error::{Error, Result};
use crate::model::{approx_le, EnergyQuery, PartialService};
use crate::pipeline::{Engine, EngineConfig};
use crate::workload::{generate_scenario, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessRecord {
    pub ratio: f64,
    /// `None` marks the average over all thresholds.
    #[serde(serialize_with = "sq_or_avg")]
    pub sq: Option<f64>,
    pub algorithm: Algorithm,
    pub completeness: f64,
    pub seed: u64,
}

fn sq_or_avg<S: serde::Serializer>(sq: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match sq {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str("avg"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeRecord {
    pub ratio: f64,
    pub algorithm: Algorithm,
    pub mean_us: f64,
    pub p50_us: f64,
    pub p95_us: f64,
    pub n_queries: usize,
}

/// A query with its eligible candidates, ready to hand to any composer.
#[derive(Debug, Clone)]
pub struct PreparedQuery {
    pub query: EnergyQuery,
    pub candidates: Vec<PartialService>,
}

/// Builds the scenario for `ratio` services per query and runs the filtering
/// stages for each query.
pub fn prepare(cfg: &ScenarioConfig, engine: &EngineConfig, ratio: f64) -> Result<Vec<PreparedQuery>> {
    let scenario_cfg = ScenarioConfig {
        n_services: (ratio * cfg.n_queries as f64).round() as usize,
        ..cfg.clone()
    };
    let scenario = generate_scenario(&scenario_cfg)?;
    let engine = Engine::new(&scenario.services, cfg.tsr_params, engine.clone())?;
    scenario
        .queries
        .into_iter()
        .map(|query| {
            let candidates = engine.candidates(&query)?;
            Ok(PreparedQuery { query, candidates })
        })
        .collect()
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
}

/// Runs one composer on a prepared query and re-checks the plan.
fn energy_of(algorithm: Algorithm, p: &PreparedQuery, engine: &EngineConfig) -> Result<f64> {
    let plan = compose(algorithm, &p.query, &p.candidates, &engine.compose)?;
    validate_plan(&plan, &p.query, &p.candidates).map_err(|problems| {
        Error::InvalidArgument(format!(
            "{} produced an invalid plan for {}: {}",
            algorithm,
            p.query.qid,
            problems.join("; ")
        ))
    })?;
    Ok(plan.chunks.iter().map(|c| c.energy()).sum())
}

/// Fraction of queries served for every (ratio, sq, algorithm), averaged over
/// `repeats` seeds, followed per (ratio, algorithm) by the mean over all sq
/// values. Repeat `r` uses seed `cfg.seed + r`.
pub fn run_completeness(
    cfg: &ScenarioConfig,
    engine: &EngineConfig,
    ratios: &[f64],
    sq_values: &[f64],
    algorithms: &[Algorithm],
    repeats: usize,
    workers: usize,
) -> Result<Vec<CompletenessRecord>> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    if sq_values.is_empty() || sq_values.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::InvalidArgument("sq values must lie in [0, 1]".into()));
    }
    let pool = pool(workers)?;
    let mut records = Vec::new();
    for &ratio in ratios {
        // served[sq][algorithm] summed over repeats
        let mut served = vec![vec![0.0f64; algorithms.len()]; sq_values.len()];
        for r in 0..repeats {
            let seeded = ScenarioConfig {
                seed: cfg.seed.wrapping_add(r as u64),
                ..cfg.clone()
            };
            let prepared = prepare(&seeded, engine, ratio)?;
            let jobs: Vec<(usize, &PreparedQuery)> = (0..algorithms.len())
                .flat_map(|a| prepared.iter().map(move |p| (a, p)))
                .collect();
            let energies: Vec<Result<f64>> = pool.install(|| {
                jobs.par_iter()
                    .map(|&(a, p)| energy_of(algorithms[a], p, engine))
                    .collect()
            });
            let n = prepared.len();
            for (job, energy) in jobs.iter().zip(energies) {
                let energy = energy?;
                for (s, &sq) in sq_values.iter().enumerate() {
                    if n > 0 && approx_le(sq * job.1.query.re, energy) {
                        served[s][job.0] += 1.0 / n as f64;
                    }
                }
            }
        }
        for (s, &sq) in sq_values.iter().enumerate() {
            for (a, &algorithm) in algorithms.iter().enumerate() {
                records.push(CompletenessRecord {
                    ratio,
                    sq: Some(sq),
                    algorithm,
                    completeness: (served[s][a] / repeats as f64).clamp(0.0, 1.0),
                    seed: cfg.seed,
                });
            }
        }
        for (a, &algorithm) in algorithms.iter().enumerate() {
            let mean = served.iter().map(|row| row[a]).sum::<f64>() / (sq_values.len() * repeats) as f64;
            records.push(CompletenessRecord {
                ratio,
                sq: None,
                algorithm,
                completeness: mean.clamp(0.0, 1.0),
                seed: cfg.seed,
            });
        }
    }
    Ok(records)
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p * (sorted.len() - 1) as f64).round() as usize;
    sorted[rank.min(sorted.len() - 1)]
}

/// Wall time of the composition call per (ratio, algorithm). Generation,
/// indexing and filtering are excluded. Runs single-threaded so timings are
/// not disturbed by other work.
pub fn run_scalability(
    cfg: &ScenarioConfig,
    engine: &EngineConfig,
    ratios: &[f64],
    algorithms: &[Algorithm],
) -> Result<Vec<RuntimeRecord>> {
    let mut records = Vec::new();
    for &ratio in ratios {
        let prepared = prepare(cfg, engine, ratio)?;
        for &algorithm in algorithms {
            let mut times = Vec::with_capacity(prepared.len());
            for p in &prepared {
                let started = Instant::now();
                let plan = compose(algorithm, &p.query, &p.candidates, &engine.compose)?;
                times.push(started.elapsed().as_secs_f64() * 1e6);
                std::hint::black_box(plan);
            }
            times.sort_by(f64::total_cmp);
            let mean = if times.is_empty() { 0.0 } else { times.iter().sum::<f64>() / times.len() as f64 };
            records.push(RuntimeRecord {
                ratio,
                algorithm,
                mean_us: mean,
                p50_us: percentile(&times, 0.5),
                p95_us: percentile(&times, 0.95),
                n_queries: times.len(),
            });
        }
    }
    Ok(records)
}

pub fn write_csv<T: Serialize>(w: impl Write, records: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return f64::NAN;
    }
    cov / (vx * vy).sqrt()
}
