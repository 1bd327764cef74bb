//! Seeded synthetic scenarios and their JSON/CSV interchange.
//!
//! Every service and query draws from its own ChaCha8 stream
//! (`kind << 48 | index`), so growing one collection never changes the other
//! and the first `n` services of a larger scenario equal those of a smaller
//! one with the same seed.

use std::f64::consts::TAU;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{
    validate_query, validate_service, EnergyQuery, EnergyService, GeoPoint, PartialService,
    ServiceTerms, SocSeries, TimeInterval, UsagePattern, SECONDS_PER_HOUR,
};
use crate::qos::{
    approximate_entropy, coordination_loss, provision_consistency, CoordinationCosts, TsrParams,
    UsageTrace, DEFAULT_APEN_M, DEFAULT_APEN_R,
};

const STREAM_SERVICE: u64 = 1;
const STREAM_QUERY: u64 = 2;
const TRACE_SAMPLES: usize = 48;

/// Closed range `[min, max]`, written as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn midpoint(&self) -> f64 {
        (self.min + self.max) / 2.0
    }

    fn lower_half(&self) -> Self {
        Self::new(self.min, self.midpoint())
    }

    fn upper_half(&self) -> Self {
        Self::new(self.midpoint(), self.max)
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }

    fn sample_int(&self, rng: &mut impl Rng) -> f64 {
        let (lo, hi) = (self.min.ceil() as i64, self.max.floor() as i64);
        rng.random_range(lo..=hi.max(lo)) as f64
    }
}

impl From<[f64; 2]> for Range {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.min, r.max]
    }
}

/// Service length and query length class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaScenario {
    ShortSvcShortQ,
    ShortSvcLongQ,
    LongSvcShortQ,
    LongSvcLongQ,
    #[default]
    Mixed,
}

impl std::str::FromStr for MetaScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_owned())).map_err(|_| {
            Error::InvalidArgument(format!(
                "unknown meta scenario `{s}` (valid: short_svc_short_q, short_svc_long_q, \
                 long_svc_short_q, long_svc_long_q, mixed)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub n_services: usize,
    pub n_queries: usize,
    pub seed: u64,
    pub service_duration: Range,
    pub query_duration: Range,
    pub provided_energy: Range,
    pub required_energy: Range,
    pub service_intensity: Range,
    pub query_intensity_cap: Range,
    pub area_radius: f64,
    pub meta_scenario: MetaScenario,
    /// Window of check-in times, seconds since midnight.
    pub business_hours: Range,
    /// Advertised transmission success rate of generated services.
    pub tsr: Range,
    /// Snap generated times to this grid (seconds) when set.
    pub time_grid_secs: Option<f64>,
    /// How strongly a query's required energy follows its duration: 0 draws
    /// it independently, 1 places it at the same relative position in
    /// `required_energy` as the duration in `query_duration`.
    pub energy_duration_coupling: f64,
    pub tsr_params: TsrParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_services: 100,
            n_queries: 100,
            seed: 1,
            service_duration: Range::new(600.0, 3600.0),
            query_duration: Range::new(300.0, 7200.0),
            provided_energy: Range::new(50.0, 1000.0),
            required_energy: Range::new(100.0, 800.0),
            service_intensity: Range::new(500.0, 1500.0),
            query_intensity_cap: Range::new(1000.0, 2500.0),
            area_radius: 10.0,
            meta_scenario: MetaScenario::Mixed,
            business_hours: Range::new(0.0, 24.0 * 3600.0),
            tsr: Range::new(0.6, 0.95),
            time_grid_secs: None,
            energy_duration_coupling: 0.8,
            tsr_params: TsrParams::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("service_duration", self.service_duration),
            ("query_duration", self.query_duration),
            ("provided_energy", self.provided_energy),
            ("required_energy", self.required_energy),
            ("service_intensity", self.service_intensity),
            ("query_intensity_cap", self.query_intensity_cap),
            ("tsr", self.tsr),
        ];
        for (name, r) in ranges {
            if !(r.min > 0.0 && r.min <= r.max && r.max.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a positive range, got [{}, {}]",
                    r.min, r.max
                )));
            }
        }
        if self.tsr.max > 1.0 {
            return Err(Error::InvalidArgument("tsr range must lie in (0, 1]".into()));
        }
        for (name, r) in [("service_intensity", self.service_intensity), ("query_intensity_cap", self.query_intensity_cap)] {
            if r.min.ceil() > r.max.floor() {
                return Err(Error::InvalidArgument(format!("{name} contains no whole mA value")));
            }
        }
        if !(self.business_hours.min <= self.business_hours.max) {
            return Err(Error::InvalidArgument("business_hours is empty".into()));
        }
        if !(self.area_radius >= 0.0) {
            return Err(Error::InvalidArgument("area_radius must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.energy_duration_coupling) {
            return Err(Error::InvalidArgument("energy_duration_coupling must lie in [0, 1]".into()));
        }
        if let Some(g) = self.time_grid_secs {
            if !(g > 0.0) {
                return Err(Error::InvalidArgument("time_grid_secs must be positive".into()));
            }
        }
        self.tsr_params.validate()
    }

    /// Ranges after applying the meta scenario: short classes use the lower
    /// half of a range, long classes the upper half.
    pub fn resolved(&self) -> ScenarioConfig {
        let mut c = self.clone();
        let (short_svc, short_q) = match self.meta_scenario {
            MetaScenario::Mixed => return c,
            MetaScenario::ShortSvcShortQ => (true, true),
            MetaScenario::ShortSvcLongQ => (true, false),
            MetaScenario::LongSvcShortQ => (false, true),
            MetaScenario::LongSvcLongQ => (false, false),
        };
        let pick = |r: Range, short: bool| if short { r.lower_half() } else { r.upper_half() };
        c.service_duration = pick(c.service_duration, short_svc);
        c.provided_energy = pick(c.provided_energy, short_svc);
        c.query_duration = pick(c.query_duration, short_q);
        c.required_energy = pick(c.required_energy, short_q);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub config: ScenarioConfig,
    pub services: Vec<EnergyService>,
    pub queries: Vec<EnergyQuery>,
}

fn stream(seed: u64, kind: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind << 48 | index as u64);
    rng
}

fn disc_point(radius: f64, rng: &mut impl Rng) -> GeoPoint {
    let r = radius * rng.random::<f64>().sqrt();
    let a = TAU * rng.random::<f64>();
    GeoPoint::new(r * a.cos(), r * a.sin())
}

fn snap(t: f64, grid: Option<f64>) -> f64 {
    match grid {
        Some(g) => (t / g).round() * g,
        None => t,
    }
}

fn snap_len(len: f64, grid: Option<f64>) -> f64 {
    match grid {
        Some(g) => ((len / g).floor() * g).max(g),
        None => len,
    }
}

/// Provision consistency of a provider from a synthetic half-hourly charge
/// trace: a draining level plus uniform noise.
fn synthetic_alpha(rng: &mut impl Rng, eub: f64) -> f64 {
    let level = rng.random_range(1000.0..3000.0);
    let slope = rng.random_range(0.0..20.0);
    let noise = rng.random_range(0.0..60.0);
    let values: Vec<f64> = (0..TRACE_SAMPLES)
        .map(|i| level - slope * i as f64 + noise * rng.random_range(-1.0..=1.0))
        .collect();
    let trace = UsageTrace::from_values(0.0, 1800.0, &values).expect("trace is uniformly spaced");
    let kolent = approximate_entropy(&trace, DEFAULT_APEN_M, DEFAULT_APEN_R).unwrap_or(0.0);
    provision_consistency(kolent, eub)
}

fn small_costs(rng: &mut impl Rng) -> CoordinationCosts {
    CoordinationCosts {
        c_cloud: rng.random_range(0.0..0.05),
        f_cloud: rng.random_range(0.0..10.0),
        c_peer: rng.random_range(0.0..0.02),
        f_peer: rng.random_range(0.0..5.0),
    }
}

fn generate_service(cfg: &ScenarioConfig, i: usize) -> Result<EnergyService> {
    let mut rng = stream(cfg.seed, STREAM_SERVICE, i);
    let grid = cfg.time_grid_secs;
    let st = snap(cfg.business_hours.sample(&mut rng), grid);
    let duration = cfg.service_duration.sample(&mut rng);
    let ec = cfg.provided_energy.sample(&mut rng);
    let intensity = cfg.service_intensity.sample_int(&mut rng);
    let tsr = cfg.tsr.sample(&mut rng);
    let loc = disc_point(cfg.area_radius, &mut rng);
    let eub = UsagePattern::ALL[rng.random_range(0..3)].factor();
    let alpha = synthetic_alpha(&mut rng, eub);
    let pcl = coordination_loss(&small_costs(&mut rng));
    // draining ec at the drawn intensity may end the service early
    let drained = ec / intensity * SECONDS_PER_HOUR;
    let length = snap_len(duration.min(drained), grid);
    EnergyService::from_terms_until(
        ServiceTerms {
            eid: format!("s{i}").as_str().into(),
            owner_id: format!("p{i}"),
            loc,
            st,
            ec: ec.max(intensity * length / SECONDS_PER_HOUR),
            intensity,
            tsr,
            alpha,
            eub,
            pcl,
        },
        st + length,
    )
}

fn generate_query(cfg: &ScenarioConfig, j: usize) -> EnergyQuery {
    let mut rng = stream(cfg.seed, STREAM_QUERY, j);
    let grid = cfg.time_grid_secs;
    let t = snap(cfg.business_hours.sample(&mut rng), grid);
    let d = snap_len(cfg.query_duration.sample(&mut rng), grid);
    // longer requests ask for more energy, to a degree set by the coupling
    let k = cfg.energy_duration_coupling;
    let span = cfg.query_duration.max - cfg.query_duration.min;
    let rel = if span > 0.0 { ((d - cfg.query_duration.min) / span).clamp(0.0, 1.0) } else { 0.5 };
    let pos = k * rel + (1.0 - k) * rng.random::<f64>();
    let re = cfg.required_energy.min + pos * (cfg.required_energy.max - cfg.required_energy.min);
    let i_max = cfg.query_intensity_cap.sample_int(&mut rng);
    let l = disc_point(cfg.area_radius, &mut rng);
    let cl = coordination_loss(&small_costs(&mut rng));
    let soc_initial = rng.random_range(300.0..3000.0);
    let drain_rate = rng.random_range(50.0..400.0);
    EnergyQuery {
        qid: format!("q{j}"),
        t,
        l,
        re,
        i_max,
        d,
        cl,
        soc: SocSeries {
            soc_initial,
            soc_zero: 0.05 * soc_initial,
            drain_rate,
        },
    }
}

pub fn generate_scenario(cfg: &ScenarioConfig) -> Result<Scenario> {
    cfg.validate()?;
    let resolved = cfg.resolved();
    let services = (0..cfg.n_services)
        .map(|i| generate_service(&resolved, i))
        .collect::<Result<Vec<_>>>()?;
    let queries = (0..cfg.n_queries).map(|j| generate_query(&resolved, j)).collect();
    Ok(Scenario {
        config: cfg.clone(),
        services,
        queries,
    })
}

/// Shape of the small self-contained instances used for cross-checking
/// composers: candidates already clipped to a window starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub candidates: Range,
    pub window_secs: f64,
    /// Candidate endpoints snap to this grid when set.
    pub grid_secs: Option<f64>,
    pub intensity: Range,
    pub i_max: Range,
    pub tsr: Range,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            candidates: Range::new(1.0, 10.0),
            window_secs: 480.0,
            grid_secs: Some(60.0),
            intensity: Range::new(500.0, 1500.0),
            i_max: Range::new(1000.0, 2500.0),
            tsr: Range::new(0.6, 0.95),
        }
    }
}

/// A query over `[0, window]` with zero coordination loss and a list of
/// integer-mA candidates.
pub fn random_instance(spec: &InstanceSpec, rng: &mut impl Rng) -> (EnergyQuery, Vec<PartialService>) {
    let n = spec.candidates.sample_int(rng) as usize;
    let w = spec.window_secs;
    let mut candidates = Vec::with_capacity(n);
    for i in 0..n {
        let (mut a, mut b) = (rng.random_range(0.0..w), rng.random_range(0.0..w));
        if let Some(g) = spec.grid_secs {
            a = (a / g).round() * g;
            b = (b / g).round() * g;
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if a == b {
            match spec.grid_secs {
                Some(g) if b + g <= w => b += g,
                Some(g) => a -= g,
                None => b = (a + 1.0).min(w),
            }
        }
        let p = PartialService {
            parent_eid: format!("c{i:02}").as_str().into(),
            interval: TimeInterval { st: a.max(0.0), et: b },
            intensity: spec.intensity.sample_int(rng),
            tsr: spec.tsr.sample(rng),
            alpha: 1.0,
            dec: 0.0,
        };
        candidates.push(p.slice(p.interval));
    }
    let q = EnergyQuery {
        qid: "inst".into(),
        t: 0.0,
        l: GeoPoint::default(),
        re: rng.random_range(100.0..800.0),
        i_max: spec.i_max.sample_int(rng),
        d: w,
        cl: 0.0,
        soc: SocSeries {
            soc_initial: 1000.0,
            soc_zero: 50.0,
            drain_rate: 100.0,
        },
    };
    (q, candidates)
}

fn field_of(message: &str) -> String {
    let mut parts = message.split('`');
    parts.next();
    parts.next().unwrap_or("?").to_owned()
}

fn record<T: serde::de::DeserializeOwned>(
    collection: &'static str,
    index: usize,
    v: Value,
) -> Result<T> {
    serde_json::from_value(v).map_err(|e| {
        let message = e.to_string();
        Error::Record {
            collection,
            index,
            field: field_of(&message),
            message,
        }
    })
}

/// Every problem found in a scenario document, in file order.
#[derive(Debug, Default)]
pub struct ScenarioReport {
    pub scenario: Option<Scenario>,
    pub problems: Vec<Error>,
}

fn array(doc: &mut Value, key: &'static str) -> Result<Vec<Value>> {
    match doc.get_mut(key).map(Value::take) {
        Some(Value::Array(items)) => Ok(items),
        Some(_) => Err(Error::Record {
            collection: key,
            index: 0,
            field: key.into(),
            message: "expected an array".into(),
        }),
        None => Err(Error::Record {
            collection: key,
            index: 0,
            field: key.into(),
            message: format!("missing field `{key}`"),
        }),
    }
}

/// Parses and validates a scenario document, collecting every record-level
/// problem instead of stopping at the first.
pub fn check_scenario(text: &str) -> Result<ScenarioReport> {
    let mut doc: Value = serde_json::from_str(text)?;
    let config: ScenarioConfig = match doc.get_mut("config").map(Value::take) {
        Some(v) => record("config", 0, v)?,
        None => ScenarioConfig::default(),
    };
    let mut problems = Vec::new();
    let mut services = Vec::new();
    for (i, v) in array(&mut doc, "services")?.into_iter().enumerate() {
        match record::<EnergyService>("services", i, v) {
            Ok(s) => match validate_service(&s) {
                Ok(()) => services.push(s),
                Err(vs) => problems.extend(vs.into_iter().map(|v| Error::Record {
                    collection: "services",
                    index: i,
                    field: v.field().into(),
                    message: v.to_string(),
                })),
            },
            Err(e) => problems.push(e),
        }
    }
    let mut seen = std::collections::HashSet::new();
    for (i, s) in services.iter().enumerate() {
        if !seen.insert(s.eid.clone()) {
            problems.push(Error::Record {
                collection: "services",
                index: i,
                field: "eid".into(),
                message: format!("duplicate service id `{}`", s.eid),
            });
        }
    }
    let mut queries = Vec::new();
    for (i, v) in array(&mut doc, "queries")?.into_iter().enumerate() {
        match record::<EnergyQuery>("queries", i, v) {
            Ok(q) => match validate_query(&q) {
                Ok(()) => queries.push(q),
                Err(vs) => problems.extend(vs.into_iter().map(|v| Error::Record {
                    collection: "queries",
                    index: i,
                    field: v.field().into(),
                    message: v.to_string(),
                })),
            },
            Err(e) => problems.push(e),
        }
    }
    let scenario = problems.is_empty().then_some(Scenario {
        config,
        services,
        queries,
    });
    Ok(ScenarioReport { scenario, problems })
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut report = check_scenario(text)?;
    match report.scenario.take() {
        Some(s) => Ok(s),
        None => Err(report.problems.remove(0)),
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let mut text = String::new();
    fs::File::open(path)?.read_to_string(&mut text)?;
    parse_scenario(&text)
}

pub fn scenario_to_json(s: &Scenario) -> Result<String> {
    Ok(serde_json::to_string_pretty(s)?)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(scenario_to_json(s)?.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct ServiceRow {
    eid: String,
    owner_id: String,
    x: f64,
    y: f64,
    st: f64,
    et: f64,
    ec: f64,
    intensity: f64,
    tsr: f64,
    alpha: f64,
    dec: f64,
    eub: f64,
    pcl: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct QueryRow {
    qid: String,
    t: f64,
    x: f64,
    y: f64,
    re: f64,
    i_max: f64,
    d: f64,
    cl: f64,
    soc_initial: f64,
    soc_zero: f64,
    drain_rate: f64,
}

pub fn write_services_csv(w: impl Write, services: &[EnergyService]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in services {
        out.serialize(ServiceRow {
            eid: s.eid.to_string(),
            owner_id: s.owner_id.clone(),
            x: s.loc.x,
            y: s.loc.y,
            st: s.interval.st,
            et: s.interval.et,
            ec: s.ec,
            intensity: s.intensity,
            tsr: s.tsr,
            alpha: s.alpha,
            dec: s.dec,
            eub: s.eub,
            pcl: s.pcl,
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_queries_csv(w: impl Write, queries: &[EnergyQuery]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for q in queries {
        out.serialize(QueryRow {
            qid: q.qid.clone(),
            t: q.t,
            x: q.l.x,
            y: q.l.y,
            re: q.re,
            i_max: q.i_max,
            d: q.d,
            cl: q.cl,
            soc_initial: q.soc.soc_initial,
            soc_zero: q.soc.soc_zero,
            drain_rate: q.soc.drain_rate,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Reads services from the CSV layout written by [`write_services_csv`].
pub fn read_services_csv(r: impl Read) -> Result<Vec<EnergyService>> {
    let mut out = Vec::new();
    for (i, row) in csv::Reader::from_reader(r).deserialize::<ServiceRow>().enumerate() {
        let row = row?;
        let s = EnergyService {
            eid: row.eid.as_str().into(),
            owner_id: row.owner_id,
            loc: GeoPoint::new(row.x, row.y),
            interval: TimeInterval { st: row.st, et: row.et },
            ec: row.ec,
            intensity: row.intensity,
            tsr: row.tsr,
            alpha: row.alpha,
            dec: row.dec,
            eub: row.eub,
            pcl: row.pcl,
        };
        if let Err(vs) = validate_service(&s) {
            return Err(Error::Record {
                collection: "services",
                index: i,
                field: vs[0].field().into(),
                message: vs[0].to_string(),
            });
        }
        out.push(s);
    }
    Ok(out)
}

/// Reads queries from the CSV layout written by [`write_queries_csv`].
pub fn read_queries_csv(r: impl Read) -> Result<Vec<EnergyQuery>> {
    let mut out = Vec::new();
    for (i, row) in csv::Reader::from_reader(r).deserialize::<QueryRow>().enumerate() {
        let row = row?;
        let q = EnergyQuery {
            qid: row.qid,
            t: row.t,
            l: GeoPoint::new(row.x, row.y),
            re: row.re,
            i_max: row.i_max,
            d: row.d,
            cl: row.cl,
            soc: SocSeries {
                soc_initial: row.soc_initial,
                soc_zero: row.soc_zero,
                drain_rate: row.drain_rate,
            },
        };
        if let Err(vs) = validate_query(&q) {
            return Err(Error::Record {
                collection: "queries",
                index: i,
                field: vs[0].field().into(),
                message: vs[0].to_string(),
            });
        }
        out.push(q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_seed_is_reproducible() {
        let cfg = ScenarioConfig::default();
        let a = scenario_to_json(&generate_scenario(&cfg).unwrap()).unwrap();
        let b = scenario_to_json(&generate_scenario(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn more_queries_leave_services_alone() {
        let small = generate_scenario(&ScenarioConfig { n_queries: 20, ..Default::default() }).unwrap();
        let cfg = ScenarioConfig {
            n_queries: 50,
            n_services: 150,
            ..Default::default()
        };
        let big = generate_scenario(&cfg).unwrap();
        assert_eq!(small.services[..], big.services[..100]);
        assert_eq!(small.queries[..], big.queries[..20]);
    }

    #[test]
    fn no_services_still_queries() {
        let cfg = ScenarioConfig {
            n_services: 0,
            ..Default::default()
        };
        let s = generate_scenario(&cfg).unwrap();
        assert!(s.services.is_empty());
        assert_eq!(s.queries.len(), 100);
    }

    #[test]
    fn generated_entities_validate() {
        let s = generate_scenario(&ScenarioConfig {
            n_services: 500,
            ..Default::default()
        })
        .unwrap();
        for x in &s.services {
            validate_service(x).unwrap();
            assert!(x.intensity.fract() == 0.0);
            assert!(x.interval.duration_secs() <= 3600.0 + 1e-9);
        }
        for q in &s.queries {
            validate_query(q).unwrap();
            assert!(q.l.x.hypot(q.l.y) <= 10.0);
        }
    }

    #[test]
    fn grid_snaps_times() {
        let s = generate_scenario(&ScenarioConfig {
            time_grid_secs: Some(60.0),
            ..Default::default()
        })
        .unwrap();
        for x in &s.services {
            assert_eq!(x.interval.st % 60.0, 0.0);
            assert_eq!(x.interval.et % 60.0, 0.0);
        }
    }

    #[test]
    fn meta_scenarios_narrow_ranges() {
        let cfg = ScenarioConfig {
            meta_scenario: MetaScenario::ShortSvcLongQ,
            ..Default::default()
        }
        .resolved();
        assert_eq!(cfg.service_duration, Range::new(600.0, 2100.0));
        assert_eq!(cfg.query_duration, Range::new(3750.0, 7200.0));
        assert_eq!("long_svc_short_q".parse::<MetaScenario>().unwrap(), MetaScenario::LongSvcShortQ);
    }

    #[test]
    fn random_instances_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (q, c) = random_instance(&InstanceSpec::default(), &mut rng);
            assert!(!c.is_empty() && c.len() <= 10);
            for p in &c {
                assert!(q.window().contains(&p.interval));
                assert!(p.interval.st < p.interval.et);
                assert_eq!(p.interval.st % 60.0, 0.0);
            }
        }
    }
}
