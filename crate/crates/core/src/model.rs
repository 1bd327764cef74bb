//! Domain types shared by every stage of the composition pipeline.
//!
//! Units are fixed crate-wide: time in seconds since the scenario epoch,
//! energy in mAh, current in mA, distance in meters. Durations are turned
//! into hours only inside energy formulas.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for floating point comparisons.
pub const EPS: f64 = 1e-6;

pub const SECONDS_PER_HOUR: f64 = 3600.0;

fn tol(a: f64, b: f64) -> f64 {
    EPS * a.abs().max(b.abs()).max(1.0)
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol(a, b)
}

pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + tol(a, b)
}

/// Energy delivered over `seconds` at `intensity` after transmission and
/// consistency losses.
pub fn energy_over(seconds: f64, intensity: f64, tsr: f64, alpha: f64) -> f64 {
    seconds / SECONDS_PER_HOUR * intensity * tsr * alpha
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ServiceId(Arc<str>);

impl ServiceId {
    pub fn new(id: impl AsRef<str>) -> Self {
        Self(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ServiceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for ServiceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ServiceId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub st: f64,
    pub et: f64,
}

impl TimeInterval {
    pub fn new(st: f64, et: f64) -> Result<Self> {
        if !(st.is_finite() && et.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "interval bounds must be finite, got [{st}, {et}]"
            )));
        }
        if st >= et {
            return Err(Error::InvalidArgument(format!(
                "empty interval [{st}, {et}]"
            )));
        }
        Ok(Self { st, et })
    }

    pub fn duration_secs(&self) -> f64 {
        self.et - self.st
    }

    pub fn duration_hours(&self) -> f64 {
        self.duration_secs() / SECONDS_PER_HOUR
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.st <= other.st && other.et <= self.et
    }

    pub fn contains_time(&self, t: f64) -> bool {
        self.st <= t && t <= self.et
    }

    /// Open-interval overlap: touching endpoints do not overlap.
    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.st < other.et && other.st < self.et
    }

    /// Intersection with positive length, if any.
    pub fn intersect(&self, other: &TimeInterval) -> Option<TimeInterval> {
        let st = self.st.max(other.st);
        let et = self.et.min(other.et);
        (st < et).then_some(TimeInterval { st, et })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeoPoint {
    pub x: f64,
    pub y: f64,
}

impl GeoPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &GeoPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Provider usage pattern and its energy-usage-behaviour factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UsagePattern {
    Suspend,
    Casual,
    Regular,
}

impl UsagePattern {
    pub const ALL: [UsagePattern; 3] = [Self::Suspend, Self::Casual, Self::Regular];

    pub fn factor(self) -> f64 {
        match self {
            Self::Suspend => 1.0,
            Self::Casual => 0.75,
            Self::Regular => 0.5,
        }
    }

    pub fn from_factor(eub: f64) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.factor() == eub)
    }
}

/// Duration of a service that drains `ec` at `intensity`: `st + ec / I` hours.
pub fn service_end_time(st: f64, ec: f64, intensity: f64) -> Result<f64> {
    if !(ec > 0.0) || !(intensity > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "capacity and intensity must be positive (ec={ec}, intensity={intensity})"
        )));
    }
    Ok(st + ec / intensity * SECONDS_PER_HOUR)
}

/// Everything a provider advertises apart from the availability interval.
#[derive(Debug, Clone)]
pub struct ServiceTerms {
    pub eid: ServiceId,
    pub owner_id: String,
    pub loc: GeoPoint,
    pub st: f64,
    pub ec: f64,
    pub intensity: f64,
    pub tsr: f64,
    pub alpha: f64,
    pub eub: f64,
    pub pcl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyService {
    pub eid: ServiceId,
    pub owner_id: String,
    pub loc: GeoPoint,
    pub interval: TimeInterval,
    pub ec: f64,
    pub intensity: f64,
    pub tsr: f64,
    pub alpha: f64,
    pub dec: f64,
    pub eub: f64,
    pub pcl: f64,
}

impl EnergyService {
    /// Builds a service whose end time follows from draining `ec` at the
    /// advertised intensity.
    pub fn from_terms(terms: ServiceTerms) -> Result<Self> {
        let et = service_end_time(terms.st, terms.ec, terms.intensity)?;
        Self::assemble(terms, et)
    }

    /// Builds a service available until `until`. The capacity is re-capped to
    /// what the intensity can push through the interval; a capacity that runs
    /// out earlier shortens the interval instead.
    pub fn from_terms_until(mut terms: ServiceTerms, until: f64) -> Result<Self> {
        let drained = service_end_time(terms.st, terms.ec, terms.intensity)?;
        let et = until.min(drained);
        TimeInterval::new(terms.st, et)?;
        terms.ec = terms.intensity * (et - terms.st) / SECONDS_PER_HOUR;
        Self::assemble(terms, et)
    }

    fn assemble(t: ServiceTerms, et: f64) -> Result<Self> {
        let service = EnergyService {
            interval: TimeInterval::new(t.st, et)?,
            dec: t.alpha * t.ec * t.tsr,
            eid: t.eid,
            owner_id: t.owner_id,
            loc: t.loc,
            ec: t.ec,
            intensity: t.intensity,
            tsr: t.tsr,
            alpha: t.alpha,
            eub: t.eub,
            pcl: t.pcl,
        };
        validate_service(&service).map_err(|v| Error::InvalidArgument(join(&v)))?;
        Ok(service)
    }

    pub fn expected_dec(&self) -> f64 {
        self.alpha * self.ec * self.tsr
    }

    /// Effective delivery rate in mA after transmission and consistency losses.
    pub fn rate(&self) -> f64 {
        self.intensity * self.tsr * self.alpha
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite(&'static str),
    EmptyInterval,
    NonPositive(&'static str),
    OutOfUnitRange(&'static str),
    Negative(&'static str),
    InvalidEub(f64),
    StaleDec { stored: f64, expected: f64 },
    CapacityMismatch { ec: f64, drained: f64 },
    SocThreshold,
}

impl Violation {
    pub fn field(&self) -> &'static str {
        match self {
            Self::NonFinite(f)
            | Self::NonPositive(f)
            | Self::OutOfUnitRange(f)
            | Self::Negative(f) => f,
            Self::EmptyInterval => "interval",
            Self::InvalidEub(_) => "eub",
            Self::StaleDec { .. } => "dec",
            Self::CapacityMismatch { .. } => "ec",
            Self::SocThreshold => "soc",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFinite(field) => write!(f, "{field} is not finite"),
            Self::EmptyInterval => f.write_str("empty interval"),
            Self::NonPositive(field) => write!(f, "{field} must be positive"),
            Self::OutOfUnitRange(field) => write!(f, "{field} must lie in [0, 1]"),
            Self::Negative(field) => write!(f, "{field} must not be negative"),
            Self::InvalidEub(v) => write!(f, "eub {v} is not one of 1.0, 0.75, 0.5"),
            Self::StaleDec { stored, expected } => {
                write!(f, "stale DEC: stored {stored}, alpha*ec*tsr = {expected}")
            }
            Self::CapacityMismatch { ec, drained } => write!(
                f,
                "capacity {ec} does not match intensity * duration = {drained}"
            ),
            Self::SocThreshold => f.write_str("soc_zero must be >= 0 and below soc_initial"),
        }
    }
}

fn unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

/// Every violated invariant of `s`; `Ok` iff none.
pub fn validate_service(s: &EnergyService) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let numbers = [
        ("interval", s.interval.st),
        ("interval", s.interval.et),
        ("ec", s.ec),
        ("intensity", s.intensity),
        ("tsr", s.tsr),
        ("alpha", s.alpha),
        ("dec", s.dec),
        ("eub", s.eub),
        ("pcl", s.pcl),
    ];
    for (field, v) in numbers {
        if !v.is_finite() {
            out.push(Violation::NonFinite(field));
        }
    }
    if !s.loc.is_finite() {
        out.push(Violation::NonFinite("loc"));
    }
    if !out.is_empty() {
        return Err(out);
    }
    if s.interval.st >= s.interval.et {
        out.push(Violation::EmptyInterval);
    }
    if s.ec <= 0.0 {
        out.push(Violation::NonPositive("ec"));
    }
    if s.intensity <= 0.0 {
        out.push(Violation::NonPositive("intensity"));
    }
    if !unit(s.tsr) {
        out.push(Violation::OutOfUnitRange("tsr"));
    }
    if !unit(s.alpha) {
        out.push(Violation::OutOfUnitRange("alpha"));
    }
    if UsagePattern::from_factor(s.eub).is_none() {
        out.push(Violation::InvalidEub(s.eub));
    }
    if s.pcl < 0.0 {
        out.push(Violation::Negative("pcl"));
    }
    let expected = s.expected_dec();
    if !approx_eq(s.dec, expected) {
        out.push(Violation::StaleDec {
            stored: s.dec,
            expected,
        });
    }
    if s.interval.st < s.interval.et && s.intensity > 0.0 {
        let drained = s.intensity * s.interval.duration_hours();
        if !approx_eq(drained, s.ec) {
            out.push(Violation::CapacityMismatch { ec: s.ec, drained });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Linear state-of-charge model of the consuming device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocSeries {
    pub soc_initial: f64,
    pub soc_zero: f64,
    pub drain_rate: f64,
}

impl SocSeries {
    /// State of charge at time `t` for a query launched at `launched`.
    pub fn soc_at(&self, launched: f64, t: f64) -> f64 {
        (self.soc_initial - self.drain_rate * (t - launched) / SECONDS_PER_HOUR).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyQuery {
    pub qid: String,
    pub t: f64,
    pub l: GeoPoint,
    pub re: f64,
    pub i_max: f64,
    pub d: f64,
    pub cl: f64,
    pub soc: SocSeries,
}

impl EnergyQuery {
    pub fn window(&self) -> TimeInterval {
        TimeInterval {
            st: self.t,
            et: self.t + self.d,
        }
    }

    pub fn soc_at(&self, t: f64) -> f64 {
        self.soc.soc_at(self.t, t)
    }
}

pub fn validate_query(q: &EnergyQuery) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let numbers = [
        ("t", q.t),
        ("re", q.re),
        ("i_max", q.i_max),
        ("d", q.d),
        ("cl", q.cl),
        ("soc", q.soc.soc_initial),
        ("soc", q.soc.soc_zero),
        ("soc", q.soc.drain_rate),
    ];
    for (field, v) in numbers {
        if !v.is_finite() {
            out.push(Violation::NonFinite(field));
        }
    }
    if !q.l.is_finite() {
        out.push(Violation::NonFinite("l"));
    }
    if !out.is_empty() {
        return Err(out);
    }
    for (field, v) in [("re", q.re), ("i_max", q.i_max), ("d", q.d)] {
        if v <= 0.0 {
            out.push(Violation::NonPositive(field));
        }
    }
    if q.cl < 0.0 {
        out.push(Violation::Negative("cl"));
    }
    if q.soc.drain_rate < 0.0 {
        out.push(Violation::Negative("soc"));
    }
    if q.soc.soc_zero < 0.0 || q.soc.soc_zero >= q.soc.soc_initial {
        out.push(Violation::SocThreshold);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// A slice of a service restricted to a sub-interval, with its deliverable
/// energy recomputed for that slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialService {
    pub parent_eid: ServiceId,
    pub interval: TimeInterval,
    pub intensity: f64,
    pub tsr: f64,
    pub alpha: f64,
    pub dec: f64,
}

impl PartialService {
    /// The whole service, unclipped.
    pub fn whole(s: &EnergyService) -> Self {
        Self {
            parent_eid: s.eid.clone(),
            interval: s.interval,
            intensity: s.intensity,
            tsr: s.tsr,
            alpha: s.alpha,
            dec: s.dec,
        }
    }

    /// Restricts to `interval`, recomputing the deliverable energy.
    pub fn slice(&self, interval: TimeInterval) -> Self {
        Self {
            parent_eid: self.parent_eid.clone(),
            interval,
            intensity: self.intensity,
            tsr: self.tsr,
            alpha: self.alpha,
            dec: energy_over(interval.duration_secs(), self.intensity, self.tsr, self.alpha),
        }
    }

    pub fn rate(&self) -> f64 {
        self.intensity * self.tsr * self.alpha
    }

    pub fn expected_dec(&self) -> f64 {
        energy_over(
            self.interval.duration_secs(),
            self.intensity,
            self.tsr,
            self.alpha,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanChunk {
    pub interval: TimeInterval,
    pub selected: Vec<PartialService>,
}

impl PlanChunk {
    pub fn energy(&self) -> f64 {
        self.selected.iter().map(|s| s.dec).sum()
    }

    pub fn load(&self) -> f64 {
        self.selected.iter().map(|s| s.intensity).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionPlan {
    pub query_id: String,
    pub algorithm_tag: String,
    pub total_energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
    pub chunks: Vec<PlanChunk>,
}

impl CompositionPlan {
    pub fn new(query_id: &str, algorithm_tag: &str, chunks: Vec<PlanChunk>) -> Self {
        Self {
            query_id: query_id.to_owned(),
            algorithm_tag: algorithm_tag.to_owned(),
            total_energy: chunks.iter().map(PlanChunk::energy).sum(),
            wall_time_us: None,
            chunks,
        }
    }

    pub fn with_wall_time(mut self, elapsed: std::time::Duration) -> Self {
        self.wall_time_us = Some(elapsed.as_micros() as u64);
        self
    }

    /// Distinct parent services used anywhere in the plan, in id order.
    pub fn services(&self) -> Vec<ServiceId> {
        let mut ids: Vec<_> = self
            .chunks
            .iter()
            .flat_map(|c| c.selected.iter().map(|s| s.parent_eid.clone()))
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }
}
