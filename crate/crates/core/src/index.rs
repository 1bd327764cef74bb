//! Spatio-temporal indexing of services as (x, y, t) boxes and the candidate
//! selection that feeds every composer.
//!
//! The tree is a plain Guttman R-tree with quadratic split. A service is a
//! box that is a point in space and spans its availability interval in time.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{EnergyQuery, EnergyService, PartialService, ServiceId};
use crate::qos::{compute_tsr, TsrParams};

pub const DEFAULT_FANOUT: usize = 8;
pub const DEFAULT_ESD_METERS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl StBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Result<Self> {
        if (0..3).any(|i| !(min[i] <= max[i])) {
            return Err(Error::InvalidArgument(format!(
                "box min {min:?} exceeds max {max:?}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn of_service(s: &EnergyService) -> Self {
        Self {
            min: [s.loc.x, s.loc.y, s.interval.st],
            max: [s.loc.x, s.loc.y, s.interval.et],
        }
    }

    pub fn intersects(&self, other: &StBox) -> bool {
        (0..3).all(|i| self.min[i] <= other.max[i] && other.min[i] <= self.max[i])
    }

    fn union(&self, other: &StBox) -> StBox {
        let mut out = *self;
        for i in 0..3 {
            out.min[i] = out.min[i].min(other.min[i]);
            out.max[i] = out.max[i].max(other.max[i]);
        }
        out
    }

    // Point-like boxes have zero volume, so sizes are measured on padded
    // extents. Only the tree shape depends on this.
    fn size(&self) -> f64 {
        (0..3).map(|i| self.max[i] - self.min[i] + 1.0).product()
    }

    fn enlargement(&self, other: &StBox) -> f64 {
        self.union(other).size() - self.size()
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Vec<(StBox, usize)>),
    Inner(Vec<(StBox, Node)>),
}

impl Node {
    fn bounds(&self) -> Option<StBox> {
        let boxes: Vec<StBox> = match self {
            Node::Leaf(e) => e.iter().map(|x| x.0).collect(),
            Node::Inner(e) => e.iter().map(|x| x.0).collect(),
        };
        boxes.into_iter().reduce(|a, b| a.union(&b))
    }
}

/// Immutable after [`build_index`]; queries take `&self`.
#[derive(Debug, Clone)]
pub struct StIndex {
    services: Vec<EnergyService>,
    by_id: HashMap<ServiceId, usize>,
    root: Node,
    fanout: usize,
}

pub fn build_index(services: &[EnergyService]) -> Result<StIndex> {
    StIndex::with_fanout(services, DEFAULT_FANOUT)
}

impl StIndex {
    pub fn with_fanout(services: &[EnergyService], fanout: usize) -> Result<Self> {
        if fanout < 4 {
            return Err(Error::InvalidArgument("fan-out must be at least 4".into()));
        }
        let mut by_id = HashMap::with_capacity(services.len());
        for (i, s) in services.iter().enumerate() {
            if by_id.insert(s.eid.clone(), i).is_some() {
                return Err(Error::DuplicateService(s.eid.to_string()));
            }
        }
        let mut index = Self {
            services: services.to_vec(),
            by_id,
            root: Node::Leaf(Vec::new()),
            fanout,
        };
        for (i, s) in services.iter().enumerate() {
            index.insert(StBox::of_service(s), i);
        }
        Ok(index)
    }

    pub fn len(&self) -> usize {
        self.services.len()
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }

    pub fn services(&self) -> &[EnergyService] {
        &self.services
    }

    pub fn get(&self, i: usize) -> &EnergyService {
        &self.services[i]
    }

    pub fn find(&self, eid: &ServiceId) -> Option<&EnergyService> {
        self.by_id.get(eid).map(|&i| &self.services[i])
    }

    fn insert(&mut self, b: StBox, item: usize) {
        let fanout = self.fanout;
        if let Some((left, right)) = insert_into(&mut self.root, b, item, fanout) {
            self.root = Node::Inner(vec![left, right]);
        }
    }

    /// Positions (into [`StIndex::services`]) of every service whose box
    /// intersects `query`, ascending.
    pub fn query(&self, query: &StBox) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            match node {
                Node::Leaf(entries) => out.extend(
                    entries
                        .iter()
                        .filter(|(b, _)| b.intersects(query))
                        .map(|(_, i)| *i),
                ),
                Node::Inner(children) => stack.extend(
                    children
                        .iter()
                        .filter(|(b, _)| b.intersects(query))
                        .map(|(_, n)| n),
                ),
            }
        }
        out.sort_unstable();
        out
    }

    pub fn depth(&self) -> usize {
        let mut d = 1;
        let mut node = &self.root;
        while let Node::Inner(children) = node {
            d += 1;
            node = &children[0].1;
        }
        d
    }
}

fn choose_subtree(children: &[(StBox, Node)], b: &StBox) -> usize {
    let mut best = 0;
    let mut best_key = (f64::INFINITY, f64::INFINITY);
    for (i, (cb, _)) in children.iter().enumerate() {
        let key = (cb.enlargement(b), cb.size());
        if key < best_key {
            best_key = key;
            best = i;
        }
    }
    best
}

/// Inserts and returns the two halves when `node` overflowed and split.
fn insert_into(
    node: &mut Node,
    b: StBox,
    item: usize,
    fanout: usize,
) -> Option<((StBox, Node), (StBox, Node))> {
    match node {
        Node::Leaf(entries) => {
            entries.push((b, item));
            if entries.len() > fanout {
                let (l, r) = quadratic_split(std::mem::take(entries), fanout);
                return Some(wrap(Node::Leaf(l), Node::Leaf(r)));
            }
            None
        }
        Node::Inner(children) => {
            let at = choose_subtree(children, &b);
            let split = insert_into(&mut children[at].1, b, item, fanout);
            match split {
                Some((left, right)) => {
                    children[at] = left;
                    children.push(right);
                }
                None => children[at].0 = children[at].0.union(&b),
            }
            if children.len() > fanout {
                let (l, r) = quadratic_split(std::mem::take(children), fanout);
                return Some(wrap(Node::Inner(l), Node::Inner(r)));
            }
            None
        }
    }
}

fn wrap(l: Node, r: Node) -> ((StBox, Node), (StBox, Node)) {
    let lb = l.bounds().expect("split halves are non-empty");
    let rb = r.bounds().expect("split halves are non-empty");
    ((lb, l), (rb, r))
}

trait Boxed {
    fn bbox(&self) -> StBox;
}

impl Boxed for (StBox, usize) {
    fn bbox(&self) -> StBox {
        self.0
    }
}

impl Boxed for (StBox, Node) {
    fn bbox(&self) -> StBox {
        self.0
    }
}

fn quadratic_split<T: Boxed>(mut entries: Vec<T>, fanout: usize) -> (Vec<T>, Vec<T>) {
    let min_fill = (fanout * 2 / 5).max(1);
    // pick the pair wasting the most space as seeds
    let (mut s1, mut s2, mut worst) = (0, 1, f64::NEG_INFINITY);
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let (a, b) = (entries[i].bbox(), entries[j].bbox());
            let waste = a.union(&b).size() - a.size() - b.size();
            if waste > worst {
                worst = waste;
                s1 = i;
                s2 = j;
            }
        }
    }
    let second = entries.swap_remove(s2);
    let first = entries.swap_remove(s1);
    let (mut b1, mut b2) = (first.bbox(), second.bbox());
    let (mut g1, mut g2) = (vec![first], vec![second]);

    while !entries.is_empty() {
        let remaining = entries.len();
        if g1.len() + remaining == min_fill {
            g1.append(&mut entries);
            break;
        }
        if g2.len() + remaining == min_fill {
            g2.append(&mut entries);
            break;
        }
        // next entry: the one with the strongest preference for a group
        let mut pick = 0;
        let mut best_diff = f64::NEG_INFINITY;
        for (i, e) in entries.iter().enumerate() {
            let eb = e.bbox();
            let diff = (b1.enlargement(&eb) - b2.enlargement(&eb)).abs();
            if diff > best_diff {
                best_diff = diff;
                pick = i;
            }
        }
        let e = entries.swap_remove(pick);
        let eb = e.bbox();
        let key1 = (b1.enlargement(&eb), b1.size(), g1.len());
        let key2 = (b2.enlargement(&eb), b2.size(), g2.len());
        if key1 <= key2 {
            b1 = b1.union(&eb);
            g1.push(e);
        } else {
            b2 = b2.union(&eb);
            g2.push(e);
        }
    }
    (g1, g2)
}

/// Where the transmission success rate of a candidate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TsrModel {
    /// Use the rate the provider advertised.
    #[default]
    Advertised,
    /// Recompute from the provider-to-consumer distance.
    Distance(TsrParams),
}

/// Axis-aligned search cube around the query: the ESD square in space times
/// the query window.
pub fn search_cube(q: &EnergyQuery, esd: f64) -> StBox {
    StBox {
        min: [q.l.x - esd, q.l.y - esd, q.t],
        max: [q.l.x + esd, q.l.y + esd, q.t + q.d],
    }
}

/// Services within `esd` of the consumer that are available during the
/// query window, clipped to the window. Services fully inside the window
/// keep their deliverable energy; clipped ones have it recomputed for the
/// overlap. Output is ordered by service id.
pub fn select_candidates(
    idx: &StIndex,
    q: &EnergyQuery,
    esd: f64,
    tsr: TsrModel,
) -> Result<Vec<PartialService>> {
    if !(esd > 0.0) {
        return Err(Error::InvalidArgument(format!("esd must be positive, got {esd}")));
    }
    let window = q.window();
    let mut out = Vec::new();
    for i in idx.query(&search_cube(q, esd)) {
        let s = idx.get(i);
        let distance = s.loc.distance(&q.l);
        if distance > esd {
            continue;
        }
        let Some(overlap) = s.interval.intersect(&window) else {
            continue;
        };
        let rate = match tsr {
            TsrModel::Advertised => s.tsr,
            TsrModel::Distance(p) => compute_tsr(&p, distance)?.value,
        };
        let mut whole = PartialService::whole(s);
        if overlap == s.interval && tsr == TsrModel::Advertised {
            out.push(whole);
        } else {
            whole.tsr = rate;
            out.push(whole.slice(overlap));
        }
    }
    out.sort_by(|a, b| a.parent_eid.cmp(&b.parent_eid));
    Ok(out)
}
